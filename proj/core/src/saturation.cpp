#include "nstorus/saturation.hpp"

#include <cctype>

#include "nstorus/errors.hpp"

namespace nstorus {

SymmetricSet::SymmetricSet() { elems_.insert({0, 0}); }

SymmetricSet::SymmetricSet(const std::vector<LatticePoint>& generators) : SymmetricSet() {
  for (const auto& p : generators) insert(p);
}

void SymmetricSet::insert(const LatticePoint& p) {
  elems_.insert(p);
  elems_.insert({-p[0], -p[1]});
}

SymmetricSet SymmetricSet::parse(std::string_view literal) {
  std::vector<LatticePoint> pts;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < literal.size() && std::isspace(static_cast<unsigned char>(literal[i]))) ++i;
  };
  auto parse_int = [&]() -> int {
    skip_ws();
    size_t start = i;
    if (i < literal.size() && (literal[i] == '-' || literal[i] == '+')) ++i;
    while (i < literal.size() && std::isdigit(static_cast<unsigned char>(literal[i]))) ++i;
    if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(literal[start]))))
      throw ConfigError("expected integer in set literal at position " + std::to_string(start));
    return std::stoi(std::string(literal.substr(start, i - start)));
  };
  auto expect = [&](char c) {
    skip_ws();
    if (i >= literal.size() || literal[i] != c)
      throw ConfigError(std::string("expected '") + c + "' in set literal at position " +
                        std::to_string(i));
    ++i;
  };
  skip_ws();
  if (i == literal.size()) throw ConfigError("empty set literal");
  while (true) {
    expect('(');
    const int a = parse_int();
    expect(',');
    const int b = parse_int();
    expect(')');
    pts.push_back({a, b});
    skip_ws();
    if (i == literal.size()) break;
    expect(',');
  }
  return SymmetricSet(pts);
}

std::string format_point(const LatticePoint& p) {
  return "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + ")";
}

namespace {
bool admissible(const LatticePoint& m, const LatticePoint& n) {
  const long long m2 = static_cast<long long>(m[0]) * m[0] + static_cast<long long>(m[1]) * m[1];
  const long long n2 = static_cast<long long>(n[0]) * n[0] + static_cast<long long>(n[1]) * n[1];
  if (m2 == n2) return false;  // |m| != |n| on exact squared norms
  const long long cross = static_cast<long long>(m[0]) * n[1] - static_cast<long long>(m[1]) * n[0];
  return cross != 0;
}
}  // namespace

SymmetricSet grow_once(const SymmetricSet& K) {
  SymmetricSet out = K;
  const auto& e = K.elems();
  for (auto im = e.begin(); im != e.end(); ++im) {
    for (auto in = im; in != e.end(); ++in) {  // sums are symmetric in (m,n)
      if (admissible(*im, *in)) out.insert({(*im)[0] + (*in)[0], (*im)[1] + (*in)[1]});
    }
  }
  return out;
}

namespace {
std::vector<LatticePoint> missing_in_box(const SymmetricSet& K, int R) {
  std::vector<LatticePoint> missing;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b)
      if (!K.contains({a, b})) missing.push_back({a, b});
  return missing;
}
}  // namespace

CoverageReport saturating_within(const SymmetricSet& K, int box_radius, int max_iter) {
  if (box_radius < 0) throw ConfigError("coverage box radius must be >= 0");
  if (max_iter < 0) throw ConfigError("max_iter must be >= 0");
  CoverageReport rep;
  rep.box_radius = box_radius;
  rep.max_iter = max_iter;
  SymmetricSet cur = K;
  rep.sizes.push_back(cur.size());
  rep.missing = missing_in_box(cur, box_radius);
  rep.covered = rep.missing.empty();
  while (!rep.covered && rep.iters < max_iter) {
    SymmetricSet next = grow_once(cur);
    ++rep.iters;
    rep.sizes.push_back(next.size());
    if (next.size() == cur.size()) {
      rep.fixed_point = true;
      rep.fixed_point_iter = rep.iters;
      rep.missing = missing_in_box(next, box_radius);
      rep.covered = rep.missing.empty();
      return rep;
    }
    cur = std::move(next);
    rep.missing = missing_in_box(cur, box_radius);
    rep.covered = rep.missing.empty();
  }
  return rep;
}

SubspaceSpec subspace_of(const SymmetricSet& K, int truncation, bool include_mean) {
  std::vector<BasisId> ids;
  if (include_mean) {
    ids.push_back(BasisId::mean(1));
    ids.push_back(BasisId::mean(2));
  }
  for (const auto& p : K.elems()) {
    if (p[0] == 0 && p[1] == 0) continue;
    if (std::max(std::abs(p[0]), std::abs(p[1])) > truncation)
      throw ConfigError("set point " + format_point(p) + " exceeds truncation box " +
                        std::to_string(truncation));
    ids.push_back(BasisId::osc(p[0], p[1]));
  }
  std::sort(ids.begin(), ids.end(), basis_less);
  return SubspaceSpec(std::move(ids));
}

}  // namespace nstorus
