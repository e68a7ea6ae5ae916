#include "nstorus/basis.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "nstorus/errors.hpp"

namespace nstorus {

BasisId BasisId::mean(int axis) {
  if (axis != 1 && axis != 2) throw ConfigError("mean mode axis must be 1 or 2");
  BasisId id;
  id.axis = static_cast<std::int8_t>(axis);
  return id;
}

BasisId BasisId::osc(int j1, int j2) {
  if (j1 == 0 && j2 == 0) throw ConfigError("oscillatory id needs a nonzero wavevector");
  BasisId id;
  id.j1 = j1;
  id.j2 = j2;
  return id;
}

int BasisId::box_radius() const { return std::max(std::abs(j1), std::abs(j2)); }

std::string BasisId::label() const {
  if (axis == 1) return "mean_x";
  if (axis == 2) return "mean_y";
  return "e_" + std::to_string(j1) + "_" + std::to_string(j2);
}

BasisId basis_id_from_label(const std::string& label) {
  if (label == "mean_x") return BasisId::mean(1);
  if (label == "mean_y") return BasisId::mean(2);
  if (label.rfind("e_", 0) == 0) {
    const size_t sep = label.find('_', 2);
    if (sep != std::string::npos) {
      try {
        const int j1 = std::stoi(label.substr(2, sep - 2));
        const int j2 = std::stoi(label.substr(sep + 1));
        return BasisId::osc(j1, j2);
      } catch (const std::exception&) {
      }
    }
  }
  throw ConfigError("not a basis id label: '" + label + "'");
}

bool basis_less(const BasisId& a, const BasisId& b) {
  if (a.eigenvalue() != b.eigenvalue()) return a.eigenvalue() < b.eigenvalue();
  if (a.is_mean() != b.is_mean()) return a.is_mean();  // only ties at eigenvalue 0
  if (a.is_mean()) return a.axis < b.axis;
  if (a.j1 != b.j1) return a.j1 < b.j1;
  return a.j2 < b.j2;
}

std::vector<BasisId> basis_enumerate(int box_radius) {
  if (box_radius < 1) throw ConfigError("truncation box radius must be >= 1");
  std::vector<BasisId> ids;
  ids.reserve(2 + (2 * box_radius + 1) * (2 * box_radius + 1) - 1);
  ids.push_back(BasisId::mean(1));
  ids.push_back(BasisId::mean(2));
  for (int j1 = -box_radius; j1 <= box_radius; ++j1)
    for (int j2 = -box_radius; j2 <= box_radius; ++j2)
      if (j1 != 0 || j2 != 0) ids.push_back(BasisId::osc(j1, j2));
  std::stable_sort(ids.begin(), ids.end(), basis_less);
  return ids;
}

BasisIndex::BasisIndex(int box_radius)
    : box_radius_(box_radius), ids_(basis_enumerate(box_radius)) {}

std::shared_ptr<const BasisIndex> BasisIndex::get(int box_radius) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const BasisIndex>> cache;
  std::scoped_lock lock(mu);
  auto& entry = cache[box_radius];
  if (!entry) entry = std::shared_ptr<const BasisIndex>(new BasisIndex(box_radius));
  return entry;
}

bool BasisIndex::contains(const BasisId& id) const {
  return id.is_mean() || id.box_radius() <= box_radius_;
}

int BasisIndex::index_of(const BasisId& id) const {
  if (!contains(id))
    throw ConfigError("basis id " + id.label() + " lies outside truncation box " +
                      std::to_string(box_radius_));
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id, basis_less);
  return static_cast<int>(it - ids_.begin());
}

SubspaceSpec::SubspaceSpec(std::vector<BasisId> ids) : ids_(std::move(ids)) {
  std::unordered_set<BasisId> seen;
  for (const auto& id : ids_)
    if (!seen.insert(id).second)
      throw ConfigError("subspace spec repeats id " + id.label());
}

SubspaceSpec SubspaceSpec::first_oscillatory(int n, int box_radius) {
  auto index = BasisIndex::get(box_radius);
  if (n < 0 || n + 2 > index->size())
    throw ConfigError("not enough oscillatory modes in truncation box " +
                      std::to_string(box_radius));
  std::vector<BasisId> ids(index->ids().begin() + 2, index->ids().begin() + 2 + n);
  return SubspaceSpec(std::move(ids));
}

int SubspaceSpec::required_box_radius() const {
  int r = 1;
  for (const auto& id : ids_) r = std::max(r, id.box_radius());
  return r;
}

bool SubspaceSpec::contains(const BasisId& id) const {
  return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

}  // namespace nstorus
