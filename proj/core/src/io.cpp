#include "nstorus/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>

#include "nstorus/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "ensemble container assumes a little-endian host");

namespace nstorus {

namespace {
std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".meta.json";
  return p;
}
}  // namespace

void write_ensemble_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& rows,
                           const nlohmann::json* meta_sidecar) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out.write(kEnsembleMagic, 16);
  const std::uint32_t version = kEnsembleVersion;
  const std::uint32_t cols = static_cast<std::uint32_t>(rows.cols());
  const std::uint64_t nrows = static_cast<std::uint64_t>(rows.rows());
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  out.write(reinterpret_cast<const char*>(&nrows), sizeof nrows);
  std::vector<double> row(cols);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) row[static_cast<size_t>(c)] = rows(r, c);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(sizeof(double) * cols));
  }
  if (!out) throw ConfigError("short write to " + path.string());
  if (meta_sidecar) {
    std::ofstream ms(sidecar_path(path), std::ios::trunc);
    ms << meta_sidecar->dump(2) << "\n";
    if (!ms) throw ConfigError("cannot write sidecar for " + path.string());
  }
}

Eigen::MatrixXd read_ensemble_matrix(const std::filesystem::path& path,
                                     nlohmann::json* meta_sidecar) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  char magic[16];
  in.read(magic, 16);
  if (!in || std::memcmp(magic, kEnsembleMagic, 16) != 0)
    throw ConfigError(path.string() + " is not an ensemble container");
  std::uint32_t version = 0, cols = 0;
  std::uint64_t nrows = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  in.read(reinterpret_cast<char*>(&nrows), sizeof nrows);
  if (!in || version != kEnsembleVersion)
    throw ConfigError("unsupported ensemble version in " + path.string());
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(cols));
  std::vector<double> row(cols);
  for (std::uint64_t r = 0; r < nrows; ++r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(sizeof(double) * cols));
    if (!in) throw ConfigError("truncated ensemble container " + path.string());
    for (std::uint32_t c = 0; c < cols; ++c)
      rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  if (meta_sidecar) {
    std::ifstream ms(sidecar_path(path));
    if (ms) *meta_sidecar = nlohmann::json::parse(ms, nullptr, true);
  }
  return rows;
}

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<std::pair<double, SpectralField>>& snapshots) {
  if (snapshots.empty()) throw ConfigError("no snapshots to write");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  const auto& basis = snapshots.front().second.basis();
  out << "time";
  for (const auto& id : basis.ids()) out << "," << id.label();
  out << "\n";
  for (const auto& [t, u] : snapshots) {
    out << format_double(t);
    for (int i = 0; i < u.size(); ++i) out << "," << format_double(u.coeffs()[i]);
    out << "\n";
  }
  if (!out) throw ConfigError("short write to " + path.string());
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& headers,
               const Eigen::MatrixXd& rows) {
  if (static_cast<Eigen::Index>(headers.size()) != rows.cols())
    throw ConfigError("csv header count does not match columns");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  for (size_t i = 0; i < headers.size(); ++i) out << (i ? "," : "") << headers[i];
  out << "\n";
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c)
      out << (c ? "," : "") << format_double(rows(r, c));
    out << "\n";
  }
  if (!out) throw ConfigError("short write to " + path.string());
}

nlohmann::json basis_manifest(int truncation) {
  nlohmann::json j;
  j["truncation"] = truncation;
  j["domain"] = "torus_2pi";
  j["normalization"] = "unit_l2";
  j["order"] = "eigenvalue, then mean modes by axis, then lexicographic (j1,j2)";
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& id : basis_enumerate(truncation)) {
    nlohmann::json rec;
    rec["index"] = ids.size();
    rec["label"] = id.label();
    rec["eigenvalue"] = id.eigenvalue();
    if (id.is_mean()) {
      rec["kind"] = "mean";
      rec["axis"] = static_cast<int>(id.axis);
    } else {
      rec["kind"] = "oscillatory";
      rec["j"] = {id.j1, id.j2};
      rec["branch"] = id.is_sin() ? "sin" : "cos";
    }
    ids.push_back(std::move(rec));
  }
  j["ids"] = std::move(ids);
  return j;
}

Eigen::MatrixXd ensemble_matrix_of(const KickSequence& ks) {
  ks.validate();
  Eigen::MatrixXd m(ks.count(), ks.kicks.front().size());
  for (int i = 0; i < ks.count(); ++i) m.row(i) = ks.kicks[i].coeffs().transpose();
  return m;
}

Eigen::MatrixXd ensemble_matrix_of(const ForcingSignal& path) {
  path.validate();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(path.fields.size()),
                    1 + path.fields.front().size());
  for (size_t i = 0; i < path.fields.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = path.times[i];
    m.row(static_cast<Eigen::Index>(i)).tail(path.fields[i].size()) =
        path.fields[i].coeffs().transpose();
  }
  return m;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

namespace {
void hash_doubles(std::uint64_t& h, const double* data, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &data[i], sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFF;
      h *= 0x100000001B3ull;
    }
  }
}
}  // namespace

std::uint64_t digest_of(const SpectralField& u) {
  std::uint64_t h = fnv1a("field/" + std::to_string(u.truncation()));
  hash_doubles(h, u.coeffs().data(), static_cast<size_t>(u.coeffs().size()));
  return h;
}

std::uint64_t digest_of(const KickSequence& ks) {
  std::uint64_t h = fnv1a("kicks/" + std::to_string(ks.count()));
  hash_doubles(h, &ks.segment_length, 1);
  for (const auto& k : ks.kicks)
    hash_doubles(h, k.coeffs().data(), static_cast<size_t>(k.coeffs().size()));
  return h;
}

std::uint64_t digest_of(const SimParams& p) {
  std::uint64_t h = fnv1a("sim/" + std::to_string(p.truncation) + "/" +
                          std::to_string(static_cast<int>(p.integrator)) + "/" +
                          std::to_string(static_cast<int>(p.nonlinearity)));
  hash_doubles(h, &p.nu, 1);
  hash_doubles(h, &p.dt, 1);
  return h;
}

}  // namespace nstorus
