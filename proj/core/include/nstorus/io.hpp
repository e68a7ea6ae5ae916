// File formats: the versioned binary ensemble container (16-byte magic,
// u32 version, u32 columns, u64 rows, then row-major little-endian f64),
// CSV trajectory/table export, the basis.json manifest, and FNV-1a digests
// used for provenance fields.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nstorus/basis.hpp"
#include "nstorus/dynamics.hpp"
#include "nstorus/field.hpp"

namespace nstorus {

inline constexpr char kEnsembleMagic[17] = "NSTORUS-ENSEMBLE";  // 16 bytes on disk
inline constexpr std::uint32_t kEnsembleVersion = 1;

// Raw matrix payload. Callers persist metadata in the JSON sidecar
// ("<path>.meta.json") written/read alongside when provided.
void write_ensemble_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& rows,
                           const nlohmann::json* meta_sidecar = nullptr);
Eigen::MatrixXd read_ensemble_matrix(const std::filesystem::path& path,
                                     nlohmann::json* meta_sidecar = nullptr);

// Trajectory snapshots as CSV: a time column then one column per basis id in
// canonical order, headers carrying the id labels.
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<std::pair<double, SpectralField>>& snapshots);

// Generic numeric table with headers.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& headers,
               const Eigen::MatrixXd& rows);

// Basis ordering/normalization manifest: one record per id with
// (index, kind, j, eigenvalue, label).
nlohmann::json basis_manifest(int truncation);

// Sampled forcing as container payloads: one row per kick (coefficients in
// canonical basis order) or per path sample (time in column 0, then
// coefficients).
Eigen::MatrixXd ensemble_matrix_of(const KickSequence& ks);
Eigen::MatrixXd ensemble_matrix_of(const ForcingSignal& path);

std::uint64_t fnv1a(std::string_view bytes);
std::uint64_t digest_of(const SpectralField& u);
std::uint64_t digest_of(const KickSequence& ks);
std::uint64_t digest_of(const SimParams& p);

// Deterministic shortest-round-trip formatting used by every CSV writer.
std::string format_double(double x);

}  // namespace nstorus
