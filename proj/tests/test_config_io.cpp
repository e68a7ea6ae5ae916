#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nstorus/config.hpp"
#include "nstorus/errors.hpp"
#include "nstorus/forcing.hpp"
#include "nstorus/io.hpp"
#include "test_util.hpp"

using namespace nstorus;
namespace fs = std::filesystem;

namespace {

const char* kKickConfig = R"json({
  "model": {"kind": "kick", "T": 0.5, "k": 2},
  "physics": {"nu": 0.1, "M": 4, "dt": 0.01},
  "law": {"ids": {"set_literal": "(1,0),(1,1)"}, "b": {"rule": "finite", "scale": 0.5},
          "pi": "gaussian"},
  "projection": {"ids": {"first_oscillatory": 2}},
  "init": {"modes": [{"j": [1, 0], "c": 0.3}, {"mean": 1, "c": 0.1}]},
  "run": {"n": 16, "seed": 9, "workers": 2}
})json";

fs::path temp_dir() {
  const fs::path d = fs::temp_directory_path() / "nstorus_test_io";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("experiment config parses into a runnable ensemble spec") {
  const ExperimentConfig cfg = parse_experiment_config(kKickConfig);
  CHECK(cfg.ensemble.model == ForcingModel::kick);
  CHECK(cfg.ensemble.kick_T == 0.5);
  CHECK(cfg.ensemble.kick_count == 2);
  CHECK(cfg.ensemble.physics.truncation == 4);
  CHECK(cfg.ensemble.law.dim() == 4);  // auto-symmetrized pair of wavevectors
  for (double b : cfg.ensemble.law.b) CHECK(b == 0.5);
  CHECK(cfg.ensemble.projection.dim() == 2);
  CHECK(cfg.ensemble.u0.coeff(BasisId::osc(1, 0)) == 0.3);
  CHECK(cfg.ensemble.u0.coeff(BasisId::mean(1)) == 0.1);
  CHECK(cfg.n == 16);
  CHECK(cfg.ensemble.seed == 9);
  CHECK(cfg.raw_text == kKickConfig);

  // the parsed spec actually runs
  const SampleSet s = run_ensemble(cfg.ensemble, 4);
  CHECK(s.n() == 4);
}

TEST_CASE("config errors are specific") {
  CHECK_THROWS_AS(parse_experiment_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("{}"), ConfigError);

  // a projection id outside the truncation box names the offender
  std::string bad = kKickConfig;
  const auto pos = bad.find("{\"first_oscillatory\": 2}");
  bad.replace(pos, std::string("{\"first_oscillatory\": 2}").size(),
              "{\"wavevectors\": [[9, 0]], \"symmetrize\": false}");
  try {
    parse_experiment_config(bad);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(9,0)") != std::string::npos);
  }

  // law rule must be known
  std::string badrule = kKickConfig;
  const auto rp = badrule.find("finite");
  badrule.replace(rp, 6, "cubicc");
  CHECK_THROWS_AS(parse_experiment_config(badrule), ConfigError);
}

TEST_CASE("idspec variants") {
  CHECK(parse_idspec(nlohmann::json::parse(R"json({"first_oscillatory": 4})json"), 3).dim() == 4);
  const SubspaceSpec w =
      parse_idspec(nlohmann::json::parse(R"json({"wavevectors": [[1,0]], "symmetrize": false})json"), 3);
  CHECK(w.dim() == 1);
  const SubspaceSpec s =
      parse_idspec(nlohmann::json::parse(R"json({"set_literal": "(1,0)", "include_mean": true})json"), 3);
  CHECK(s.dim() == 4);  // two mean modes + (1,0) and (-1,0)
  CHECK_THROWS_AS(parse_idspec(nlohmann::json::parse(R"json({"nope": 1})json"), 3), ConfigError);
}

TEST_CASE("built-in coefficient sequences") {
  const SubspaceSpec ids = SubspaceSpec::first_oscillatory(6, 3);
  const CoefficientLaw g = CoefficientLaw::geometric(ids, ScalarLaw::gaussian, 2.0);
  CHECK(g.b[0] == 1.0);
  CHECK(g.b[1] == 0.5);
  CHECK(g.b[5] == doctest::Approx(2.0 / 64.0));
  const CoefficientLaw p = CoefficientLaw::polynomial(ids, ScalarLaw::uniform);
  CHECK(p.b[0] == 1.0);
  CHECK(p.b[3] == doctest::Approx(0.25));
  // partial sums approach pi^2/6 from below
  CHECK(p.sum_b_squared() < testutil::kPi * testutil::kPi / 6.0);
  CHECK(p.sum_b_squared() > 0.9 * testutil::kPi * testutil::kPi / 6.0 - 0.2);
}

TEST_CASE("ensemble container round-trips bit-exactly with its sidecar") {
  const fs::path dir = temp_dir();
  const fs::path file = dir / "roundtrip.ens";

  Eigen::MatrixXd m(7, 3);
  RngStream rng(1, 0);
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) m(r, c) = rng.gaussian() * std::pow(10.0, r - 3);
  nlohmann::json meta = {{"note", "roundtrip"}, {"seed", 1}};
  write_ensemble_matrix(file, m, &meta);

  nlohmann::json back;
  const Eigen::MatrixXd got = read_ensemble_matrix(file, &back);
  CHECK(got == m);
  CHECK(back == meta);

  // header is the documented 32 bytes: magic, version, cols, rows
  std::ifstream raw(file, std::ios::binary);
  char magic[16];
  raw.read(magic, 16);
  CHECK(std::string(magic, 16) == std::string(kEnsembleMagic, 16));
  std::uint32_t version = 0, cols = 0;
  std::uint64_t rows = 0;
  raw.read(reinterpret_cast<char*>(&version), 4);
  raw.read(reinterpret_cast<char*>(&cols), 4);
  raw.read(reinterpret_cast<char*>(&rows), 8);
  CHECK(version == kEnsembleVersion);
  CHECK(cols == 3);
  CHECK(rows == 7);
  CHECK(fs::file_size(file) == 32 + 7 * 3 * 8);

  CHECK_THROWS_AS(read_ensemble_matrix(dir / "missing.ens"), ConfigError);
  std::ofstream junk(dir / "junk.ens", std::ios::binary);
  junk << "definitely not an ensemble container at all";
  junk.close();
  CHECK_THROWS_AS(read_ensemble_matrix(dir / "junk.ens"), ConfigError);
}

TEST_CASE("trajectory csv carries id-labelled columns") {
  const fs::path file = temp_dir() / "traj.csv";
  std::vector<std::pair<double, SpectralField>> snaps;
  snaps.emplace_back(0.0, SpectralField::mode(1, BasisId::osc(1, 0), 1.0));
  snaps.emplace_back(0.5, SpectralField::mode(1, BasisId::osc(1, 0), 0.5));
  write_trajectory_csv(file, snaps);

  std::ifstream in(file);
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  CHECK(header.substr(0, 5) == "time,");
  CHECK(header.find("mean_x") != std::string::npos);
  CHECK(header.find("e_1_0") != std::string::npos);
  CHECK(std::count(header.begin(), header.end(), ',') == 10);  // time + 10 ids
  CHECK(row0.substr(0, 2) == "0,");
  CHECK(row1.substr(0, 4) == "0.5,");
}

TEST_CASE("every shipped example config parses and validates") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(NSTORUS_CONFIGS_DIR)) {
    if (entry.path().extension() != ".json") continue;
    INFO("config: ", entry.path().string());
    std::ifstream in(entry.path());
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK_NOTHROW(parse_experiment_config(ss.str()));
    ++seen;
  }
  CHECK(seen >= 6);
}

TEST_CASE("sampled kicks and paths export as container payloads") {
  RngStream rng(12, 0);
  const SubspaceSpec ids = SubspaceSpec::first_oscillatory(4, 2);
  const CoefficientLaw law = CoefficientLaw::finite(ids, ScalarLaw::gaussian, 0.7);

  const KickSequence ks = sample_kicks(law, 3, 0.5, 2, rng);
  const Eigen::MatrixXd km = ensemble_matrix_of(ks);
  CHECK(km.rows() == 3);
  CHECK(km.cols() == ks.kicks.front().size());
  CHECK(km.row(1).transpose() == ks.kicks[1].coeffs());

  const ForcingSignal path = sample_wiener_path(law, 1.0, 0.25, 2, rng);
  const Eigen::MatrixXd pm = ensemble_matrix_of(path);
  CHECK(pm.rows() == 5);
  CHECK(pm(2, 0) == 0.5);  // time column
  CHECK(pm.row(2).tail(path.fields[2].size()).transpose() == path.fields[2].coeffs());

  // both survive the binary container bit-exactly
  const fs::path file = temp_dir() / "kicks.ens";
  write_ensemble_matrix(file, km);
  CHECK(read_ensemble_matrix(file) == km);
}

TEST_CASE("digests are stable and sensitive") {
  const SpectralField a = SpectralField::mode(3, BasisId::osc(1, 0), 1.0);
  SpectralField b = a;
  CHECK(digest_of(a) == digest_of(b));
  b.set_coeff(BasisId::osc(0, 1), 1e-300);
  CHECK(digest_of(a) != digest_of(b));

  KickSequence ks;
  ks.segment_length = 0.5;
  ks.kicks = {a, b};
  const std::uint64_t d1 = digest_of(ks);
  ks.segment_length = 0.25;
  CHECK(digest_of(ks) != d1);
}

TEST_CASE("deterministic float formatting survives a round trip") {
  for (double x : {0.0, -0.0, 1.0 / 3.0, 1e-300, -2.5e17, 0.1}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
}
