#include "nstorus/config.hpp"

#include <fstream>
#include <sstream>

#include "nstorus/errors.hpp"
#include "nstorus/saturation.hpp"

namespace nstorus {

namespace {

const nlohmann::json& require_block(const nlohmann::json& doc, const std::string& name) {
  if (!doc.contains(name))
    throw ConfigError("config is missing the '" + name + "' block");
  return doc.at(name);
}

template <class T>
T field_or(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

template <class T>
T require_field(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing required config field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

SimParams parse_physics(const nlohmann::json& j) {
  SimParams p;
  p.nu = require_field<double>(j, "nu");
  p.truncation = require_field<int>(j, "M");
  p.dt = require_field<double>(j, "dt");
  const std::string integ = field_or<std::string>(j, "integrator", "exp_rk4");
  if (integ == "exp_rk4")
    p.integrator = TimeStepper::exp_rk4;
  else if (integ == "exp_rk2")
    p.integrator = TimeStepper::exp_rk2;
  else
    throw ConfigError("unknown integrator '" + integ + "'");
  const std::string nl = field_or<std::string>(j, "nonlinearity", "pseudospectral_2/3");
  if (nl == "pseudospectral_2/3" || nl == "pseudospectral")
    p.nonlinearity = NonlinearityPath::pseudospectral;
  else if (nl == "direct_convolution" || nl == "direct")
    p.nonlinearity = NonlinearityPath::direct_convolution;
  else
    throw ConfigError("unknown nonlinearity path '" + nl + "'");
  p.validate();
  return p;
}

ScalarLaw parse_scalar_law(const std::string& s) {
  if (s == "gaussian") return ScalarLaw::gaussian;
  if (s == "uniform") return ScalarLaw::uniform;
  throw ConfigError("unknown scalar law '" + s + "' (expected gaussian or uniform)");
}

CoefficientLaw parse_law(const nlohmann::json& j, int truncation) {
  SubspaceSpec ids = parse_idspec(require_block(j, "ids"), truncation);
  const ScalarLaw pi = parse_scalar_law(field_or<std::string>(j, "pi", "gaussian"));
  const nlohmann::json& bj = require_block(j, "b");
  const std::string rule = require_field<std::string>(bj, "rule");
  const double scale = field_or<double>(bj, "scale", 1.0);
  if (rule == "geometric") return CoefficientLaw::geometric(std::move(ids), pi, scale);
  if (rule == "polynomial") return CoefficientLaw::polynomial(std::move(ids), pi, scale);
  if (rule == "finite") return CoefficientLaw::finite(std::move(ids), pi, scale);
  if (rule == "zero") return CoefficientLaw::zero(std::move(ids));
  throw ConfigError("unknown b rule '" + rule + "'");
}

SpectralField parse_init(const nlohmann::json& doc, int truncation) {
  SpectralField u0(truncation);
  if (!doc.contains("init")) return u0;
  const nlohmann::json& j = doc.at("init");
  for (const auto& m : field_or<nlohmann::json>(j, "modes", nlohmann::json::array())) {
    const double c = require_field<double>(m, "c");
    if (m.contains("mean")) {
      u0.set_coeff(BasisId::mean(require_field<int>(m, "mean")), c);
    } else {
      const auto jv = require_field<std::vector<int>>(m, "j");
      if (jv.size() != 2) throw ConfigError("init mode 'j' must be a pair");
      u0.set_coeff(BasisId::osc(jv[0], jv[1]), c);
    }
  }
  return u0;
}

}  // namespace

SubspaceSpec parse_idspec(const nlohmann::json& spec, int truncation) {
  if (spec.contains("first_oscillatory"))
    return SubspaceSpec::first_oscillatory(spec.at("first_oscillatory").get<int>(), truncation);
  if (spec.contains("set_literal")) {
    const SymmetricSet K = SymmetricSet::parse(spec.at("set_literal").get<std::string>());
    return subspace_of(K, truncation, field_or<bool>(spec, "include_mean", false));
  }
  if (spec.contains("wavevectors")) {
    const bool symmetrize = field_or<bool>(spec, "symmetrize", true);
    const bool include_mean = field_or<bool>(spec, "include_mean", false);
    std::vector<BasisId> ids;
    if (include_mean) {
      ids.push_back(BasisId::mean(1));
      ids.push_back(BasisId::mean(2));
    }
    std::vector<LatticePoint> pts;
    for (const auto& w : spec.at("wavevectors")) {
      const auto v = w.get<std::vector<int>>();
      if (v.size() != 2) throw ConfigError("wavevector entries must be pairs");
      pts.push_back({v[0], v[1]});
    }
    if (symmetrize) return subspace_of(SymmetricSet(pts), truncation, include_mean);
    for (const auto& p : pts) {
      if (std::max(std::abs(p[0]), std::abs(p[1])) > truncation)
        throw ConfigError("wavevector " + format_point(p) + " exceeds truncation box " +
                          std::to_string(truncation));
      ids.push_back(BasisId::osc(p[0], p[1]));
    }
    return SubspaceSpec(std::move(ids));
  }
  throw ConfigError("idspec needs 'first_oscillatory', 'wavevectors', or 'set_literal'");
}

nlohmann::json ExperimentConfig::block(const std::string& name) const {
  if (doc.contains(name)) return doc.at(name);
  return nlohmann::json::object();
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.raw_text = text;
  try {
    cfg.doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  const nlohmann::json& physics = require_block(cfg.doc, "physics");
  cfg.ensemble.physics = parse_physics(physics);
  const int M = cfg.ensemble.physics.truncation;

  const nlohmann::json& model = require_block(cfg.doc, "model");
  cfg.ensemble.model = forcing_model_from_string(require_field<std::string>(model, "kind"));

  cfg.ensemble.law = parse_law(require_block(cfg.doc, "law"), M);
  cfg.ensemble.projection = parse_idspec(require_block(require_block(cfg.doc, "projection"), "ids"), M);
  cfg.ensemble.u0 = parse_init(cfg.doc, M);

  const nlohmann::json run = cfg.doc.contains("run") ? cfg.doc.at("run") : nlohmann::json::object();
  if (cfg.ensemble.model == ForcingModel::kick) {
    cfg.ensemble.kick_T = require_field<double>(model, "T");
    cfg.ensemble.kick_count = require_field<int>(model, "k");
  } else {
    cfg.ensemble.t = require_field<double>(run, "t");
    if (cfg.ensemble.model == ForcingModel::colored)
      cfg.ensemble.tau = require_field<double>(model, "tau");
  }
  cfg.ensemble.path_dt = field_or<double>(run, "path_dt", 0.0);
  cfg.ensemble.seed = field_or<std::uint64_t>(run, "seed", 0);
  cfg.ensemble.workers = field_or<int>(run, "workers", 1);
  cfg.n = field_or<long>(run, "n", 1);
  if (cfg.n < 1) throw ConfigError("run.n must be >= 1");

  cfg.ensemble.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

}  // namespace nstorus
