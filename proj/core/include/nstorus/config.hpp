// Experiment configuration: one JSON document per run with blocks
//   model      {"kind": "kick"|"colored"|"white", ...}
//   physics    {"nu", "M", "dt", "integrator", "nonlinearity"}
//   law        {"ids": <idspec>, "b": {"rule", "scale"}, "pi"}
//   projection {"ids": <idspec>}
//   init       {"modes": [{"j": [j1,j2], "c": amp} | {"mean": 1|2, "c": amp}]}
//   run        {"t" | implied by kicks, "n", "seed", "path_dt", ...}
// plus optional per-subcommand blocks ("density", "jacobian", "tv",
// "support", "stationary", "saturate") consumed by the tool. An idspec is
// one of
//   {"wavevectors": [[1,0],[1,1]], "symmetrize": true, "include_mean": false}
//   {"first_oscillatory": N}
//   {"set_literal": "(1,0),(1,1)"}            (always symmetrized)
// The parsed config fully determines a run given the code version; the raw
// text is kept verbatim for echoing into output manifests.

#pragma once

#include <string>

#include <json.hpp>

#include "nstorus/density.hpp"

namespace nstorus {

struct ExperimentConfig {
  std::string raw_text;
  nlohmann::json doc;
  EnsembleSpec ensemble;
  long n = 1;

  // Per-subcommand block, or an empty object when absent.
  nlohmann::json block(const std::string& name) const;
};

SubspaceSpec parse_idspec(const nlohmann::json& spec, int truncation);
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace nstorus
