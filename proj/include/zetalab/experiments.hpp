#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "zetalab/scale_grid.hpp"

namespace zetalab {

struct ExperimentConfig {
  std::string experiment;
  nlohmann::json params = nlohmann::json::object();
  uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware default
  std::string out_path;
  std::string format = "json";  // json | csv
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string started;   // wall-clock envelope, excluded from determinism
  std::string finished;
  nlohmann::json results;
  bool passed = true;

  // canonical body; identical configs reproduce these bytes exactly
  std::string results_bytes() const;
  std::string to_string(const std::string& format) const;
};

const std::vector<std::string>& experiment_names();

// Validates config.params against the experiment schema; returns every
// violation rather than the first.
std::vector<std::string> validate_config(const ExperimentConfig& config);

// Dispatches to the owning module. Throws std::invalid_argument listing all
// schema violations; on success, writes the report atomically when out_path
// is set.
ExperimentReport run_experiment(const ExperimentConfig& config);

// The 2-checkpoint grid used by the desk-scale barrier experiments: the top
// cutoff T_2 stays sieveable while the checkpoint spacing keeps the exact
// unit step in log log scale.
GridParams desk_grid_params(double log_t = 17.9343, double k = 0.5, double cutoff = 1.0);

}  // namespace zetalab
