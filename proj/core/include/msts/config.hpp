#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "msts/crow.hpp"
#include "msts/model.hpp"

namespace msts {

/// Simulation configuration, one JSON document per run.
struct SimConfig {
  // structure: either explicit modes or a CROW generator
  QuasimodeSet modes;
  std::optional<crow::CrowParams> crow_params;

  // coupling: explicit matrix / schmidt pair / derived from the CROW
  CouplingSpec coupling;
  bool coupling_from_crow = false;

  PumpModel pump;

  struct Integration {
    double t_end = 0.0;
    double rtol = 1e-9;
    double atol = 1e-12;
    double output_stride = 0.0;
    bool time_in_tc = false;  // t_end/output_stride given in units of t_c
    double t_c = 0.0;         // seconds; required when time_in_tc
  } integration;

  struct Observables {
    std::vector<std::pair<int, int>> pairs;   // 0-based mode pairs
    bool optimal_angles = true;
    std::vector<std::pair<double, double>> fixed_angles;  // per pair when !optimal
    int sign = +1;       // +1 / -1
    bool both_signs = false;
  } observables;

  long seed = 0;

  /// Resolved structure (explicit or CROW-generated).
  QuasimodeSet structure() const;
  /// Resolved coupling (explicit or CROW-generated), with scale applied later
  /// by validate().
  CouplingSpec resolved_coupling() const;
  double t_end_seconds() const;
  double stride_seconds() const;
};

SimConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimConfig& cfg);

SimConfig load_config(const std::string& path);

/// FNV-1a 64-bit hash of the canonical (sorted-key) serialization.
std::string config_hash(const SimConfig& cfg);

}  // namespace msts
