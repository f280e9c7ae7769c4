#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "msts/config.hpp"
#include "msts/dynamics.hpp"
#include "msts/observables.hpp"

namespace msts {

struct RunResult {
  Trajectory trajectory;
  SchmidtBasis basis;
  std::vector<SecondMoments> moments;  // one per sample
  std::string csv;
  std::string summary;  // JSON text
};

/// Full pipeline: validate -> Schmidt basis -> integrate -> observables ->
/// CSV + summary. All floats in the CSV carry 17 significant digits.
RunResult run(const SimConfig& cfg);

/// Run several configs, at most `threads` at a time (0: MSTS_THREADS or 1).
/// Returns one result per config, in order.
std::vector<RunResult> run_many(const std::vector<SimConfig>& cfgs, int threads = 0);

}  // namespace msts
