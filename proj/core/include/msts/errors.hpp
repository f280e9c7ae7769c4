#pragma once

#include <stdexcept>
#include <string>

namespace msts {

enum class errc {
  dimension_mismatch,
  not_symmetric,
  not_unitary,
  pump_mode_not_on_grid,
  same_mode,
  resource_guard,
  cutoff_saturation,
  step_size_underflow,
  non_finite_state,
  no_convergence,
  config_error,
};

/// Typed runtime error carrying one of the error codes above.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::not_unitary: return "NotUnitary";
    case errc::pump_mode_not_on_grid: return "PumpModeNotOnGrid";
    case errc::same_mode: return "SameMode";
    case errc::resource_guard: return "ResourceGuard";
    case errc::cutoff_saturation: return "CutoffSaturation";
    case errc::step_size_underflow: return "StepSizeUnderflow";
    case errc::non_finite_state: return "NonFiniteState";
    case errc::no_convergence: return "NoConvergence";
    case errc::config_error: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace msts
