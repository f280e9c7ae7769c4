#include "msts/model.hpp"

#include <algorithm>
#include <cmath>

namespace msts {

int CouplingSpec::size() const {
  if (matrix) return static_cast<int>(matrix->rows());
  if (schmidt) return static_cast<int>(schmidt->u.rows());
  return 0;
}

double pump_envelope(const PumpModel& pump, double t) {
  switch (pump.kind) {
    case PumpModel::Kind::cw:
      return pump.alpha_sq;
    case PumpModel::Kind::decaying:
      return pump.alpha_sq * std::exp(-2.0 * pump.gamma_p * t);
    case PumpModel::Kind::envelope: {
      const auto& s = pump.samples;
      if (s.empty()) return 0.0;
      if (t <= s.front().first) return s.front().second;
      if (t >= s.back().first) return s.back().second;
      auto it = std::upper_bound(s.begin(), s.end(), t,
                                 [](double v, const auto& p) { return v < p.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (t - lo.first) / (hi.first - lo.first);
      return (1.0 - w) * lo.second + w * hi.second;
    }
  }
  return 0.0;
}

complexd pump_amplitude_squared(const PumpModel& pump, double t) {
  return pump_envelope(pump, t) * std::polar(1.0, -2.0 * pump.omega_p * t);
}

complexd pump_drive(const PumpModel& pump, double t) {
  if (pump.process == PumpProcess::sfwm) return pump_amplitude_squared(pump, t);
  return std::sqrt(pump_envelope(pump, t)) * std::polar(1.0, -pump.omega_p * t);
}

double pump_drive_envelope(const PumpModel& pump, double t) {
  const double env = pump_envelope(pump, t);
  return pump.process == PumpProcess::sfwm ? env : std::sqrt(env);
}

double pump_carrier_rate(const PumpModel& pump) {
  return pump.process == PumpProcess::sfwm ? -2.0 * pump.omega_p : -pump.omega_p;
}

double pump_drive_integral(const PumpModel& pump, double t) {
  switch (pump.kind) {
    case PumpModel::Kind::cw:
      return pump_drive_envelope(pump, 0.0) * t;
    case PumpModel::Kind::decaying: {
      const double rate = pump.process == PumpProcess::sfwm ? 2.0 * pump.gamma_p : pump.gamma_p;
      const double a0 = pump_drive_envelope(pump, 0.0);
      if (rate <= 0.0) return a0 * t;
      return a0 * (1.0 - std::exp(-rate * t)) / rate;
    }
    case PumpModel::Kind::envelope: {
      // trapezoid on the sample grid plus the clamped tails
      double acc = 0.0;
      double prev_t = 0.0, prev_v = pump_drive_envelope(pump, 0.0);
      for (const auto& [ts, vs] : pump.samples) {
        (void)vs;
        if (ts <= 0.0) continue;
        const double tt = std::min(ts, t);
        const double vv = pump_drive_envelope(pump, tt);
        acc += 0.5 * (prev_v + vv) * (tt - prev_t);
        prev_t = tt;
        prev_v = vv;
        if (ts >= t) break;
      }
      if (prev_t < t) acc += pump_drive_envelope(pump, t) * (t - prev_t);
      return acc;
    }
  }
  return 0.0;
}

Model validate(const QuasimodeSet& structure, const CouplingSpec& coupling) {
  const int m = structure.size();
  if (m < 1) raise(errc::dimension_mismatch, "structure must contain at least one quasimode");
  if (structure.gamma.size() != m)
    raise(errc::dimension_mismatch, "omega and gamma lengths differ");
  if (!structure.omega.allFinite() || !structure.gamma.allFinite())
    raise(errc::non_finite_state, "quasimode frequencies must be finite");
  if (structure.gamma.minCoeff() < 0.0)
    raise(errc::config_error, "decay rates must be nonnegative");
  if (!structure.labels.empty() && static_cast<int>(structure.labels.size()) != m)
    raise(errc::dimension_mismatch, "label count differs from mode count");

  Model model;
  model.structure = structure;

  if (coupling.matrix && coupling.schmidt)
    raise(errc::config_error, "coupling must provide exactly one of matrix/schmidt");
  if (!coupling.matrix && !coupling.schmidt)
    raise(errc::config_error, "coupling is empty");

  if (coupling.matrix) {
    const auto& g = *coupling.matrix;
    if (g.rows() != g.cols() || g.rows() != m)
      raise(errc::dimension_mismatch,
            "coupling matrix is " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()) +
                " but structure has " + std::to_string(m) + " modes");
    const double gn = g.norm();
    const double asym = (g - g.transpose()).norm();
    if (asym > 1e-12 * std::max(gn, 1e-300))
      raise(errc::not_symmetric,
            "coupling matrix not symmetric, ||G - G^T||_F = " + std::to_string(asym) +
                " (||G||_F = " + std::to_string(gn) + ")");
    CouplingSpec cs;
    cs.matrix = 0.5 * (g + g.transpose()) * coupling.scale;
    cs.scale = 1.0;
    model.coupling = std::move(cs);
  } else {
    const auto& sc = *coupling.schmidt;
    if (sc.u.rows() != m || sc.u.cols() != m || sc.lambda.size() != m)
      raise(errc::dimension_mismatch, "schmidt coupling dimensions disagree with structure");
    const double uerr =
        (sc.u.adjoint() * sc.u - Eigen::MatrixXcd::Identity(m, m)).norm();
    if (uerr > 1e-10)
      raise(errc::not_unitary, "schmidt U is not unitary, ||U^dag U - I||_F = " +
                                   std::to_string(uerr));
    CouplingSpec cs;
    CouplingSpec::Schmidt s2{sc.u, sc.lambda * coupling.scale};
    cs.schmidt = std::move(s2);
    cs.scale = 1.0;
    model.coupling = std::move(cs);
  }

  for (int i = 0; i < m; ++i) {
    const double w = structure.omega(i), gmm = structure.gamma(i);
    if (gmm > 0.0 && w / (2.0 * gmm) < 1e3)
      model.warnings.push_back("mode " + std::to_string(i) + " has quality factor " +
                               std::to_string(w / (2.0 * gmm)) +
                               " < 1e3; quasimode model assumptions degrade");
  }
  return model;
}

}  // namespace msts
