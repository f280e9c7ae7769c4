#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "msts/errors.hpp"

namespace msts {

using complexd = std::complex<double>;

/// Lossy modes of a structure: real frequencies and amplitude decay rates,
/// both in rad/s (the complex frequency is omega - i*gamma).
struct QuasimodeSet {
  Eigen::VectorXd omega;
  Eigen::VectorXd gamma;
  std::vector<std::string> labels;  // optional, one per mode when present

  int size() const { return static_cast<int>(omega.size()); }
  bool lossless(double tol = 0.0) const { return gamma.maxCoeff() <= tol; }
};

/// Nonlinear coupling, either as the M x M complex symmetric matrix G or as a
/// Schmidt-space pair (U, lambda) supplied directly. Entries are dimensionless
/// in a declared energy unit; `scale` converts an entry of 1 to rad/s with
/// hbar already divided out (the equations only ever use G/hbar).
struct CouplingSpec {
  std::optional<Eigen::MatrixXcd> matrix;
  struct Schmidt {
    Eigen::MatrixXcd u;
    Eigen::VectorXcd lambda;
  };
  std::optional<Schmidt> schmidt;
  double scale = 1.0;

  int size() const;
};

enum class PumpProcess { sfwm, spdc };

/// Classical undepleted pump. The envelope variant interpolates |alpha(t)|^2
/// linearly between samples and clamps outside the sampled range.
struct PumpModel {
  enum class Kind { cw, decaying, envelope };
  Kind kind = Kind::cw;
  double omega_p = 0.0;    // rad/s
  double alpha_sq = 0.0;   // cw: |alpha|^2; decaying: |alpha_0|^2
  double gamma_p = 0.0;    // decaying only, rad/s
  std::vector<std::pair<double, double>> samples;  // envelope: (t, |alpha(t)|^2)
  PumpProcess process = PumpProcess::sfwm;
};

/// |alpha(t)|^2, the real pump envelope.
double pump_envelope(const PumpModel& pump, double t);

/// alpha^2(t) = |alpha(t)|^2 e^{-2 i omega_P t}.
complexd pump_amplitude_squared(const PumpModel& pump, double t);

/// The drive that multiplies lambda_mu in the equations of motion:
/// alpha^2(t) for SFWM, alpha(t) for SPDC.
complexd pump_drive(const PumpModel& pump, double t);

/// Magnitude of pump_drive (the co-rotating envelope).
double pump_drive_envelope(const PumpModel& pump, double t);

/// d/dt arg(pump_drive): -2 omega_P for SFWM, -omega_P for SPDC.
double pump_carrier_rate(const PumpModel& pump);

/// Integral of the drive envelope over [0, t] (closed form for cw/decaying,
/// trapezoidal on the sample grid for envelope pumps).
double pump_drive_integral(const PumpModel& pump, double t);

/// Validated structure + coupling with the energy scale folded in
/// (matrix / lambda entries are in rad/s).
struct Model {
  QuasimodeSet structure;
  CouplingSpec coupling;
  std::vector<std::string> warnings;
};

/// Checks dimensions, symmetry of G (or unitarity of U) and normalizes units.
/// Emits a warning (not an error) for quality factors below 1e3.
Model validate(const QuasimodeSet& structure, const CouplingSpec& coupling);

}  // namespace msts
