#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>

#include "msts/errors.hpp"

namespace msts {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_init = 0.0;  // 0: choose automatically
  double h_max = 0.0;   // 0: the full span
  long max_steps = 100000000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

/// One accepted Dormand-Prince step with the standard quartic interpolant.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  Eigen::VectorXd rcont1, rcont2, rcont3, rcont4, rcont5;

  Eigen::VectorXd eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return rcont1 + th * (rcont2 + th1 * (rcont3 + th * (rcont4 + th1 * rcont5)));
  }
};

/// Explicit embedded Runge-Kutta 5(4) (Dormand-Prince) with dense output.
///
/// The driver is exposed as a resettable stepper so callers can adjust the
/// state between accepted steps (used for the squeezing-amplitude gauge flip).
class Dopri5 {
 public:
  using Rhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

  Dopri5(Rhs rhs, double t0, Eigen::VectorXd y0, double t_end, OdeOptions opts);

  /// Advance one accepted step. Returns false once t_end has been reached.
  bool step(DenseSegment& seg);

  void reset_state(const Eigen::VectorXd& y);

  double t() const { return t_; }
  const Eigen::VectorXd& y() const { return y_; }
  const OdeStats& stats() const { return stats_; }

 private:
  void eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& f);
  double error_norm(const Eigen::VectorXd& y_new, const Eigen::VectorXd& err) const;
  double initial_step();

  Rhs rhs_;
  double t_, t_end_, h_, dir_;
  Eigen::VectorXd y_, f0_;
  bool have_f0_ = false;
  OdeOptions opts_;
  OdeStats stats_;
};

}  // namespace msts
