#include <gtest/gtest.h>

#include <cmath>

#include "msts/ode.hpp"

using namespace msts;

TEST(Dopri5, ExponentialDecayAccuracy) {
  auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = -0.7 * y; };
  OdeOptions opts;
  opts.rtol = 1e-10;
  opts.atol = 1e-13;
  Dopri5 solver(rhs, 0.0, Eigen::VectorXd::Ones(1), 5.0, opts);
  DenseSegment seg;
  while (solver.step(seg)) {
    // dense output stays on the analytic solution inside every step
    const double tm = seg.t0 + 0.37 * seg.h;
    EXPECT_NEAR(seg.eval(tm)(0), std::exp(-0.7 * tm), 1e-8);
  }
  EXPECT_NEAR(solver.y()(0), std::exp(-0.7 * 5.0), 1e-9);
  EXPECT_GT(solver.stats().accepted, 5);
}

TEST(Dopri5, HarmonicOscillatorEnergy) {
  auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(2);
    dy(0) = y(1);
    dy(1) = -4.0 * y(0);
  };
  Eigen::VectorXd y0(2);
  y0 << 1.0, 0.0;
  OdeOptions opts;
  opts.rtol = 1e-11;
  opts.atol = 1e-13;
  Dopri5 solver(rhs, 0.0, y0, 50.0, opts);
  DenseSegment seg;
  while (solver.step(seg)) {
  }
  const double e = 4.0 * solver.y()(0) * solver.y()(0) + solver.y()(1) * solver.y()(1);
  EXPECT_NEAR(e, 4.0, 1e-7);
}

TEST(Dopri5, BlowupRaises) {
  auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy = y.array().square();
  };
  OdeOptions opts;
  Dopri5 solver(rhs, 0.0, Eigen::VectorXd::Ones(1), 2.0, opts);
  DenseSegment seg;
  EXPECT_THROW(while (solver.step(seg)) {}, error);
}

TEST(Dopri5, ResetStateInvalidatesFsal) {
  auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = -y; };
  OdeOptions opts;
  Dopri5 solver(rhs, 0.0, Eigen::VectorXd::Ones(1), 2.0, opts);
  DenseSegment seg;
  ASSERT_TRUE(solver.step(seg));
  Eigen::VectorXd y = solver.y();
  y(0) = 2.0 * y(0);
  solver.reset_state(y);
  const double t_reset = solver.t();
  while (solver.step(seg)) {
  }
  EXPECT_NEAR(solver.y()(0), 2.0 * std::exp(-(2.0 - t_reset)) * std::exp(-t_reset), 1e-7);
}
