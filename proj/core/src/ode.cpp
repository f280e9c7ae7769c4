#include "msts/ode.hpp"

#include <algorithm>
#include <cmath>

namespace msts {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

Dopri5::Dopri5(Rhs rhs, double t0, Eigen::VectorXd y0, double t_end, OdeOptions opts)
    : rhs_(std::move(rhs)), t_(t0), t_end_(t_end), y_(std::move(y0)), opts_(opts) {
  dir_ = (t_end_ >= t_) ? 1.0 : -1.0;
  if (opts_.h_max <= 0.0) opts_.h_max = std::abs(t_end_ - t_);
  h_ = (opts_.h_init > 0.0) ? opts_.h_init : initial_step();
  h_ = std::min(h_, opts_.h_max);
}

void Dopri5::eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& f) {
  rhs_(t, y, f);
  ++stats_.rhs_evals;
  if (!f.allFinite()) raise(errc::non_finite_state, "ODE right-hand side returned NaN/Inf");
}

double Dopri5::error_norm(const Eigen::VectorXd& y_new, const Eigen::VectorXd& err) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y_(i)), std::abs(y_new(i)));
    const double r = err(i) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double Dopri5::initial_step() {
  Eigen::VectorXd f0(y_.size()), f1(y_.size()), y1(y_.size());
  eval(t_, y_, f0);
  f0_ = f0;
  have_f0_ = true;
  double d0 = 0.0, d1n = 0.0;
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    const double sc = opts_.atol + opts_.rtol * std::abs(y_(i));
    d0 += std::pow(y_(i) / sc, 2);
    d1n += std::pow(f0(i) / sc, 2);
  }
  d0 = std::sqrt(d0 / y_.size());
  d1n = std::sqrt(d1n / y_.size());
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 * opts_.h_max : 0.01 * d0 / d1n;
  h0 = std::min(h0, opts_.h_max);
  y1 = y_ + dir_ * h0 * f0;
  eval(t_ + dir_ * h0, y1, f1);
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    const double sc = opts_.atol + opts_.rtol * std::abs(y_(i));
    d2 += std::pow((f1(i) - f0(i)) / sc, 2);
  }
  d2 = std::sqrt(d2 / y_.size()) / h0;
  const double dm = std::max(d1n, d2);
  double h1 = (dm <= 1e-15) ? std::max(1e-6 * opts_.h_max, h0 * 1e-3)
                            : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, opts_.h_max});
}

void Dopri5::reset_state(const Eigen::VectorXd& y) {
  y_ = y;
  have_f0_ = false;  // FSAL no longer valid
}

bool Dopri5::step(DenseSegment& seg) {
  if (dir_ * (t_end_ - t_) <= 0.0) return false;
  const Eigen::Index n = y_.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n), err(n);
  if (!have_f0_) {
    eval(t_, y_, f0_);
    have_f0_ = true;
  }
  k1 = f0_;
  for (;;) {
    if (stats_.accepted + stats_.rejected > opts_.max_steps)
      raise(errc::step_size_underflow, "ODE step budget exhausted");
    double h = std::min(h_, std::abs(t_end_ - t_));
    const double hd = dir_ * h;
    if (h < 1e-14 * opts_.h_max || t_ + hd == t_)
      raise(errc::step_size_underflow, "ODE step size underflow at t = " + std::to_string(t_));

    yt = y_ + hd * (a21 * k1);
    eval(t_ + c2 * hd, yt, k2);
    yt = y_ + hd * (a31 * k1 + a32 * k2);
    eval(t_ + c3 * hd, yt, k3);
    yt = y_ + hd * (a41 * k1 + a42 * k2 + a43 * k3);
    eval(t_ + c4 * hd, yt, k4);
    yt = y_ + hd * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    eval(t_ + c5 * hd, yt, k5);
    yt = y_ + hd * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    eval(t_ + hd, yt, k6);
    y5 = y_ + hd * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    eval(t_ + hd, y5, k7);
    err = hd * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = error_norm(y5, err);
    if (en <= 1.0 && y5.allFinite()) {
      seg.t0 = t_;
      seg.h = hd;
      seg.rcont1 = y_;
      seg.rcont2 = y5 - y_;
      seg.rcont3 = hd * k1 - seg.rcont2;
      seg.rcont4 = seg.rcont2 - hd * k7 - seg.rcont3;
      seg.rcont5 = hd * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      t_ += hd;
      y_.swap(y5);
      f0_ = k7;  // FSAL
      ++stats_.accepted;
      const double fac = std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 5.0);
      h_ = std::min(h * fac, opts_.h_max);
      return true;
    }
    ++stats_.rejected;
    const double fac = std::clamp(0.9 * std::pow(en, -0.2), 0.1, 1.0);
    h_ = h * fac;
  }
}

}  // namespace msts
