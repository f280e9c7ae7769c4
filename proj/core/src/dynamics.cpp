#include "msts/dynamics.hpp"

#include <cmath>

namespace msts {

namespace {

// Shared evaluator. `phase` holds either phi (lab frame) or psi (co-rotating);
// `drive` must be expressed in the same frame. Returns the pump+loss parts;
// the frequency term of dphi is added by the callers.
struct CoreOut {
  Eigen::VectorXd dr, dphi_pl, dn;
  Eigen::VectorXd singular;  // 1.0 where r < floor (dphi_pl left at 0 there)
};

CoreOut eval_core(const Eigen::VectorXd& r, const Eigen::VectorXd& phase,
                  const Eigen::VectorXd& n, const QuasimodeSet& qs, const SchmidtBasis& basis,
                  complexd drive) {
  const int m = basis.size();
  Eigen::VectorXd ch(m), sh(m);
  Eigen::VectorXcd eip(m);
  for (int k = 0; k < m; ++k) {
    ch(k) = std::cosh(r(k));
    sh(k) = std::sinh(r(k));
    eip(k) = std::polar(1.0, phase(k));
  }

  // C = U cosh U^dag, Q = U sinh e^{i phase} U^T
  const Eigen::MatrixXcd cmat = basis.u * ch.asDiagonal() * basis.u.adjoint();
  const Eigen::MatrixXcd qmat =
      basis.u * (sh.array() * eip.array()).matrix().asDiagonal() * basis.u.transpose();

  CoreOut out;
  out.dr.setZero(m);
  out.dphi_pl.setZero(m);
  out.dn.setZero(m);
  out.singular.setZero(m);

  // thermal photon numbers
  for (int i = 0; i < m; ++i) {
    double t1 = 0.0, t2 = 0.0;
    for (int j = 0; j < m; ++j) {
      t1 += qs.gamma(j) * std::norm(qmat(i, j));
      t2 += qs.gamma(j) * std::norm(cmat(i, j));
    }
    out.dn(i) = 2.0 * ((1.0 + n(i)) * t1 - n(i) * t2);
  }

  // loss kernel K_ml = 2 sum_j C_mj gamma_j Q_lj and its Schmidt projection
  const Eigen::MatrixXcd kmat =
      2.0 * cmat * qs.gamma.asDiagonal() * qmat.transpose();
  Eigen::MatrixXd wml(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) wml(i, j) = (1.0 - n(i) + n(j)) / (1.0 + n(i) + n(j));

  const Eigen::VectorXcd lam = basis.lambda();
  for (int mu = 0; mu < m; ++mu) {
    complexd y(0.0, 0.0);
    for (int i = 0; i < m; ++i) {
      complexd row(0.0, 0.0);
      for (int j = 0; j < m; ++j)
        row += std::conj(basis.u(j, mu)) * wml(i, j) * kmat(i, j);
      y += std::conj(basis.u(i, mu)) * row;
    }
    const complexd z = y * std::conj(eip(mu));
    const complexd p = drive * lam(mu) * std::conj(eip(mu));
    out.dr(mu) = 2.0 * p.imag() - z.real();
    if (r(mu) < kRFloor) {
      out.singular(mu) = 1.0;
    } else {
      out.dphi_pl(mu) = -4.0 * p.real() / std::tanh(2.0 * r(mu)) - z.imag() / (ch(mu) * sh(mu));
    }
  }
  return out;
}

}  // namespace

DerivedRates derived_rates(const QuasimodeSet& structure, const SchmidtBasis& basis) {
  const int m = basis.size();
  if (structure.size() != m)
    raise(errc::dimension_mismatch, "structure and basis dimensions disagree");
  DerivedRates rates;
  rates.gamma = 2.0 * basis.u.adjoint() * structure.gamma.asDiagonal() * basis.u;
  rates.omega = basis.u.adjoint() * structure.omega.asDiagonal() * basis.u;
  rates.gamma = 0.5 * (rates.gamma + rates.gamma.adjoint()).eval();
  rates.omega = 0.5 * (rates.omega + rates.omega.adjoint()).eval();
  return rates;
}

Derivatives rhs(double t, const MstsState& state, const DerivedRates& rates,
                const SchmidtBasis& basis, const PumpModel& pump) {
  const int m = basis.size();
  if (state.size() != m || state.n.size() != m || state.phi.size() != m)
    raise(errc::dimension_mismatch, "state arrays must have length M");
  if (!state.r.allFinite() || !state.phi.allFinite() || !state.n.allFinite())
    raise(errc::non_finite_state, "state contains NaN/Inf");

  // recover the quasimode rates from the Schmidt-basis matrices
  // (U Gamma U^dag = 2 diag(gamma_m) by construction)
  QuasimodeSet qs;
  qs.gamma = (basis.u * rates.gamma * basis.u.adjoint()).diagonal().real() * 0.5;
  qs.omega = (basis.u * rates.omega * basis.u.adjoint()).diagonal().real();

  const complexd drive = pump_drive(pump, t);
  CoreOut core = eval_core(state.r, state.phi, state.n, qs, basis, drive);

  Derivatives d;
  d.dr = core.dr;
  d.dn = core.dn;
  d.dphi.resize(m);
  const double carrier = pump_carrier_rate(pump);
  for (int mu = 0; mu < m; ++mu) {
    const double om = rates.omega(mu, mu).real();
    if (core.singular(mu) > 0.5)
      d.dphi(mu) = 0.5 * carrier - om;
    else
      d.dphi(mu) = -2.0 * om + core.dphi_pl(mu);
  }
  return d;
}

MstsState initial_conditions(const SchmidtBasis& basis, const PumpModel& pump) {
  (void)pump;
  const int m = basis.size();
  MstsState s;
  s.r = Eigen::VectorXd::Zero(m);
  s.n = Eigen::VectorXd::Zero(m);
  s.phi = basis.theta.array() - M_PI / 2.0;
  s.t = 0.0;
  return s;
}

double trace_residual(const MstsState& state, const DerivedRates& rates,
                      const SchmidtBasis& basis) {
  const int m = basis.size();
  QuasimodeSet qs;
  qs.gamma = (basis.u * rates.gamma * basis.u.adjoint()).diagonal().real() * 0.5;
  qs.omega = (basis.u * rates.omega * basis.u.adjoint()).diagonal().real();
  // the drive does not enter the identity condition
  CoreOut core = eval_core(state.r, state.phi, state.n, qs, basis, complexd(0.0, 0.0));

  double res = 0.0;
  for (int i = 0; i < m; ++i) res += core.dn(i) / (1.0 + state.n(i));
  Eigen::VectorXd sh2(m), ch(m);
  for (int k = 0; k < m; ++k) {
    sh2(k) = std::pow(std::sinh(state.r(k)), 2);
    ch(k) = std::cosh(state.r(k));
  }
  for (int mu = 0; mu < m; ++mu) res -= rates.gamma(mu, mu).real() * sh2(mu);
  const Eigen::MatrixXcd cmat = basis.u * ch.asDiagonal() * basis.u.adjoint();
  for (int i = 0; i < m; ++i) {
    const double x = state.n(i) / (1.0 + state.n(i));
    for (int j = 0; j < m; ++j) res += 2.0 * qs.gamma(j) * x * std::norm(cmat(i, j));
  }
  return res;
}

double trace_residual_scale(const MstsState& state, const DerivedRates& rates,
                            const SchmidtBasis& basis) {
  (void)basis;
  double scale = 0.0;
  for (int mu = 0; mu < state.size(); ++mu)
    scale += rates.gamma(mu, mu).real() * std::pow(std::cosh(state.r(mu)), 2);
  return std::max(scale, 1e-300);
}

double Trajectory::max_scaled_residual() const {
  double worst = 0.0;
  for (size_t i = 0; i < residual.size(); ++i)
    worst = std::max(worst, std::abs(residual[i]) / std::max(residual_scale[i], 1e-300));
  return worst;
}

Trajectory integrate(const QuasimodeSet& structure, const SchmidtBasis& basis,
                     const PumpModel& pump, const IntegrateOptions& opts) {
  const int m = basis.size();
  if (structure.size() != m)
    raise(errc::dimension_mismatch, "structure and basis dimensions disagree");
  if (opts.t_end <= 0.0) raise(errc::config_error, "t_end must be positive");
  if (opts.rtol <= 0.0 || opts.atol <= 0.0) raise(errc::config_error, "tolerances must be positive");

  const DerivedRates rates = derived_rates(structure, basis);
  const double carrier = pump_carrier_rate(pump);
  Eigen::VectorXd omd = rates.omega.diagonal().real();

  // co-rotating variables: y = [r, psi, n], psi_mu = phi_mu - carrier*t
  auto rot_rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(3 * m);
    const Eigen::VectorXd r = y.segment(0, m);
    const Eigen::VectorXd psi = y.segment(m, m);
    const Eigen::VectorXd n = y.segment(2 * m, m);
    const complexd drive(pump_drive_envelope(pump, t), 0.0);
    CoreOut core = eval_core(r, psi, n, structure, basis, drive);
    dy.segment(0, m) = core.dr;
    dy.segment(2 * m, m) = core.dn;
    for (int mu = 0; mu < m; ++mu) {
      if (core.singular(mu) > 0.5)
        dy(m + mu) = -0.5 * carrier - omd(mu);
      else
        dy(m + mu) = -2.0 * omd(mu) - carrier + core.dphi_pl(mu);
    }
  };

  MstsState init = initial_conditions(basis, pump);
  Eigen::VectorXd y0(3 * m);
  y0 << init.r, init.phi, init.n;

  OdeOptions oopts;
  oopts.rtol = opts.rtol;
  oopts.atol = opts.atol;
  Dopri5 solver(rot_rhs, 0.0, y0, opts.t_end, oopts);

  Trajectory traj;
  auto push_sample = [&](double t, Eigen::VectorXd y) {
    for (int mu = 0; mu < m; ++mu) {
      if (y(mu) < 0.0) {  // sample-time gauge: (r, psi) -> (-r, psi + pi)
        y(mu) = -y(mu);
        y(m + mu) += M_PI;
      }
      if (y(2 * m + mu) < 0.0 && y(2 * m + mu) > -100.0 * opts.atol) y(2 * m + mu) = 0.0;
    }
    MstsState s;
    s.t = t;
    s.r = y.segment(0, m);
    s.phi = y.segment(m, m).array() + carrier * t;
    s.n = y.segment(2 * m, m);
    traj.residual.push_back(trace_residual(s, rates, basis));
    traj.residual_scale.push_back(trace_residual_scale(s, rates, basis));
    traj.samples.push_back(std::move(s));
  };

  push_sample(0.0, y0);
  const double stride = opts.output_stride > 0.0 ? opts.output_stride : opts.t_end;
  long next_k = 1;

  DenseSegment seg;
  while (solver.step(seg)) {
    while (next_k * stride <= solver.t() * (1.0 + 1e-14) &&
           next_k * stride < opts.t_end * (1.0 - 1e-14)) {
      push_sample(next_k * stride, seg.eval(next_k * stride));
      ++next_k;
    }
    // gauge flip r -> -r, psi -> psi + pi for any excursion below -r_floor
    Eigen::VectorXd y = solver.y();
    bool flipped = false;
    for (int mu = 0; mu < m; ++mu) {
      if (y(mu) < -kRFloor) {
        y(mu) = -y(mu);
        y(m + mu) += M_PI;
        flipped = true;
      }
    }
    if (flipped) {
      ++traj.gauge_flips;
      solver.reset_state(y);
    }
  }
  push_sample(opts.t_end, solver.y());
  traj.stats = solver.stats();
  return traj;
}

}  // namespace msts
