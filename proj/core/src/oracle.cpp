#include "msts/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace msts {
namespace oracle {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<complexd>;

double top_layer_population(const Eigen::MatrixXcd& rho, const FockConfig& cfg) {
  // population with any mode at the cutoff occupation
  const int d1 = cfg.cutoff + 1;
  double pop = 0.0;
  for (int idx = 0; idx < cfg.dim(); ++idx) {
    int rem = idx;
    bool top = false;
    for (int mode = 0; mode < cfg.modes; ++mode) {
      if (rem % d1 == cfg.cutoff) top = true;
      rem /= d1;
    }
    if (top) pop += rho(idx, idx).real();
  }
  return pop;
}

// tr(op * rho) for dense op, rho
complexd trace_product(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& rho) {
  return (op.cwiseProduct(rho.transpose())).sum();
}

}  // namespace

int FockConfig::dim() const {
  long d = 1;
  for (int i = 0; i < modes; ++i) d *= (cutoff + 1);
  return static_cast<int>(d);
}

void FockConfig::check() const {
  if (modes < 1 || modes > 2)
    raise(errc::resource_guard, "Fock oracle supports 1 or 2 modes only");
  if (cutoff < 1) raise(errc::resource_guard, "cutoff must be >= 1");
  long d = 1;
  for (int i = 0; i < modes; ++i) d *= (cutoff + 1);
  if (d > 4096) raise(errc::resource_guard, "Hilbert dimension " + std::to_string(d) + " > 4096");
}

std::vector<SpMat> build_operators(const FockConfig& cfg) {
  cfg.check();
  const int d1 = cfg.cutoff + 1;
  const int dim = cfg.dim();
  std::vector<SpMat> ops;
  for (int mode = 0; mode < cfg.modes; ++mode) {
    int stride = 1;
    for (int k = 0; k < mode; ++k) stride *= d1;
    SpMat b(dim, dim);
    std::vector<Eigen::Triplet<double>> trips;
    for (int idx = 0; idx < dim; ++idx) {
      const int occ = (idx / stride) % d1;
      if (occ >= 1) trips.emplace_back(idx - stride, idx, std::sqrt(double(occ)));
    }
    b.setFromTriplets(trips.begin(), trips.end());
    ops.push_back(std::move(b));
  }
  return ops;
}

Eigen::MatrixXcd hamiltonian(double t, const QuasimodeSet& structure,
                             const Eigen::MatrixXcd& g_rad, const PumpModel& pump,
                             const FockConfig& cfg) {
  const auto bs = build_operators(cfg);
  const int dim = cfg.dim();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < cfg.modes; ++m) {
    const SpMat num = SpMat(bs[m].transpose()) * bs[m];
    h += structure.omega(m) * Eigen::MatrixXd(num).cast<complexd>();
  }
  const complexd drive = pump_drive(pump, t);
  Eigen::MatrixXcd pairs = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < cfg.modes; ++m)
    for (int l = 0; l < cfg.modes; ++l) {
      const SpMat prod = SpMat(bs[m].transpose()) * SpMat(bs[l].transpose());
      pairs += g_rad(m, l) * Eigen::MatrixXd(prod).cast<complexd>();
    }
  h += drive * pairs + std::conj(drive) * pairs.adjoint();
  return h;
}

FockTrajectory evolve_fock(const QuasimodeSet& structure, const Eigen::MatrixXcd& g_rad,
                           const PumpModel& pump, const FockConfig& cfg,
                           const std::vector<double>& sample_times, double rtol, double atol) {
  cfg.check();
  if (structure.size() != cfg.modes)
    raise(errc::dimension_mismatch, "structure does not match Fock config");
  const int dim = cfg.dim();
  const auto bs = build_operators(cfg);

  std::vector<SpMatC> bc(cfg.modes), bct(cfg.modes);
  for (int m = 0; m < cfg.modes; ++m) {
    bc[m] = bs[m].cast<complexd>();
    bct[m] = SpMatC(bc[m].transpose());
  }

  // H = diag(w.occ) + drive*P + conj(drive)*P^dag with P = sum G_ml b+_m b+_l
  const int d1 = cfg.cutoff + 1;
  Eigen::VectorXcd hdiag = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd loss_diag = Eigen::VectorXcd::Zero(dim);
  for (int idx = 0; idx < dim; ++idx) {
    int rem = idx;
    for (int mode = 0; mode < cfg.modes; ++mode) {
      hdiag(idx) += structure.omega(mode) * double(rem % d1);
      loss_diag(idx) += structure.gamma(mode) * double(rem % d1);
      rem /= d1;
    }
  }
  SpMatC pairop(dim, dim);
  for (int m = 0; m < cfg.modes; ++m)
    for (int l = 0; l < cfg.modes; ++l) {
      if (g_rad(m, l) == complexd(0.0, 0.0)) continue;
      SpMatC prod = bct[m] * bct[l];
      pairop = SpMatC(pairop + g_rad(m, l) * prod);
    }
  const SpMatC pairop_dag = SpMatC(pairop.adjoint());

  // dense observables for moment extraction
  std::vector<std::vector<Eigen::MatrixXcd>> nop(cfg.modes), aop(cfg.modes);
  for (int m = 0; m < cfg.modes; ++m) {
    nop[m].resize(cfg.modes);
    aop[m].resize(cfg.modes);
    for (int l = 0; l < cfg.modes; ++l) {
      nop[m][l] = Eigen::MatrixXcd(SpMatC(bct[m] * bc[l]));
      aop[m][l] = Eigen::MatrixXcd(SpMatC(bc[m] * bc[l]));
    }
  }

  Eigen::MatrixXcd tmp(dim, dim), tmp2(dim, dim);
  auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    Eigen::Map<const Eigen::MatrixXcd> rho(reinterpret_cast<const complexd*>(y.data()), dim, dim);
    dy.resize(y.size());
    Eigen::Map<Eigen::MatrixXcd> out(reinterpret_cast<complexd*>(dy.data()), dim, dim);
    const complexd drive = pump_drive(pump, t);
    const complexd mi(0.0, -1.0);
    tmp = hdiag.asDiagonal() * rho;
    tmp.noalias() += drive * (pairop * rho);
    tmp.noalias() += std::conj(drive) * (pairop_dag * rho);
    tmp2 = rho * hdiag.asDiagonal();
    tmp2.noalias() += drive * (rho * pairop);
    tmp2.noalias() += std::conj(drive) * (rho * pairop_dag);
    out = mi * (tmp - tmp2);
    for (int m = 0; m < cfg.modes; ++m) {
      if (structure.gamma(m) == 0.0) continue;
      tmp.noalias() = bc[m] * rho;
      tmp2.noalias() = tmp * bct[m];
      out += (2.0 * structure.gamma(m)) * tmp2;
    }
    out -= loss_diag.asDiagonal() * rho;
    out -= rho * loss_diag.asDiagonal();
  };

  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(2 * dim * dim);
  y0(0) = 1.0;  // vacuum

  FockTrajectory out;
  const double t_end = sample_times.empty() ? 0.0 : sample_times.back();
  OdeOptions opts;
  opts.rtol = rtol;
  opts.atol = atol;
  Dopri5 solver(rhs, 0.0, y0, t_end, opts);

  auto record = [&](double t, const Eigen::VectorXd& y) {
    Eigen::Map<const Eigen::MatrixXcd> rho(reinterpret_cast<const complexd*>(y.data()), dim, dim);
    Eigen::MatrixXcd r = 0.5 * (rho + rho.adjoint());
    Eigen::MatrixXcd nm(cfg.modes, cfg.modes), am(cfg.modes, cfg.modes);
    for (int m = 0; m < cfg.modes; ++m)
      for (int l = 0; l < cfg.modes; ++l) {
        nm(m, l) = trace_product(nop[m][l], r);
        am(m, l) = trace_product(aop[m][l], r);
      }
    out.times.push_back(t);
    out.number.push_back(std::move(nm));
    out.pair.push_back(std::move(am));
    out.rho.push_back(std::move(r));
    out.max_top_population =
        std::max(out.max_top_population, top_layer_population(out.rho.back(), cfg));
  };

  size_t next = 0;
  while (next < sample_times.size() && sample_times[next] <= 0.0) {
    record(0.0, y0);
    ++next;
  }
  DenseSegment seg;
  while (solver.step(seg)) {
    while (next < sample_times.size() && sample_times[next] <= solver.t() * (1.0 + 1e-14)) {
      const Eigen::VectorXd ys = seg.eval(sample_times[next]);
      record(sample_times[next], ys);
      ++next;
    }
  }
  while (next < sample_times.size()) {
    record(sample_times[next], solver.y());
    ++next;
  }
  out.cutoff_saturated = out.max_top_population > 1e-6;
  out.stats = solver.stats();
  return out;
}

Eigen::MatrixXcd msts_density_matrix(const MstsState& state, const SchmidtBasis& basis,
                                     const FockConfig& cfg) {
  cfg.check();
  if (state.size() != cfg.modes)
    raise(errc::dimension_mismatch, "state does not match Fock config");
  const int dim = cfg.dim();
  const auto bs = build_operators(cfg);
  const Eigen::MatrixXcd z = squeezing_matrix_z(basis, state.r, state.phi);

  Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < cfg.modes; ++m)
    for (int l = 0; l < cfg.modes; ++l) {
      if (z(m, l) == complexd(0.0, 0.0)) continue;
      const SpMat prod = SpMat(bs[m].transpose()) * SpMat(bs[l].transpose());
      sigma += (0.5 * z(m, l)) * Eigen::MatrixXd(prod).cast<complexd>();
    }
  sigma = (sigma - sigma.adjoint()).eval();  // 1/2 z b+b+ - h.c.

  const Eigen::MatrixXcd s = sigma.exp();

  Eigen::VectorXcd th = Eigen::VectorXcd::Zero(dim);
  const int d1 = cfg.cutoff + 1;
  for (int idx = 0; idx < dim; ++idx) {
    double w = 1.0;
    int rem = idx;
    for (int mode = 0; mode < cfg.modes; ++mode) {
      const int occ = rem % d1;
      rem /= d1;
      const double n = state.n(mode);
      if (n <= 0.0) {
        if (occ != 0) w = 0.0;
      } else {
        w *= std::pow(n / (1.0 + n), occ) / (1.0 + n);
      }
    }
    th(idx) = w;
  }
  Eigen::MatrixXcd rho = s * th.asDiagonal() * s.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (tr <= 0.0) raise(errc::cutoff_saturation, "squeezed thermal state lost all trace at cutoff");
  if (1.0 - tr > 1e-3)
    raise(errc::cutoff_saturation,
          "squeezed thermal state leaks " + std::to_string(1.0 - tr) + " past the cutoff");
  return rho / tr;
}

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXcd sq = es.eigenvectors() * ev.cwiseSqrt().cast<complexd>().asDiagonal() *
                              es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(sq * sigma * sq);
  double f = 0.0;
  for (double v : es2.eigenvalues()) f += std::sqrt(std::max(v, 0.0));
  return f * f;
}

MomentTrajectory moment_ode_oracle(const QuasimodeSet& structure, const Eigen::MatrixXcd& g_rad,
                                   const PumpModel& pump,
                                   const std::vector<double>& sample_times, double rtol,
                                   double atol) {
  const int m = structure.size();
  if (g_rad.rows() != m || g_rad.cols() != m)
    raise(errc::dimension_mismatch, "coupling does not match structure");
  const double carrier = pump_carrier_rate(pump);  // d/dt arg(drive)

  Eigen::MatrixXcd n(m, m), a(m, m), dn(m, m), da(m, m), gn(m, m);
  auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    n = Eigen::Map<const Eigen::MatrixXcd>(reinterpret_cast<const complexd*>(y.data()), m, m);
    a = Eigen::Map<const Eigen::MatrixXcd>(reinterpret_cast<const complexd*>(y.data()) + m * m, m,
                                           m);
    dy.resize(y.size());
    const double denv = pump_drive_envelope(pump, t);  // rotating-frame drive (real)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        dn(i, j) = (complexd(0.0, 1.0) * (structure.omega(i) - structure.omega(j)) -
                    (structure.gamma(i) + structure.gamma(j))) *
                   n(i, j);
        da(i, j) = (complexd(0.0, -1.0) * (structure.omega(i) + structure.omega(j) + carrier) -
                    (structure.gamma(i) + structure.gamma(j))) *
                   a(i, j);
      }
    dn.noalias() += complexd(0.0, 2.0) * denv * (g_rad.conjugate() * a - a.conjugate() * g_rad);
    gn.noalias() = g_rad * n;
    da.noalias() -= complexd(0.0, 2.0) * denv * (gn + gn.transpose() + g_rad);
    Eigen::Map<Eigen::MatrixXcd>(reinterpret_cast<complexd*>(dy.data()), m, m) = dn;
    Eigen::Map<Eigen::MatrixXcd>(reinterpret_cast<complexd*>(dy.data()) + m * m, m, m) = da;
  };

  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(4 * m * m);
  MomentTrajectory out;
  const double t_end = sample_times.empty() ? 0.0 : sample_times.back();
  OdeOptions opts;
  opts.rtol = rtol;
  opts.atol = atol;
  Dopri5 solver(rhs, 0.0, y0, t_end, opts);

  auto record = [&](double t, const Eigen::VectorXd& y) {
    Eigen::MatrixXcd nm =
        Eigen::Map<const Eigen::MatrixXcd>(reinterpret_cast<const complexd*>(y.data()), m, m);
    Eigen::MatrixXcd am = Eigen::Map<const Eigen::MatrixXcd>(
        reinterpret_cast<const complexd*>(y.data()) + m * m, m, m);
    out.times.push_back(t);
    out.number.push_back(nm);
    out.pair.push_back(am * std::polar(1.0, carrier * t));  // back to the lab frame
  };

  size_t next = 0;
  while (next < sample_times.size() && sample_times[next] <= 0.0) {
    record(0.0, y0);
    ++next;
  }
  DenseSegment seg;
  while (solver.step(seg)) {
    while (next < sample_times.size() && sample_times[next] <= solver.t() * (1.0 + 1e-14)) {
      const Eigen::VectorXd ys = seg.eval(sample_times[next]);
      record(sample_times[next], ys);
      ++next;
    }
  }
  while (next < sample_times.size()) {
    record(sample_times[next], solver.y());
    ++next;
  }
  out.stats = solver.stats();
  return out;
}

}  // namespace oracle
}  // namespace msts
