// msts: config-driven simulator for squeezed-light generation in lossy
// coupled-cavity structures, with independent verification oracles.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>

#include "msts/config.hpp"
#include "msts/crow.hpp"
#include "msts/dynamics.hpp"
#include "msts/limits.hpp"
#include "msts/observables.hpp"
#include "msts/oracle.hpp"
#include "msts/run.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(const msts::error& e) {
  switch (e.code()) {
    case msts::errc::step_size_underflow:
    case msts::errc::non_finite_state:
      return 3;
    default:
      return 2;
  }
}

void emit(const json& report, const std::string& out_path, bool quiet) {
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << report.dump(2) << "\n";
    if (!quiet) std::cerr << "wrote " << out_path << "\n";
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

int cmd_run(const std::vector<std::string>& config_paths, const std::string& out_dir,
            const std::string& format, bool quiet) {
  std::vector<msts::SimConfig> cfgs;
  for (const auto& p : config_paths) cfgs.push_back(msts::load_config(p));
  const auto results = msts::run_many(cfgs);
  for (size_t i = 0; i < results.size(); ++i) {
    const fs::path src(config_paths[i]);
    const std::string stem = src.stem().string();
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      if (format != "json") {
        std::ofstream csv(fs::path(out_dir) / (stem + ".csv"));
        csv << results[i].csv;
      }
      std::ofstream sum(fs::path(out_dir) / (stem + ".summary.json"));
      sum << results[i].summary << "\n";
      if (!quiet)
        std::cerr << "wrote " << (fs::path(out_dir) / (stem + ".csv")).string() << " and summary\n";
    } else {
      if (format != "json") std::cout << results[i].csv;
      std::cout << results[i].summary << "\n";
    }
  }
  return 0;
}

int cmd_takagi(const std::string& config_path, const std::string& out_path, bool quiet) {
  const msts::SimConfig cfg = msts::load_config(config_path);
  const msts::Model model = msts::validate(cfg.structure(), cfg.resolved_coupling());
  const msts::SchmidtBasis basis = msts::schmidt_basis(model);
  const int m = basis.size();
  json rep;
  rep["modes"] = m;
  json u_re = json::array(), u_im = json::array(), labs = json::array(), th = json::array();
  for (int i = 0; i < m; ++i) {
    json rrow = json::array(), irow = json::array();
    for (int k = 0; k < m; ++k) {
      rrow.push_back(basis.u(i, k).real());
      irow.push_back(basis.u(i, k).imag());
    }
    u_re.push_back(rrow);
    u_im.push_back(irow);
  }
  for (int k = 0; k < m; ++k) {
    labs.push_back(basis.lambda_abs(k));
    th.push_back(basis.theta(k));
  }
  rep["u_re"] = u_re;
  rep["u_im"] = u_im;
  rep["lambda_abs"] = labs;
  rep["theta"] = th;
  if (model.coupling.matrix) {
    const double rec = (msts::coupling_matrix(basis) - *model.coupling.matrix).norm();
    rep["reconstruction_error"] = rec;
    rep["reconstruction_scale"] = model.coupling.matrix->norm();
  }
  rep["unitarity_error"] =
      (basis.u.adjoint() * basis.u - Eigen::MatrixXcd::Identity(m, m)).norm();
  emit(rep, out_path, quiet);
  return 0;
}

int cmd_crow_gen(int cavities, double d, double alpha_sq, double g_target,
                 const std::string& out_path, bool quiet) {
  msts::crow::CrowParams params = msts::crow::nominal_params(cavities, d);
  // group velocity from the dispersion slope at the pump Bloch vector
  const double v = std::abs(params.omega0.real() * params.beta1.real()) * params.period() *
                   std::abs(std::sin(params.k_p * params.period()));
  msts::crow::DriveParameters drv{};
  if (g_target > 0.0) {
    drv.t_c = msts::crow::drive_parameters(params, alpha_sq, v).t_c;
    params.g0 = g_target * msts::crow::kHbar / (4.0 * alpha_sq * drv.t_c);
    drv.g = g_target;
  } else {
    drv = msts::crow::drive_parameters(params, alpha_sq, v);
  }

  msts::SimConfig cfg;
  cfg.crow_params = params;
  cfg.coupling_from_crow = true;
  cfg.coupling.scale = 0.0;  // use the CROW-provided G0/hbar
  cfg.pump.kind = msts::PumpModel::Kind::cw;
  cfg.pump.omega_p = params.omega0.real();
  cfg.pump.alpha_sq = alpha_sq;
  cfg.integration.t_end = 100.0;
  cfg.integration.time_in_tc = true;
  cfg.integration.t_c = drv.t_c;
  cfg.integration.output_stride = 0.5;
  cfg.integration.rtol = 1e-10;
  cfg.integration.atol = 1e-13;
  cfg.observables.pairs = {{0, 1}};
  json j = msts::config_to_json(cfg);
  j["derived"] = {{"g", drv.g}, {"t_c", drv.t_c}, {"group_velocity", v}};
  emit(j, out_path, quiet);
  return 0;
}

int cmd_oracle_compare(const std::string& config_path, int cutoff, const std::string& out_path,
                       bool quiet) {
  const msts::SimConfig cfg = msts::load_config(config_path);
  const msts::Model model = msts::validate(cfg.structure(), cfg.resolved_coupling());
  const msts::SchmidtBasis basis = msts::schmidt_basis(model);
  const int m = model.structure.size();

  msts::IntegrateOptions iopts;
  iopts.t_end = cfg.t_end_seconds();
  iopts.rtol = cfg.integration.rtol;
  iopts.atol = cfg.integration.atol;
  iopts.output_stride = cfg.stride_seconds() > 0.0 ? cfg.stride_seconds() : iopts.t_end / 20.0;
  const msts::Trajectory traj = msts::integrate(model.structure, basis, cfg.pump, iopts);

  std::vector<double> times;
  for (const auto& s : traj.samples)
    if (s.t > 0.0) times.push_back(s.t);

  const Eigen::MatrixXcd g_rad = model.coupling.matrix ? *model.coupling.matrix
                                                       : msts::coupling_matrix(basis);
  const auto mom =
      msts::oracle::moment_ode_oracle(model.structure, g_rad, cfg.pump, times,
                                      std::min(cfg.integration.rtol, 1e-10), 1e-13);

  json rep;
  rep["modes"] = m;
  double worst_n = 0.0, worst_a = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    const auto& s = traj.samples[k + 1];
    const msts::SecondMoments mm = msts::second_moments(s, basis);
    const double sn = std::max(mom.number[k].cwiseAbs().maxCoeff(), 1e-12);
    const double sa = std::max(mom.pair[k].cwiseAbs().maxCoeff(), 1e-12);
    worst_n = std::max(worst_n, (mm.number - mom.number[k]).cwiseAbs().maxCoeff() / sn);
    worst_a = std::max(worst_a, (mm.pair - mom.pair[k]).cwiseAbs().maxCoeff() / sa);
  }
  rep["moment_oracle"] = {{"rel_err_number", worst_n}, {"rel_err_pair", worst_a}};

  bool ok = true;
  if (m <= 2) {
    msts::oracle::FockConfig fcfg{m, cutoff};
    const auto fock = msts::oracle::evolve_fock(model.structure, g_rad, cfg.pump, fcfg, times,
                                                std::min(cfg.integration.rtol, 1e-9), 1e-12);
    double fn = 0.0, fa = 0.0, fmin = 1.0;
    for (size_t k = 0; k < times.size(); ++k) {
      const auto& s = traj.samples[k + 1];
      const msts::SecondMoments mm = msts::second_moments(s, basis);
      const double sn = std::max(fock.number[k].cwiseAbs().maxCoeff(), 1e-12);
      const double sa = std::max(fock.pair[k].cwiseAbs().maxCoeff(), 1e-12);
      fn = std::max(fn, (mm.number - fock.number[k]).cwiseAbs().maxCoeff() / sn);
      fa = std::max(fa, (mm.pair - fock.pair[k]).cwiseAbs().maxCoeff() / sa);
      fmin = std::min(fmin, msts::oracle::fidelity(
                                fock.rho[k], msts::oracle::msts_density_matrix(s, basis, fcfg)));
    }
    rep["fock_oracle"] = {{"cutoff", cutoff},
                          {"rel_err_number", fn},
                          {"rel_err_pair", fa},
                          {"min_fidelity", fmin},
                          {"max_top_population", fock.max_top_population},
                          {"cutoff_saturated", fock.cutoff_saturated}};
    ok = ok && !fock.cutoff_saturated && fn < 1e-4 && fa < 1e-4;
  }
  rep["max_scaled_trace_residual"] = traj.max_scaled_residual();
  ok = ok && worst_n < 1e-6 && worst_a < 1e-6;
  rep["pass"] = ok;
  emit(rep, out_path, quiet);
  return ok ? 0 : 1;
}

int cmd_limits_check(long seed, const std::string& out_path, bool quiet) {
  std::mt19937_64 rng(seed ? seed : 20240811);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  json rep;
  bool all_ok = true;
  auto check = [&](const std::string& name, double value, double bound) {
    const bool ok = value <= bound;
    rep["checks"].push_back({{"name", name}, {"value", value}, {"bound", bound}, {"pass", ok}});
    all_ok = all_ok && ok;
  };

  // general RHS against the single-mode closed form
  {
    double worst = 0.0;
    for (int it = 0; it < 2000; ++it) {
      const double theta = 2.0 * M_PI * uni(rng) - M_PI;
      msts::SchmidtBasis basis;
      basis.u = Eigen::MatrixXcd::Identity(1, 1);
      basis.lambda_abs = Eigen::VectorXd::Constant(1, 0.2 + uni(rng));
      basis.theta = Eigen::VectorXd::Constant(1, theta);
      msts::QuasimodeSet qs;
      qs.omega = Eigen::VectorXd::Constant(1, 0.5 + 2.0 * uni(rng));
      qs.gamma = Eigen::VectorXd::Constant(1, 0.3 * uni(rng));
      msts::PumpModel pump;
      pump.omega_p = 0.5 + 2.0 * uni(rng);
      pump.alpha_sq = uni(rng);
      const double t = uni(rng);
      msts::MstsState st;
      st.t = t;
      st.r = Eigen::VectorXd::Constant(1, 3.0 * uni(rng));
      st.n = Eigen::VectorXd::Constant(1, 10.0 * uni(rng));
      st.phi = Eigen::VectorXd::Constant(
          1, -2.0 * pump.omega_p * t + theta - M_PI / 2.0);  // phase condition
      const auto rates = msts::derived_rates(qs, basis);
      const auto d = msts::rhs(t, st, rates, basis, pump);
      const auto ref = msts::limits::single_mode_rhs(st.r(0), st.n(0), qs.omega(0), qs.gamma(0),
                                                     basis.lambda_abs(0), pump, t);
      worst = std::max({worst, std::abs(d.dr(0) - ref.dr), std::abs(d.dphi(0) - ref.dphi),
                        std::abs(d.dn(0) - ref.dn)});
    }
    check("single_mode_reduction", worst, 1e-10);
  }

  // general RHS against the two-mode closed form
  {
    double worst = 0.0;
    for (int it = 0; it < 2000; ++it) {
      msts::SchmidtBasis basis;
      basis.u = msts::limits::two_mode_unitary();
      const double lam = 0.2 + uni(rng);
      basis.lambda_abs = Eigen::VectorXd::Constant(2, lam);
      basis.theta = Eigen::VectorXd::Zero(2);
      msts::QuasimodeSet qs;
      qs.omega = Eigen::VectorXd::Zero(2);
      qs.gamma = Eigen::VectorXd::Zero(2);
      qs.omega << 0.5 + uni(rng), 0.5 + uni(rng);
      qs.gamma << 0.3 * uni(rng), 0.3 * uni(rng);
      msts::PumpModel pump;
      pump.omega_p = 0.5 + 2.0 * uni(rng);
      pump.alpha_sq = uni(rng);
      const double t = uni(rng);
      const double r = 3.0 * uni(rng);
      msts::MstsState st;
      st.t = t;
      st.r = Eigen::VectorXd::Constant(2, r);
      st.n.resize(2);
      st.n << 10.0 * uni(rng), 10.0 * uni(rng);
      st.phi = Eigen::VectorXd::Constant(2, -2.0 * pump.omega_p * t - M_PI / 2.0);
      const auto rates = msts::derived_rates(qs, basis);
      const auto d = msts::rhs(t, st, rates, basis, pump);
      const auto ref =
          msts::limits::two_mode_rhs(r, st.n(0), st.n(1), qs.omega(0), qs.omega(1), qs.gamma(0),
                                     qs.gamma(1), lam, pump, t);
      worst = std::max({worst, std::abs(d.dr(0) - ref.dr), std::abs(d.dr(1) - ref.dr),
                        std::abs(d.dphi(0) - ref.dphi), std::abs(d.dphi(1) - ref.dphi),
                        std::abs(d.dn(0) - ref.dn1), std::abs(d.dn(1) - ref.dn2)});
    }
    check("two_mode_reduction", worst, 1e-10);
  }

  // lossless integration against the closed form (resonant random basis)
  {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int m = 4;
    Eigen::MatrixXcd a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = msts::complexd(gauss(rng), gauss(rng));
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::VectorXcd lam(m);
    for (int i = 0; i < m; ++i) lam(i) = std::polar(0.2 + uni(rng), 2.0 * M_PI * uni(rng) - M_PI);
    msts::QuasimodeSet qs;
    qs.omega = Eigen::VectorXd::Constant(m, 1.3);
    qs.gamma = Eigen::VectorXd::Zero(m);
    msts::CouplingSpec cs;
    cs.matrix = q * lam.asDiagonal() * q.transpose();
    const msts::Model model = msts::validate(qs, cs);
    const msts::SchmidtBasis basis = msts::schmidt_basis(model);
    msts::PumpModel pump;
    pump.omega_p = 1.3;
    pump.alpha_sq = 0.25;
    msts::IntegrateOptions iopts;
    iopts.t_end = 10.0;
    iopts.output_stride = 0.5;
    const auto traj = msts::integrate(qs, basis, pump, iopts);
    const auto rates = msts::derived_rates(qs, basis);
    double worst_r = 0.0, worst_n = 0.0;
    for (const auto& s : traj.samples) {
      const auto ref = msts::limits::lossless_solution(basis, rates, pump, s.t);
      for (int mu = 0; mu < m; ++mu)
        worst_r = std::max(worst_r,
                           std::abs(s.r(mu) - ref.r(mu)) / std::max(1.0, std::abs(ref.r(mu))));
      worst_n = std::max(worst_n, s.n.cwiseAbs().maxCoeff());
    }
    check("lossless_r_closed_form", worst_r, 1e-7);
    check("lossless_thermal_zero", worst_n, 1e-12);
  }

  rep["pass"] = all_ok;
  emit(rep, out_path, quiet);
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multimode squeezed-light simulator for lossy coupled cavities"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir, out_path, format = "csv";
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress messages");

  auto* srun = app.add_subcommand("run", "integrate a configuration and emit CSV + summary");
  std::vector<std::string> config_paths;
  srun->add_option("--config", config_paths, "config JSON path(s)")->required();
  srun->add_option("--out", out_dir, "output directory (default: stdout)");
  srun->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  auto* stak = app.add_subcommand("takagi", "factor the configured coupling matrix");
  std::string tak_cfg;
  stak->add_option("--config", tak_cfg, "config JSON path")->required();
  stak->add_option("--out", out_path, "report path (default: stdout)");

  auto* scrow = app.add_subcommand("crow-gen", "emit a full CROW simulation config");
  int cavities = 4;
  double lattice_d = 480e-9, alpha_sq = 4.6e7, g_target = 1.0 / 12.0;
  scrow->add_option("--cavities", cavities, "cavity count");
  scrow->add_option("--lattice", lattice_d, "lattice constant d in metres");
  scrow->add_option("--alpha-sq", alpha_sq, "mean pump photon number");
  scrow->add_option("--g", g_target, "dimensionless pumping strength (0: derive from G0)");
  scrow->add_option("--out", out_path, "config output path (default: stdout)");

  auto* sorc = app.add_subcommand("oracle-compare", "compare a run against the oracles");
  std::string orc_cfg;
  int cutoff = 30;
  sorc->add_option("--config", orc_cfg, "config JSON path")->required();
  sorc->add_option("--cutoff", cutoff, "Fock cutoff per mode (modes <= 2)");
  sorc->add_option("--out", out_path, "report path (default: stdout)");

  auto* slim = app.add_subcommand("limits-check", "verify the closed-form limiting cases");
  long seed = 0;
  slim->add_option("--seed", seed, "RNG seed for the randomized state sweeps");
  slim->add_option("--out", out_path, "report path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (srun->parsed()) return cmd_run(config_paths, out_dir, format, quiet);
    if (stak->parsed()) return cmd_takagi(tak_cfg, out_path, quiet);
    if (scrow->parsed()) return cmd_crow_gen(cavities, lattice_d, alpha_sq, g_target, out_path, quiet);
    if (sorc->parsed()) return cmd_oracle_compare(orc_cfg, cutoff, out_path, quiet);
    if (slim->parsed()) return cmd_limits_check(seed, out_path, quiet);
  } catch (const msts::error& e) {
    std::cerr << "error [" << msts::errc_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
