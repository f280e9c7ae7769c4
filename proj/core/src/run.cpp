#include "msts/run.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "msts/limits.hpp"

namespace msts {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace

RunResult run(const SimConfig& cfg) {
  Model model = validate(cfg.structure(), cfg.resolved_coupling());
  const int m = model.structure.size();
  for (const auto& [a, b] : cfg.observables.pairs) {
    if (a == b) raise(errc::same_mode, "observable pair uses the same mode twice");
    if (a < 0 || b < 0 || a >= m || b >= m)
      raise(errc::config_error, "observable pair index out of range");
  }

  RunResult out;
  out.basis = schmidt_basis(model);

  IntegrateOptions iopts;
  iopts.t_end = cfg.t_end_seconds();
  iopts.rtol = cfg.integration.rtol;
  iopts.atol = cfg.integration.atol;
  iopts.output_stride = cfg.stride_seconds();
  out.trajectory = integrate(model.structure, out.basis, cfg.pump, iopts);

  for (const auto& s : out.trajectory.samples)
    out.moments.push_back(second_moments(s, out.basis));

  // ---- CSV ----------------------------------------------------------------
  std::ostringstream csv;
  csv << "t";
  for (int i = 1; i <= m; ++i) csv << ",r_" << i;
  for (int i = 1; i <= m; ++i) csv << ",phi_" << i;
  for (int i = 1; i <= m; ++i) csv << ",n_" << i;
  for (int i = 1; i <= m; ++i) csv << ",N_" << i << i;
  csv << ",total_photons";
  const bool fixed = !cfg.observables.optimal_angles;
  for (size_t p = 0; p < cfg.observables.pairs.size(); ++p) {
    const auto& [a, b] = cfg.observables.pairs[p];
    const std::string base = "Delta2_" + std::to_string(a + 1) + "_" + std::to_string(b + 1);
    if (fixed && cfg.observables.both_signs)
      csv << "," << base << "_plus," << base << "_minus";
    else
      csv << "," << base;
  }
  csv << "\n";

  const double tdiv = cfg.integration.time_in_tc ? cfg.integration.t_c : 1.0;
  for (size_t k = 0; k < out.trajectory.samples.size(); ++k) {
    const auto& s = out.trajectory.samples[k];
    const auto& mom = out.moments[k];
    csv << fmt17(s.t / tdiv);
    for (int i = 0; i < m; ++i) csv << "," << fmt17(s.r(i));
    for (int i = 0; i < m; ++i) csv << "," << fmt17(s.phi(i));
    for (int i = 0; i < m; ++i) csv << "," << fmt17(s.n(i));
    const PhotonNumbers ph = photon_numbers(mom);
    for (int i = 0; i < m; ++i) csv << "," << fmt17(ph.per_mode(i));
    csv << "," << fmt17(ph.total);
    for (size_t p = 0; p < cfg.observables.pairs.size(); ++p) {
      const auto& [a, b] = cfg.observables.pairs[p];
      if (!fixed) {
        csv << "," << fmt17(optimize_angles(mom, a, b, cfg.observables.sign).delta2);
      } else {
        QuadratureSpec spec;
        spec.m = a;
        spec.l = b;
        spec.phi_m = cfg.observables.fixed_angles[p].first;
        spec.phi_l = cfg.observables.fixed_angles[p].second;
        if (cfg.observables.both_signs) {
          spec.sign = +1;
          csv << "," << fmt17(correlation_variance(mom, spec));
          spec.sign = -1;
          csv << "," << fmt17(correlation_variance(mom, spec));
        } else {
          spec.sign = cfg.observables.sign;
          csv << "," << fmt17(correlation_variance(mom, spec));
        }
      }
    }
    csv << "\n";
  }
  out.csv = csv.str();

  // ---- summary ------------------------------------------------------------
  nlohmann::json summary;
  summary["config_hash"] = config_hash(cfg);
  summary["modes"] = m;
  summary["solver"] = {{"accepted", out.trajectory.stats.accepted},
                       {"rejected", out.trajectory.stats.rejected},
                       {"rhs_evals", out.trajectory.stats.rhs_evals},
                       {"gauge_flips", out.trajectory.gauge_flips}};
  summary["max_scaled_trace_residual"] = out.trajectory.max_scaled_residual();
  summary["warnings"] = model.warnings;
  summary["schmidt"] = nlohmann::json::array();
  for (int mu = 0; mu < m; ++mu)
    summary["schmidt"].push_back({{"lambda_abs", out.basis.lambda_abs(mu)},
                                  {"theta", out.basis.theta(mu)}});

  if (model.structure.lossless()) {
    // lossless closed-form cross-check
    const DerivedRates rates = derived_rates(model.structure, out.basis);
    double worst = 0.0;
    for (const auto& s : out.trajectory.samples) {
      const auto ref = limits::lossless_solution(out.basis, rates, cfg.pump, s.t);
      for (int mu = 0; mu < m; ++mu) {
        const double scale = std::max(1.0, std::abs(ref.r(mu)));
        worst = std::max(worst, std::abs(s.r(mu) - ref.r(mu)) / scale);
      }
    }
    summary["lossless_check"] = {{"max_rel_r_error", worst}};
  }
  summary["timestamp"] =
      static_cast<long>(std::chrono::duration_cast<std::chrono::seconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count());
  out.summary = summary.dump(2);
  return out;
}

std::vector<RunResult> run_many(const std::vector<SimConfig>& cfgs, int threads) {
  if (threads <= 0) {
    if (const char* env = std::getenv("MSTS_THREADS")) threads = std::atoi(env);
    if (threads <= 0) threads = 1;
  }
  std::vector<RunResult> results(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  size_t next = 0;
  std::mutex mtx;
  auto worker = [&]() {
    for (;;) {
      size_t idx;
      {
        std::lock_guard<std::mutex> lock(mtx);
        if (next >= cfgs.size()) return;
        idx = next++;
      }
      try {
        results[idx] = run(cfgs[idx]);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<int>(threads, static_cast<int>(cfgs.size()));
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return results;
}

}  // namespace msts
