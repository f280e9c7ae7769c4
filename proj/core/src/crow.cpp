#include "msts/crow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace msts {
namespace crow {

namespace {

constexpr double kEps0 = 8.8541878128e-12;  // F/m

std::string kd_label(double kd) {
  // multiples of pi/12 cover every grid up to 24 cavities; fall back to raw
  const double frac = kd / M_PI * 12.0;
  char buf[32];
  if (std::abs(frac - std::round(frac)) < 1e-9) {
    int num = static_cast<int>(std::round(frac));
    if (num == 0) return "kD=0";
    int den = 12;
    const int g = std::gcd(std::abs(num), den);
    num /= g;
    den /= g;
    if (den == 1 && std::abs(num) == 1) return num > 0 ? "kD=pi" : "kD=-pi";
    if (den == 1)
      std::snprintf(buf, sizeof(buf), "kD=%+dpi", num);
    else if (std::abs(num) == 1)
      std::snprintf(buf, sizeof(buf), "kD=%spi/%d", num > 0 ? "+" : "-", den);
    else
      std::snprintf(buf, sizeof(buf), "kD=%+dpi/%d", num, den);
    return std::string(buf);
  }
  std::snprintf(buf, sizeof(buf), "kD=%+.6f", kd);
  return std::string(buf);
}

}  // namespace

CrowParams nominal_params(int cavities, double d) {
  CrowParams p;
  p.cavities = cavities;
  p.d = d;
  const double unit = 2.0 * M_PI * kC / d;
  p.omega0 = complexd(0.305, -7.71e-6) * unit;
  p.beta1 = complexd(9.87e-3, -1.97e-5);
  p.k_p = (M_PI / 2.0) / p.period();
  return p;
}

std::vector<double> allowed_kd(const CrowParams& params) {
  if (params.cavities < 2) raise(errc::config_error, "CROW needs at least two cavities");
  std::vector<double> kds;
  for (int j = 0; j < params.cavities; ++j) {
    double kd = 2.0 * M_PI * j / params.cavities;
    while (kd > M_PI + 1e-12) kd -= 2.0 * M_PI;
    kds.push_back(kd);
  }
  std::sort(kds.begin(), kds.end());
  return kds;
}

QuasimodeSet build_crow(const CrowParams& params) {
  const auto kds = allowed_kd(params);
  const int m = static_cast<int>(kds.size());
  QuasimodeSet qs;
  qs.omega.resize(m);
  qs.gamma.resize(m);
  for (int i = 0; i < m; ++i) {
    const complexd wk = params.omega0 * (1.0 - params.beta1 * std::cos(kds[i]));
    qs.omega(i) = wk.real();
    qs.gamma(i) = -wk.imag();
    qs.labels.push_back(kd_label(kds[i]));
  }
  return qs;
}

double dirichlet_ratio(int m_cav, double x) {
  const double s = std::sin(x);
  if (std::abs(s) < 1e-9) {
    // x near j pi: limit is cos(M x)/cos(x) evaluated at the singular point
    const double j = std::round(x / M_PI);
    const double num = std::cos(m_cav * j * M_PI);
    const double den = std::cos(j * M_PI);
    return num / den;
  }
  return std::sin(m_cav * x) / (m_cav * s);
}

CouplingSpec crow_coupling(const CrowParams& params) {
  const auto kds = allowed_kd(params);
  const int m = static_cast<int>(kds.size());
  const double kpd = params.k_p * params.period();
  const bool on_grid = std::any_of(kds.begin(), kds.end(), [&](double kd) {
    double diff = std::remainder(kd - kpd, 2.0 * M_PI);
    return std::abs(diff) < 1e-9;
  });
  if (!on_grid)
    raise(errc::pump_mode_not_on_grid,
          "pump Bloch vector k_p D = " + std::to_string(kpd) + " is not an allowed value");

  Eigen::MatrixXcd g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double dkd = kds[i] + kds[j] - 2.0 * kpd;
      const double x = 0.5 * dkd;
      g(i, j) = std::polar(1.0, -x) * dirichlet_ratio(params.cavities, x);
    }
  g = 0.5 * (g + g.transpose()).eval();

  CouplingSpec cs;
  cs.matrix = g;
  cs.scale = (params.g0 > 0.0) ? params.g0 / kHbar : 1.0;
  return cs;
}

DriveParameters drive_parameters(const CrowParams& params, double alpha_sq, double v) {
  if (alpha_sq < 0.0 || v <= 0.0) raise(errc::config_error, "drive parameters must be positive");
  DriveParameters out;
  const double length = (params.cavities - 1) * params.period();
  out.t_c = length / v;
  out.g = 4.0 * params.g0 * alpha_sq * out.t_c / kHbar;
  return out;
}

double g0_from_cavity(double omega0_re, double chi3_eff, double v_eff, int n_opaque) {
  return kHbar * kHbar * omega0_re * omega0_re * chi3_eff /
         (16.0 * kEps0 * (2.0 * n_opaque + 1.0) * v_eff);
}

double chi3_from_kerr_index(double refractive_index, double n2) {
  return (4.0 / 3.0) * kEps0 * kC * refractive_index * refractive_index * n2;
}

}  // namespace crow
}  // namespace msts
