#pragma once

#include <complex>

#include "msts/model.hpp"

namespace msts {
namespace crow {

inline constexpr double kHbar = 1.054571817e-34;  // J s
inline constexpr double kC = 299792458.0;         // m/s

/// Four(-or-more)-cavity periodic chain with nearest-neighbour dispersion
/// omega_k = omega0 (1 - beta1 cos kD), D = 2d. Allowed Bloch values are
/// kD = 2 pi j / M_cav reduced to (-pi, pi].
struct CrowParams {
  int cavities = 4;
  double d = 480e-9;                       // lattice constant, m
  complexd omega0{0.0, 0.0};               // rad/s, Im < 0 encodes loss
  complexd beta1{0.0, 0.0};                // dimensionless coupling
  double k_p = 0.0;                        // pump Bloch vector, rad/m
  double g0 = 0.0;                         // energy scale of the coupling, J

  double period() const { return 2.0 * d; }
};

/// Nominal silicon photonic-crystal chain: omega0 = (0.305 - i 7.71e-6) 2 pi c / d,
/// beta1 = 9.87e-3 - i 1.97e-5, pump at kD = pi/2.
CrowParams nominal_params(int cavities = 4, double d = 480e-9);

/// The allowed kD values in (-pi, pi], ascending.
std::vector<double> allowed_kd(const CrowParams& params);

/// One quasimode per allowed Bloch vector; labels carry the kD value.
QuasimodeSet build_crow(const CrowParams& params);

/// sin(M x)/(M sin x) with the removable singularities at x = j pi resolved.
double dirichlet_ratio(int m_cav, double x);

/// Phase-matched coupling matrix over the Bloch grid (entries in units of G0):
/// G_{k1 k2} = e^{-i dk D/2} sinc(M dk D/2)/sinc(dk D/2), dk = k1 + k2 - 2 k_p.
/// The returned CouplingSpec carries scale = G0/hbar so entries land in rad/s.
CouplingSpec crow_coupling(const CrowParams& params);

struct DriveParameters {
  double g = 0.0;    // dimensionless pumping strength
  double t_c = 0.0;  // structure crossing time, s
};

/// t_c = L/v with L = (M_cav - 1) D (a 4-cavity chain spans 2.9 um),
/// g = 4 G0 |alpha|^2 t_c / hbar.
DriveParameters drive_parameters(const CrowParams& params, double alpha_sq, double v);

/// G0 from the cavity nonlinearity: hbar^2 w0^2 chi3_eff / (16 eps0 (2N+1) V_eff).
double g0_from_cavity(double omega0_re, double chi3_eff, double v_eff, int n_opaque);

/// chi^(3) from the tabulated Kerr index: chi3 = (4/3) eps0 c n^2 n2.
double chi3_from_kerr_index(double refractive_index, double n2);

}  // namespace crow
}  // namespace msts
