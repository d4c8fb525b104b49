#ifndef CAVELIM_DIPOLE_HPP
#define CAVELIM_DIPOLE_HPP

#include <vector>

#include "cavelim/common.hpp"

namespace cavelim {

// Relative geometry of an emitter pair: xi = k*r is the scaled separation,
// theta the angle between the separation vector and the dipole axis (z).
struct PairGeometry {
  double xi = 0.0;
  double theta = 0.0;
};

// theta* = arccos(1/sqrt(3)); the near-field (xi^-3, xi^-2) terms vanish
// here for every xi, leaving g = -cos(xi)/xi and f = sin(xi)/xi.
inline const double magic_angle = std::acos(1.0 / std::sqrt(3.0));

PairGeometry pair_geometry(const Vec3& r_a, const Vec3& r_b);

// Dimensionless coherent (g) and dissipative (f) coupling profiles.
// g diverges ~ xi^-3 near contact; f -> 1 and satisfies |f| < 1 for xi > 0.
double coupling_g(double xi, double theta);
double coupling_f(double xi, double theta);

struct DipoleCoupling {
  double omega = 0.0;   // coherent exchange rate, Re V
  double gamma = 0.0;   // dissipative exchange rate, -Im V
  double g = 0.0;       // omega / sqrt(gamma_a*gamma_b)
  double f = 0.0;       // gamma / sqrt(gamma_a*gamma_b)
  cplx v() const { return cplx(omega, -gamma); }
};

DipoleCoupling dipole_coupling(const PairGeometry& geom, double gamma_a,
                               double gamma_b);

struct CouplingMap {
  std::vector<double> theta;
  std::vector<double> xi;
  Eigen::MatrixXd g;  // theta.size() x xi.size()
  Eigen::MatrixXd f;
};

CouplingMap coupling_map(const std::vector<double>& theta,
                         const std::vector<double>& xi, double gamma_a,
                         double gamma_b);

}  // namespace cavelim

#endif
