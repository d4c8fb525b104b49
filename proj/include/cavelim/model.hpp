#ifndef CAVELIM_MODEL_HPP
#define CAVELIM_MODEL_HPP

#include <string>
#include <vector>

#include "cavelim/common.hpp"

namespace cavelim {

struct EmitterA {
  double omega = 0.0;    // bare transition frequency
  double gamma = 0.0;    // free-space amplitude decay rate
  Vec3 position = Vec3::Zero();
};

struct EnsembleB {
  double omega = 0.0;
  double gamma = 1.0;    // per-emitter amplitude decay rate
  std::vector<Vec3> positions;
  int size() const { return static_cast<int>(positions.size()); }
};

struct Cavity {
  double omega = 0.0;
  double kappa = 0.0;              // amplitude decay rate of the mode
  double g0_a = 0.0;               // peak coupling to emitter A
  double g0_b = 0.0;               // peak coupling to ensemble emitters
  Vec3 axis = Vec3(0.0, 1.0, 0.0); // standing-wave axis (unit vector)
};

// Full system description.  The undriven rotating frame is pinned to
// omega_A, so only detunings relative to A enter the dynamics.
struct SystemSpec {
  EmitterA emitter_a;
  EnsembleB ensemble_b;
  Cavity cavity;

  double frame_frequency() const { return emitter_a.omega; }
  double delta_c() const { return cavity.omega - emitter_a.omega; }
  double delta_b() const { return ensemble_b.omega - emitter_a.omega; }
};

struct Diagnostic {
  enum class Severity { warning, error };
  Severity severity;
  std::string message;
};

// Schema and physicality checks; never throws.  A spec with any
// error-severity diagnostic must not be passed to build_couplings.
std::vector<Diagnostic> validate_spec(const SystemSpec& spec);

// Couplings entering the ensemble block of the equations of motion:
//   M   complex symmetric ensemble matrix, diag = delta_B - i*gamma_B,
//       off-diagonal Omega_jl - i*gamma_jl from the pair geometry;
//   G   cavity couplings g_j = g0_B cos(k * axis.r_j);
//   V   emitter-A couplings Omega_jA - i*gamma_jA;
//   g_a cavity coupling of emitter A.
struct CouplingSet {
  Mat m;
  Vec g;
  Vec v;
  double g_a = 0.0;
  int size() const { return static_cast<int>(g.size()); }
  Eigen::VectorXd omega_ab() const { return v.real(); }
  Eigen::VectorXd gamma_ab() const { return -v.imag(); }
};

// Geometry path: derive every coupling from positions and rates.
CouplingSet build_couplings(const SystemSpec& spec);

// Direct path: accept explicit matrices (e.g. reference fixtures).  Checks
// that M is symmetric and carries delta_B - i*gamma_B on its diagonal.
CouplingSet make_couplings(double delta_b, double gamma_b, Mat m, Vec g,
                           Vec v, double g_a);

// Single-emitter convenience for the direct path.
CouplingSet make_couplings_single(double delta_b, double gamma_b,
                                  double omega_ab, double gamma_ab,
                                  double g_b, double g_a);

}  // namespace cavelim

#endif
