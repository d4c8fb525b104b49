#ifndef CAVELIM_CLASSICAL_HPP
#define CAVELIM_CLASSICAL_HPP

#include <vector>

#include "cavelim/elimination.hpp"
#include "cavelim/model.hpp"

namespace cavelim {

// Low-excitation coherent amplitudes: cavity field, emitter A, ensemble.
struct ClassicalState {
  cplx alpha{0.0, 0.0};
  cplx beta_a{0.0, 0.0};
  Vec beta;  // ensemble amplitudes; empty means all zero
};

struct DriveSpec {
  double eta = 0.0;      // cavity drive amplitude
  double omega_l = 0.0;  // laser frequency (absolute)
  double detuning_c(const SystemSpec& s) const { return s.cavity.omega - omega_l; }
  double detuning_a(const SystemSpec& s) const { return s.emitter_a.omega - omega_l; }
  double detuning_b(const SystemSpec& s) const { return s.ensemble_b.omega - omega_l; }
};

struct ClassicalTrajectory {
  std::vector<double> times;
  std::vector<cplx> alpha;
  std::vector<cplx> beta_a;
  std::vector<Vec> beta;  // per-sample ensemble amplitudes
};

// RK4 with step doubling; sub-steps are halved whenever the relative
// one-step error estimate exceeds 1e-10 and recorded samples land on
// multiples of dt.  The initial sub-step is clamped to the stability
// heuristic 0.1 / (fastest rate in the generator).
ClassicalTrajectory integrate_full_classical(const SystemSpec& spec,
                                             const CouplingSet& couplings,
                                             const ClassicalState& initial,
                                             double t_end, double dt);

ClassicalTrajectory integrate_effective_classical(const EffectiveParams& p,
                                                  cplx alpha0, cplx beta_a0,
                                                  double t_end, double dt);

// Re-derives the effective coefficients by inserting the adiabatic
// ensemble amplitudes into the equations of motion; bit-identical to
// elimination::effective_params by construction (shared quadratic forms).
EffectiveParams eliminate_classical(const SystemSpec& spec,
                                    const CouplingSet& couplings);

struct SteadyState {
  cplx alpha{0.0, 0.0};
  cplx beta_a{0.0, 0.0};
};

// Driven steady state of the effective two-mode system in the laser frame
// with frozen (dispersive) effective parameters.
SteadyState driven_steady_state(const EffectiveParams& p, const DriveSpec& d);

enum class SpectrumMode { exact, polariton };

struct Spectrum {
  std::vector<double> omega_l;
  std::vector<double> t_c;
};

// Cavity transmission T_c(omega_L) = (kappa_bare/eta)^2 |alpha_st|^2.
// Values above 1 are legitimate: kappa_eff < kappa_bare amplifies the
// on-resonance response relative to the empty cavity.
Spectrum transmission_spectrum(const EffectiveParams& p, double kappa_bare,
                               double eta, const std::vector<double>& omega_l,
                               SpectrumMode mode = SpectrumMode::exact);

// Reference variant that rebuilds the ensemble response at every laser
// frequency (M shifted by omega_A - omega_L) instead of freezing the
// effective parameters at the undriven values.
Spectrum transmission_spectrum_exact_frame(const SystemSpec& spec,
                                           const CouplingSet& couplings,
                                           double eta,
                                           const std::vector<double>& omega_l);

// Complex mode frequencies, linewidths, and residue weights of the two
// polaritons of the resonant effective system.
struct PolaritonAnalysis {
  cplx xi_plus{0.0, 0.0};
  cplx xi_minus{0.0, 0.0};
  double gamma_plus = 0.0;   // -Re xi_plus (always the broader mode)
  double gamma_minus = 0.0;
  double omega_plus = 0.0;   // omega0_eff - Im xi_plus
  double omega_minus = 0.0;
  cplx z_plus{0.0, 0.0};     // residue weights, z_plus + z_minus = 1
  cplx z_minus{0.0, 0.0};
  double omega0_eff = 0.0;
  double gamma_plus_onset = 0.0;  // gamma_plus at g = 0
  bool gamma_plus_nonincreasing = true;
};

PolaritonAnalysis polariton_analysis(double g_eff, double mu,
                                     double kappa_eff, double gamma_a_eff,
                                     double omega0_eff = 0.0);
// Requires omega_A_eff = omega_c_eff (shared resonance).
PolaritonAnalysis polariton_analysis(const EffectiveParams& p);

}  // namespace cavelim

#endif
