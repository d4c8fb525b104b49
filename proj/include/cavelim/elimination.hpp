#ifndef CAVELIM_ELIMINATION_HPP
#define CAVELIM_ELIMINATION_HPP

#include <optional>
#include <utility>

#include "cavelim/model.hpp"

namespace cavelim {

// Parameters of the cavity + emitter-A subsystem after the ensemble is
// eliminated.  Detunings are relative to the bare omega_A frame; the
// omega_*_eff fields are absolute (lab-frame) frequencies.
struct EffectiveParams {
  double delta_c_eff = 0.0;
  double delta_a_eff = 0.0;
  double g_a_eff = 0.0;
  double kappa_eff = 0.0;
  double gamma_a_eff = 0.0;
  double mu = 0.0;  // joint cavity/emitter dissipation rate
  double omega_c_eff = 0.0;
  double omega_a_eff = 0.0;
};

// The three quadratic forms behind every effective parameter, computed
// with one LU factorization of M.  Shared by the elimination and the
// classical ODE-reduction path so both produce identical doubles.
struct EliminationForms {
  cplx gg;  // G^T M^-1 G
  cplx gv;  // G^T M^-1 V  (= V^T M^-1 G)
  cplx vv;  // V^T M^-1 V
};

EliminationForms elimination_forms(const CouplingSet& couplings);

EffectiveParams effective_params(const CouplingSet& couplings,
                                 const SystemSpec& spec);

// Closed-form single-emitter path; must agree with effective_params on the
// corresponding one-emitter CouplingSet to full precision.
EffectiveParams effective_params_single(double delta_b, double gamma_b,
                                        double omega_ab, double gamma_ab,
                                        double g_a, double g_b,
                                        double gamma_a, double kappa,
                                        double delta_c, double omega_a = 0.0);

// Split of the cavity-coupling shift for N = 1 into the coherent
// (Omega_AB-driven) and dissipative (gamma_AB-driven) contributions.
struct CouplingModification {
  double delta_g_a = 0.0;
  double coherent = 0.0;
  double dissipative = 0.0;
};

CouplingModification coupling_modification(const SystemSpec& spec,
                                           const CouplingSet& couplings);

// Linewidth changes for N = 1: the cavity is always broadened by
// delta_kappa; emitter A gains `broadening` and loses `narrowing`
// (gamma_A * f^2), so delta_gamma_a may have either sign.
struct LinewidthModification {
  double delta_kappa = 0.0;
  double delta_gamma_a = 0.0;
  double broadening = 0.0;
  double narrowing = 0.0;
};

LinewidthModification linewidth_modification(const SystemSpec& spec,
                                             const CouplingSet& couplings);

// Diagonal form of the joint dissipator: rates gamma_[pm] and the mixing
// angle alpha of the collective jump operators
//   L_+ = cos(alpha/2) a + sin(alpha/2) sigma_A^-
//   L_- = -sin(alpha/2) a + cos(alpha/2) sigma_A^-
struct DissipatorModes {
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double alpha = 0.0;  // in [0, 2*pi)
  double c = 1.0;      // cos(alpha/2)
  double s = 0.0;      // sin(alpha/2)
  Eigen::Matrix2d rotation() const {
    Eigen::Matrix2d r;
    r << c, s, -s, c;
    return r;
  }
};

DissipatorModes diagonalize_dissipator(const EffectiveParams& p);

enum class Verdict { pass, marginal, fail };

struct ValidityOptions {
  double n_bar = 1.0;              // photon-number scale of the drive
  double pass_threshold = 0.1;
  double marginal_threshold = 0.3;
  // Subsystem amplitudes (alpha, beta_A) used for the retardation ratio.
  std::optional<std::pair<cplx, cplx>> subsystem_state;
};

struct SingleEmitterRatios {
  double dipole = 0.0;  // max(|Omega_AB|, |gamma_AB|) / |delta_B - i gamma_B|
  double cavity = 0.0;  // |g_B| sqrt(n_bar) / |delta_B - i gamma_B|
};

// Quantitative check that the ensemble is fast and weakly admixed: every
// ratio must stay below pass_threshold for the elimination to be trusted.
struct ValidityReport {
  Vec eigenvalues;  // of B = -iM, descending real part; empty when degraded
  double min_eigenvalue_magnitude = 0.0;
  double max_coupling_ratio = 0.0;
  double cavity_scale_ratio = 0.0;
  double emitter_scale_ratio = 0.0;
  double coupling_scale_ratio = 0.0;
  std::optional<double> retardation_ratio;
  std::optional<SingleEmitterRatios> single;
  bool degraded = false;  // eigenbasis unreliable; ratios from solve bounds
  double n_bar = 1.0;
  double pass_threshold = 0.1;
  double marginal_threshold = 0.3;
  Verdict verdict = Verdict::fail;
};

ValidityReport validity_report(const SystemSpec& spec,
                               const CouplingSet& couplings,
                               const ValidityOptions& options = {});

// Adiabatic ensemble amplitudes for frozen subsystem amplitudes, and the
// first retardation correction to them.
Vec adiabatic_amplitudes(const CouplingSet& couplings, cplx alpha,
                         cplx beta_a);
Vec retardation_correction(const CouplingSet& couplings,
                           const EffectiveParams& p, cplx alpha, cplx beta_a);

}  // namespace cavelim

#endif
