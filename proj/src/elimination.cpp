#include "cavelim/elimination.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "cavelim/cslinalg.hpp"

namespace cavelim {

namespace {

void check_invariants(const EffectiveParams& p, double kappa_bare,
                      bool g_is_real) {
  const double scale = std::max({1.0, p.kappa_eff, std::abs(p.gamma_a_eff)});
  if (g_is_real && p.kappa_eff < kappa_bare - 1e-9 * scale)
    throw UnphysicalParametersError(
        "effective_params: kappa_eff below the bare kappa; input couplings "
        "are not physically admissible");
  if (p.gamma_a_eff < -1e-9 * scale)
    throw UnphysicalParametersError(
        "effective_params: negative gamma_A_eff; input couplings are not "
        "physically admissible");
  const double bound =
      std::sqrt(std::max(0.0, p.kappa_eff * p.gamma_a_eff));
  if (std::abs(p.mu) > bound + 1e-9 * std::max(1.0, bound))
    throw UnphysicalParametersError(
        "effective_params: |mu| exceeds sqrt(kappa_eff*gamma_A_eff); input "
        "couplings are not physically admissible");
}

// N = 1 accessors for the modification splits.
struct SingleCouplings {
  double delta_b, gamma_b, omega_ab, gamma_ab, g_b;
};

SingleCouplings single_couplings(const SystemSpec& spec,
                                 const CouplingSet& cs, const char* who) {
  if (cs.size() != 1)
    throw UnsupportedConfigurationError(
        std::string(who) + ": defined for a single ensemble emitter only");
  if (std::abs(cs.g(0).imag()) > 1e-12 * std::max(1.0, std::abs(cs.g(0))))
    throw UnsupportedConfigurationError(std::string(who) +
                                        ": complex g_B is not supported");
  return SingleCouplings{spec.delta_b(), spec.ensemble_b.gamma,
                         cs.v(0).real(), -cs.v(0).imag(), cs.g(0).real()};
}

}  // namespace

EliminationForms elimination_forms(const CouplingSet& cs) {
  const SymmetricSolver solver(cs.m);
  const Vec zg = solver.solve(cs.g);
  const Vec zv = solver.solve(cs.v);
  EliminationForms f;
  f.gg = (cs.g.transpose() * zg).value();
  f.gv = (cs.g.transpose() * zv).value();
  f.vv = (cs.v.transpose() * zv).value();
  return f;
}

EffectiveParams effective_params(const CouplingSet& cs,
                                 const SystemSpec& spec) {
  const EliminationForms f = elimination_forms(cs);
  EffectiveParams p;
  p.delta_c_eff = spec.delta_c() - f.gg.real();
  p.delta_a_eff = -f.vv.real();
  p.g_a_eff = cs.g_a - f.gv.real();
  p.kappa_eff = spec.cavity.kappa + f.gg.imag();
  p.gamma_a_eff = spec.emitter_a.gamma + f.vv.imag();
  p.mu = f.gv.imag();
  p.omega_c_eff = spec.cavity.omega - f.gg.real();
  p.omega_a_eff = spec.emitter_a.omega - f.vv.real();
  check_invariants(p, spec.cavity.kappa, cs.g.imag().isZero(0.0));
  return p;
}

EffectiveParams effective_params_single(double delta_b, double gamma_b,
                                        double omega_ab, double gamma_ab,
                                        double g_a, double g_b,
                                        double gamma_a, double kappa,
                                        double delta_c, double omega_a) {
  const double denom = delta_b * delta_b + gamma_b * gamma_b;
  if (denom == 0.0)
    throw EliminationSingularError(
        "effective_params_single: delta_B and gamma_B are both zero", 0.0);
  EffectiveParams p;
  p.g_a_eff = g_a - g_b * (omega_ab * delta_b + gamma_ab * gamma_b) / denom;
  p.gamma_a_eff =
      gamma_a + (gamma_b * (omega_ab * omega_ab - gamma_ab * gamma_ab) -
                 2.0 * delta_b * omega_ab * gamma_ab) /
                    denom;
  p.kappa_eff = kappa + g_b * g_b * gamma_b / denom;
  p.mu = g_b * (gamma_b * omega_ab - delta_b * gamma_ab) / denom;
  p.delta_a_eff = -((omega_ab * omega_ab - gamma_ab * gamma_ab) * delta_b +
                    2.0 * omega_ab * gamma_ab * gamma_b) /
                  denom;
  p.delta_c_eff = delta_c - g_b * g_b * delta_b / denom;
  p.omega_a_eff = omega_a + p.delta_a_eff;
  p.omega_c_eff = omega_a + p.delta_c_eff;
  check_invariants(p, kappa, true);
  return p;
}

CouplingModification coupling_modification(const SystemSpec& spec,
                                           const CouplingSet& cs) {
  const auto c = single_couplings(spec, cs, "coupling_modification");
  const double denom = c.delta_b * c.delta_b + c.gamma_b * c.gamma_b;
  CouplingModification out;
  out.coherent = -c.g_b * c.omega_ab * c.delta_b / denom;
  out.dissipative = -c.g_b * c.gamma_ab * c.gamma_b / denom;
  out.delta_g_a = out.coherent + out.dissipative;
  return out;
}

LinewidthModification linewidth_modification(const SystemSpec& spec,
                                             const CouplingSet& cs) {
  const auto c = single_couplings(spec, cs, "linewidth_modification");
  if (!(c.gamma_b > 0.0))
    throw UnsupportedConfigurationError(
        "linewidth_modification: requires gamma_B > 0");
  const double denom = c.delta_b * c.delta_b + c.gamma_b * c.gamma_b;
  LinewidthModification out;
  out.delta_kappa = c.g_b * c.g_b * c.gamma_b / denom;
  const double num = c.gamma_b * c.omega_ab - c.delta_b * c.gamma_ab;
  out.broadening = num * num / (c.gamma_b * denom);
  out.narrowing = c.gamma_ab * c.gamma_ab / c.gamma_b;
  out.delta_gamma_a = out.broadening - out.narrowing;
  return out;
}

DissipatorModes diagonalize_dissipator(const EffectiveParams& p) {
  const double half_sum = 0.5 * (p.kappa_eff + p.gamma_a_eff);
  const double half_diff = 0.5 * (p.kappa_eff - p.gamma_a_eff);
  const double radius = std::hypot(half_diff, p.mu);
  DissipatorModes modes;
  modes.gamma_plus = half_sum + radius;
  modes.gamma_minus = half_sum - radius;
  const double tol = 1e-10 * std::max(1.0, modes.gamma_plus);
  if (modes.gamma_minus < -tol)
    throw UnphysicalParametersError(
        "diagonalize_dissipator: gamma_minus < 0, the joint rate matrix is "
        "not positive semidefinite");
  if (modes.gamma_minus < 0.0) modes.gamma_minus = 0.0;
  modes.alpha = std::atan2(p.mu, half_diff);
  if (modes.alpha < 0.0) modes.alpha += 2.0 * pi;
  modes.c = std::cos(0.5 * modes.alpha);
  modes.s = std::sin(0.5 * modes.alpha);

  Eigen::Matrix2d rate;
  rate << p.kappa_eff, p.mu, p.mu, p.gamma_a_eff;
  const Eigen::Matrix2d diag =
      modes.rotation() * rate * modes.rotation().transpose();
  if (std::abs(diag(0, 1)) > 1e-10 * std::max(1.0, rate.norm()))
    throw Error("diagonalize_dissipator: rotation failed to diagonalize the "
                "rate matrix");
  return modes;
}

Vec adiabatic_amplitudes(const CouplingSet& cs, cplx alpha, cplx beta_a) {
  const SymmetricSolver solver(cs.m);
  return -solver.solve(cs.g * alpha + cs.v * beta_a);
}

Vec retardation_correction(const CouplingSet& cs, const EffectiveParams& p,
                           cplx alpha, cplx beta_a) {
  const cplx cavity_scale(p.delta_c_eff, -p.kappa_eff);
  const cplx emitter_scale(p.delta_a_eff, -p.gamma_a_eff);
  const cplx coupling_scale(p.g_a_eff, -p.mu);
  const Vec rhs = cs.g * (cavity_scale * alpha + coupling_scale * beta_a) +
                  cs.v * (emitter_scale * beta_a + coupling_scale * alpha);
  // sum_j x_j x_j^T / lambda_j^2 = B^-2 = -M^-2
  const SymmetricSolver solver(cs.m);
  return -solver.solve(solver.solve(rhs));
}

ValidityReport validity_report(const SystemSpec& spec, const CouplingSet& cs,
                               const ValidityOptions& options) {
  ValidityReport rep;
  rep.n_bar = options.n_bar;
  rep.pass_threshold = options.pass_threshold;
  rep.marginal_threshold = options.marginal_threshold;

  const double root_n = std::sqrt(options.n_bar);
  const Mat b = -ii * cs.m;

  try {
    const auto dec = decompose_complex_symmetric(b);
    rep.eigenvalues = dec.eigenvalues;
    rep.min_eigenvalue_magnitude = dec.eigenvalues.cwiseAbs().minCoeff();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < dec.eigenvalues.size(); ++j) {
      const Vec x = dec.eigenvectors.col(j);
      const double to_v = std::abs((x.transpose() * cs.v).value());
      const double to_g = root_n * std::abs((x.transpose() * cs.g).value());
      worst = std::max(worst,
                       std::max(to_v, to_g) / std::abs(dec.eigenvalues(j)));
    }
    rep.max_coupling_ratio = worst;
  } catch (const DecompositionUnreliableError&) {
    // Defective ensemble matrix: fall back to aggregate solve bounds.
    rep.degraded = true;
    const Eigen::JacobiSVD<Mat> svd(cs.m);
    rep.min_eigenvalue_magnitude = svd.singularValues().minCoeff();
    const SymmetricSolver solver(cs.m);
    rep.max_coupling_ratio = std::max(solver.solve(cs.v).norm(),
                                      root_n * solver.solve(cs.g).norm());
  }

  const EffectiveParams p = effective_params(cs, spec);
  const double floor = rep.min_eigenvalue_magnitude;
  if (!(floor > 0.0))
    throw EliminationSingularError("validity_report: M is singular", 0.0);
  rep.cavity_scale_ratio = std::hypot(p.delta_c_eff, p.kappa_eff) / floor;
  rep.emitter_scale_ratio = std::hypot(p.delta_a_eff, p.gamma_a_eff) / floor;
  rep.coupling_scale_ratio = root_n * std::hypot(p.g_a_eff, p.mu) / floor;

  if (options.subsystem_state) {
    const auto [alpha, beta_a] = *options.subsystem_state;
    const double ad = adiabatic_amplitudes(cs, alpha, beta_a).norm();
    const double ret = retardation_correction(cs, p, alpha, beta_a).norm();
    rep.retardation_ratio = ad > 0.0
                                ? ret / ad
                                : (ret > 0.0
                                       ? std::numeric_limits<double>::infinity()
                                       : 0.0);
  }

  if (cs.size() == 1) {
    SingleEmitterRatios s;
    const double mag = std::abs(cs.m(0, 0));
    s.dipole = std::max(std::abs(cs.v(0).real()), std::abs(cs.v(0).imag())) / mag;
    s.cavity = std::abs(cs.g(0)) * root_n / mag;
    rep.single = s;
  }

  double worst = std::max({rep.max_coupling_ratio, rep.cavity_scale_ratio,
                           rep.emitter_scale_ratio, rep.coupling_scale_ratio});
  if (rep.retardation_ratio) worst = std::max(worst, *rep.retardation_ratio);
  rep.verdict = worst < rep.pass_threshold
                    ? Verdict::pass
                    : (worst < rep.marginal_threshold ? Verdict::marginal
                                                      : Verdict::fail);
  return rep;
}

}  // namespace cavelim
