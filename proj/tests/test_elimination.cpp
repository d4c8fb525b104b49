#include <doctest.h>

#include <cmath>
#include <random>

#include "cavelim/dipole.hpp"
#include "cavelim/elimination.hpp"

using namespace cavelim;

namespace {

bool close(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Dispersive reference point: one far-detuned ensemble emitter with a pure
// coherent dipole link.  Every effective parameter is a rational number.
SystemSpec dispersive_spec() {
  SystemSpec spec;
  spec.ensemble_b.omega = 100.0;
  spec.ensemble_b.gamma = 1.0;
  spec.ensemble_b.positions = {Vec3(0, 0, 0.1)};  // only N matters here
  return spec;
}

CouplingSet dispersive_couplings() {
  return make_couplings_single(100.0, 1.0, 5.0, 0.0, 10.0, 0.0);
}

}  // namespace

TEST_CASE("dispersive reference values") {
  const auto spec = dispersive_spec();
  const auto cs = dispersive_couplings();
  const auto p = effective_params(cs, spec);

  CHECK(close(p.g_a_eff, -5000.0 / 10001.0));
  CHECK(close(p.mu, 50.0 / 10001.0));
  CHECK(close(p.kappa_eff, 100.0 / 10001.0));
  CHECK(close(p.gamma_a_eff, 25.0 / 10001.0));
  CHECK(close(p.delta_c_eff, -10000.0 / 10001.0));
  CHECK(close(p.delta_a_eff, -2500.0 / 10001.0));
  // Absolute frequencies follow the frame (omega_A = 0 here).
  CHECK(close(p.omega_c_eff, p.delta_c_eff));
  CHECK(close(p.omega_a_eff, p.delta_a_eff));
}

TEST_CASE("purely dissipative reference values") {
  SystemSpec spec;
  spec.emitter_a.gamma = 1.0;
  spec.ensemble_b.omega = 0.0;
  spec.ensemble_b.gamma = 10.0;
  spec.cavity.kappa = 1.0;
  const auto cs = make_couplings_single(0.0, 10.0, 0.0, 1.0, 5.0, 0.0);
  const auto p = effective_params(cs, spec);
  CHECK(close(p.g_a_eff, -0.5));
  CHECK(close(p.gamma_a_eff, 0.9));
  CHECK(close(p.kappa_eff, 3.5));
  CHECK(close(p.mu, 0.0));
  CHECK(close(p.delta_a_eff, 0.0));
  CHECK(close(p.delta_c_eff, 0.0));
}

TEST_CASE("decoupled ensemble leaves bare parameters") {
  SystemSpec spec;
  spec.emitter_a.gamma = 0.3;
  spec.ensemble_b.omega = 5.0;
  spec.cavity = Cavity{2.0, 0.7, 0.4, 0.0};
  const auto cs = make_couplings_single(5.0, 1.0, 0.0, 0.0, 0.0, 0.4);
  const auto p = effective_params(cs, spec);
  CHECK(p.delta_c_eff == 2.0);
  CHECK(p.delta_a_eff == 0.0);
  CHECK(p.g_a_eff == 0.4);
  CHECK(p.kappa_eff == 0.7);
  CHECK(p.gamma_a_eff == 0.3);
  CHECK(p.mu == 0.0);
}

TEST_CASE("closed-form single path matches the general path") {
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double delta_b = -50.0 + 100.0 * u(rng);
    const double gamma_b = 0.1 + 10.0 * u(rng);
    const double gamma_a = 0.01 + 2.0 * u(rng);
    const double omega_ab = -5.0 + 10.0 * u(rng);
    // |gamma_AB| <= sqrt(gamma_A gamma_B) keeps the pair rates physical.
    const double gamma_ab =
        (2.0 * u(rng) - 1.0) * std::sqrt(gamma_a * gamma_b);
    const double g_b = -5.0 + 10.0 * u(rng);
    const double g_a = -2.0 + 4.0 * u(rng);
    const double kappa = 3.0 * u(rng);
    const double delta_c = -10.0 + 20.0 * u(rng);

    SystemSpec spec;
    spec.emitter_a.gamma = gamma_a;
    spec.ensemble_b.omega = delta_b;
    spec.ensemble_b.gamma = gamma_b;
    spec.cavity.omega = delta_c;
    spec.cavity.kappa = kappa;

    const auto cs =
        make_couplings_single(delta_b, gamma_b, omega_ab, gamma_ab, g_b, g_a);
    const auto general = effective_params(cs, spec);
    const auto single =
        effective_params_single(delta_b, gamma_b, omega_ab, gamma_ab, g_a,
                                g_b, gamma_a, kappa, delta_c);

    CHECK(close(general.delta_c_eff, single.delta_c_eff));
    CHECK(close(general.delta_a_eff, single.delta_a_eff));
    CHECK(close(general.g_a_eff, single.g_a_eff));
    CHECK(close(general.kappa_eff, single.kappa_eff));
    CHECK(close(general.gamma_a_eff, single.gamma_a_eff));
    CHECK(close(general.mu, single.mu));
  }
}

TEST_CASE("degenerate ensemble emitter is rejected") {
  CHECK_THROWS_AS(
      effective_params_single(0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.1, 0.1, 0.0),
      EliminationSingularError);
}

TEST_CASE("coupling modification splits and sums correctly") {
  const auto spec = dispersive_spec();
  const auto cs = dispersive_couplings();
  const auto mod = coupling_modification(spec, cs);
  const auto p = effective_params(cs, spec);
  CHECK(close(mod.delta_g_a, mod.coherent + mod.dissipative));
  CHECK(close(mod.delta_g_a, p.g_a_eff - cs.g_a));
  CHECK(mod.dissipative == 0.0);  // gamma_AB = 0 here

  // Resonant ensemble: only the dissipative channel survives.
  SystemSpec res;
  res.emitter_a.gamma = 0.25;
  res.ensemble_b.gamma = 1.0;
  const auto cs_res = make_couplings_single(0.0, 1.0, 0.7, 0.3, 2.0, 0.1);
  const auto mod_res = coupling_modification(res, cs_res);
  CHECK(mod_res.coherent == 0.0);
  CHECK(close(mod_res.dissipative, -2.0 * 0.3));
}

TEST_CASE("resonant ensemble reduces coupling by cos(k y) f") {
  // Geometry route: with delta_B = 0 the relative coupling change collapses
  // to -cos(k y_B) * f(pair), provided g0_A/g0_B = sqrt(gamma_A/gamma_B).
  SystemSpec spec;
  spec.emitter_a = EmitterA{7.0, 0.25, Vec3(0, 0, 0)};
  spec.ensemble_b.omega = 7.0;
  spec.ensemble_b.gamma = 1.0;
  spec.ensemble_b.positions = {Vec3(0.3, 0.2, 0.1)};
  spec.cavity = Cavity{7.0, 0.5, 0.4, 0.8};
  REQUIRE(validate_spec(spec).empty());

  const auto cs = build_couplings(spec);
  const auto mod = coupling_modification(spec, cs);
  const auto geo = pair_geometry(spec.emitter_a.position,
                                 spec.ensemble_b.positions[0]);
  const double f = coupling_f(geo.xi, geo.theta);
  const double expected = -std::cos(wave_number * 0.2) * f;
  CHECK(close(mod.delta_g_a / cs.g_a, expected));
}

TEST_CASE("large-detuning coupling modification limit") {
  // gamma_AB = 0, delta_B >> gamma_B: delta_g_A -> -g_B omega_AB / delta_B.
  const double delta_b = 1000.0, gamma_b = 1.0, omega_ab = 2.0, g_b = 3.0;
  SystemSpec spec;
  spec.ensemble_b.omega = delta_b;
  spec.ensemble_b.gamma = gamma_b;
  const auto cs =
      make_couplings_single(delta_b, gamma_b, omega_ab, 0.0, g_b, 0.0);
  const auto mod = coupling_modification(spec, cs);
  const double limit = -g_b * omega_ab / delta_b;
  CHECK(std::abs(mod.delta_g_a - limit) < 1e-5 * std::abs(limit));
}

TEST_CASE("linewidth modification identities") {
  std::mt19937 rng(131);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double delta_b = -20.0 + 40.0 * u(rng);
    const double gamma_b = 0.2 + 5.0 * u(rng);
    const double gamma_a = 0.05 + 1.0 * u(rng);
    const double omega_ab = -3.0 + 6.0 * u(rng);
    const double gamma_ab =
        (2.0 * u(rng) - 1.0) * std::sqrt(gamma_a * gamma_b);
    const double g_b = -4.0 + 8.0 * u(rng);

    SystemSpec spec;
    spec.emitter_a.gamma = gamma_a;
    spec.ensemble_b.omega = delta_b;
    spec.ensemble_b.gamma = gamma_b;
    const auto cs =
        make_couplings_single(delta_b, gamma_b, omega_ab, gamma_ab, g_b, 0.0);

    const auto lw = linewidth_modification(spec, cs);
    CHECK(lw.delta_kappa >= 0.0);
    CHECK(lw.broadening >= 0.0);
    CHECK(close(lw.delta_gamma_a, lw.broadening - lw.narrowing));

    const auto p = effective_params(cs, spec);
    CHECK(close(p.kappa_eff, lw.delta_kappa));  // kappa = 0 in this spec
    // |mu| = sqrt(delta_kappa * broadening) is exact for N = 1.
    const double bound = std::sqrt(lw.delta_kappa * lw.broadening);
    CHECK(std::abs(std::abs(p.mu) - bound) <=
          1e-10 * std::max(1.0, bound));
    // ... and never exceeds the full dissipator bound.
    CHECK(std::abs(p.mu) <=
          std::sqrt(p.kappa_eff * p.gamma_a_eff) + 1e-9);
  }
}

TEST_CASE("linewidth narrowing point kills mu") {
  // gamma_B * omega_AB = delta_B * gamma_AB makes the broadening (and with
  // it mu) vanish while the narrowing term survives.
  const double delta_b = 4.0, gamma_b = 2.0, gamma_ab = 0.5;
  const double omega_ab = delta_b * gamma_ab / gamma_b;
  SystemSpec spec;
  spec.emitter_a.gamma = 1.0;
  spec.ensemble_b.omega = delta_b;
  spec.ensemble_b.gamma = gamma_b;
  const auto cs =
      make_couplings_single(delta_b, gamma_b, omega_ab, gamma_ab, 2.0, 0.0);
  const auto lw = linewidth_modification(spec, cs);
  const auto p = effective_params(cs, spec);
  CHECK(std::abs(lw.broadening) < 1e-14);
  CHECK(std::abs(p.mu) < 1e-14);
  CHECK(close(lw.narrowing, gamma_ab * gamma_ab / gamma_b));
  CHECK(lw.delta_gamma_a < 0.0);
}

TEST_CASE("resonant linewidth change is gamma_A (g^2 - f^2)") {
  SystemSpec spec;
  spec.emitter_a = EmitterA{3.0, 0.36, Vec3(0, 0, 0)};
  spec.ensemble_b.omega = 3.0;
  spec.ensemble_b.gamma = 1.0;
  spec.ensemble_b.positions = {Vec3(0.05, 0.15, 0.2)};
  spec.cavity = Cavity{3.0, 0.5, 0.6, 1.0};
  const auto cs = build_couplings(spec);
  const auto lw = linewidth_modification(spec, cs);
  const auto geo = pair_geometry(spec.emitter_a.position,
                                 spec.ensemble_b.positions[0]);
  const double g = coupling_g(geo.xi, geo.theta);
  const double f = coupling_f(geo.xi, geo.theta);
  CHECK(close(lw.delta_gamma_a / spec.emitter_a.gamma, g * g - f * f, 1e-10));
}

TEST_CASE("modification helpers demand a single ensemble emitter") {
  SystemSpec spec;
  spec.ensemble_b.omega = 5.0;
  Mat m(2, 2);
  m << cplx(5, -1), cplx(0.1, 0), cplx(0.1, 0), cplx(5, -1);
  Vec g(2), v(2);
  g << 1.0, 1.0;
  v << cplx(0.1, 0), cplx(0.1, 0);
  const auto cs = make_couplings(5.0, 1.0, m, g, v, 0.0);
  CHECK_THROWS_AS(coupling_modification(spec, cs),
                  UnsupportedConfigurationError);
  CHECK_THROWS_AS(linewidth_modification(spec, cs),
                  UnsupportedConfigurationError);
}

TEST_CASE("dissipator modes: aligned and mixed cases") {
  EffectiveParams p;
  p.kappa_eff = 2.0;
  p.gamma_a_eff = 1.0;
  p.mu = 0.0;
  auto modes = diagonalize_dissipator(p);
  CHECK(close(modes.gamma_plus, 2.0));
  CHECK(close(modes.gamma_minus, 1.0));
  CHECK(modes.alpha == 0.0);
  CHECK(modes.c == 1.0);
  CHECK(modes.s == 0.0);

  p.mu = 0.5;
  modes = diagonalize_dissipator(p);
  CHECK(close(modes.gamma_plus, 1.5 + std::sqrt(0.5)));
  CHECK(close(modes.gamma_minus, 1.5 - std::sqrt(0.5)));
  CHECK(close(modes.gamma_plus * modes.gamma_minus, 1.75));
  CHECK(close(modes.alpha, pi / 4.0));
}

TEST_CASE("dissipator modes satisfy trace and determinant rules") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    EffectiveParams p;
    p.kappa_eff = 0.01 + 5.0 * u(rng);
    p.gamma_a_eff = 0.01 + 5.0 * u(rng);
    const double bound = std::sqrt(p.kappa_eff * p.gamma_a_eff);
    p.mu = (2.0 * u(rng) - 1.0) * bound;
    const auto modes = diagonalize_dissipator(p);

    CHECK(close(modes.gamma_plus + modes.gamma_minus,
                p.kappa_eff + p.gamma_a_eff));
    CHECK(modes.gamma_minus >= 0.0);
    CHECK(modes.alpha >= 0.0);
    CHECK(modes.alpha < 2.0 * pi);

    // Characteristic polynomial residual for both rates.
    const double tr = p.kappa_eff + p.gamma_a_eff;
    const double det = p.kappa_eff * p.gamma_a_eff - p.mu * p.mu;
    const double scale = std::max(1.0, tr * tr);
    for (double rate : {modes.gamma_plus, modes.gamma_minus})
      CHECK(std::abs(rate * rate - tr * rate + det) < 1e-12 * scale);

    // The stated rotation diagonalizes the rate matrix with gamma_plus
    // first.
    Eigen::Matrix2d rate_matrix;
    rate_matrix << p.kappa_eff, p.mu, p.mu, p.gamma_a_eff;
    const Eigen::Matrix2d diag =
        modes.rotation() * rate_matrix * modes.rotation().transpose();
    CHECK(std::abs(diag(0, 0) - modes.gamma_plus) < 1e-10 * scale);
    CHECK(std::abs(diag(1, 1) - modes.gamma_minus) < 1e-10 * scale);
    CHECK(std::abs(diag(0, 1)) < 1e-10 * scale);
  }
}

TEST_CASE("dissipator modes reject an indefinite rate matrix") {
  EffectiveParams p;
  p.kappa_eff = 0.1;
  p.gamma_a_eff = 0.1;
  p.mu = 0.5;
  CHECK_THROWS_AS(diagonalize_dissipator(p), UnphysicalParametersError);
}

TEST_CASE("unphysical couplings are rejected by the elimination") {
  SystemSpec spec;
  spec.emitter_a.gamma = 0.1;
  spec.ensemble_b.gamma = 1.0;
  // gamma_AB = 2 > sqrt(gamma_A gamma_B): gamma_A_eff would go negative.
  const auto cs = make_couplings_single(0.0, 1.0, 0.0, 2.0, 0.0, 0.0);
  CHECK_THROWS_AS(effective_params(cs, spec), UnphysicalParametersError);
}

TEST_CASE("validity report: decoupled ensemble passes with zero ratios") {
  SystemSpec spec;
  spec.ensemble_b.omega = 5.0;
  const auto cs = make_couplings_single(5.0, 1.0, 0.0, 0.0, 0.0, 0.0);
  const auto rep = validity_report(spec, cs);
  CHECK(rep.max_coupling_ratio == 0.0);
  CHECK(rep.cavity_scale_ratio == 0.0);
  CHECK(rep.emitter_scale_ratio == 0.0);
  CHECK(rep.coupling_scale_ratio == 0.0);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(!rep.degraded);
}

TEST_CASE("validity report: dispersive case passes") {
  const auto spec = dispersive_spec();
  const auto cs = dispersive_couplings();
  const auto rep = validity_report(spec, cs);
  REQUIRE(rep.single.has_value());
  CHECK(close(rep.single->dipole, 5.0 / std::sqrt(10001.0)));
  CHECK(close(rep.single->cavity, 10.0 / std::sqrt(10001.0)));
  CHECK(close(rep.max_coupling_ratio, 10.0 / std::sqrt(10001.0)));
  CHECK(close(rep.min_eigenvalue_magnitude, std::sqrt(10001.0)));
  CHECK(rep.verdict == Verdict::pass);
}

TEST_CASE("validity report: resonant strong dipole fails") {
  SystemSpec spec;
  const auto cs = make_couplings_single(0.0, 1.0, 5.0, 0.0, 0.0, 0.0);
  const auto rep = validity_report(spec, cs);
  CHECK(close(rep.max_coupling_ratio, 5.0, 1e-9));
  CHECK(rep.verdict == Verdict::fail);
}

TEST_CASE("validity thresholds move the verdict") {
  const auto spec = dispersive_spec();
  const auto cs = dispersive_couplings();
  ValidityOptions opt;
  opt.pass_threshold = 0.01;  // stricter than the worst ratio ~0.1
  opt.marginal_threshold = 0.3;
  CHECK(validity_report(spec, cs, opt).verdict == Verdict::marginal);
  opt.marginal_threshold = 0.05;
  CHECK(validity_report(spec, cs, opt).verdict == Verdict::fail);
}

TEST_CASE("photon number scales the cavity admixture ratio") {
  const auto spec = dispersive_spec();
  const auto cs = dispersive_couplings();
  ValidityOptions opt;
  opt.n_bar = 4.0;
  const auto rep = validity_report(spec, cs, opt);
  CHECK(close(rep.max_coupling_ratio, 20.0 / std::sqrt(10001.0)));
  CHECK(close(rep.single->cavity, 20.0 / std::sqrt(10001.0)));
  CHECK(rep.verdict == Verdict::marginal);
}

TEST_CASE("retardation ratio matches the explicit amplitude estimates") {
  const auto spec = dispersive_spec();
  const auto cs = dispersive_couplings();
  const auto p = effective_params(cs, spec);
  const cplx alpha(1.0, 0.0), beta_a(0.5, 0.0);

  ValidityOptions opt;
  opt.subsystem_state = std::make_pair(alpha, beta_a);
  const auto rep = validity_report(spec, cs, opt);
  REQUIRE(rep.retardation_ratio.has_value());

  const double ad = adiabatic_amplitudes(cs, alpha, beta_a).norm();
  const double ret = retardation_correction(cs, p, alpha, beta_a).norm();
  CHECK(close(*rep.retardation_ratio, ret / ad));
  CHECK(*rep.retardation_ratio < 0.05);
  CHECK(*rep.retardation_ratio > 1e-3);
}

TEST_CASE("adiabatic amplitudes satisfy the frozen-subsystem balance") {
  std::mt19937 rng(211);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(3, 3);
  m << cplx(30, -1), cplx(0.4, -0.1), cplx(0.2, 0.05),
       cplx(0.4, -0.1), cplx(30, -1), cplx(-0.3, 0.02),
       cplx(0.2, 0.05), cplx(-0.3, 0.02), cplx(30, -1);
  Vec g(3), v(3);
  for (int j = 0; j < 3; ++j) {
    g(j) = cplx(u(rng), 0.0);
    v(j) = cplx(u(rng), u(rng));
  }
  const auto cs = make_couplings(30.0, 1.0, m, g, v, 0.2);
  const cplx alpha(0.3, -0.2), beta_a(-0.1, 0.4);
  const Vec beta = adiabatic_amplitudes(cs, alpha, beta_a);
  // M beta + G alpha + V beta_A = 0 by construction.
  const Vec residual = cs.m * beta + cs.g * alpha + cs.v * beta_a;
  CHECK(residual.norm() < 1e-12 * std::max(1.0, beta.norm()));
}
