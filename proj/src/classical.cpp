#include "cavelim/classical.hpp"

#include <cmath>
#include <limits>

#include "cavelim/cslinalg.hpp"

namespace cavelim {

namespace {

constexpr double kStepTol = 1e-10;

class LinearRk4 {
 public:
  explicit LinearRk4(Mat a) : a_(std::move(a)) {}

  Vec step(const Vec& y, double h) const {
    const Vec k1 = a_ * y;
    const Vec k2 = a_ * (y + (0.5 * h) * k1);
    const Vec k3 = a_ * (y + (0.5 * h) * k2);
    const Vec k4 = a_ * (y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  // Advance over `span` with step-doubling error control; `h` carries the
  // accepted sub-step across calls.
  Vec advance(Vec y, double span, double& h) const {
    double done = 0.0;
    while (done < span) {
      double hh = std::min(h, span - done);
      for (;;) {
        const Vec full = step(y, hh);
        const Vec half = step(step(y, 0.5 * hh), 0.5 * hh);
        const double denom =
            std::max({half.norm(), full.norm(), 1e-300});
        const double err = (full - half).norm() / denom;
        if (err <= kStepTol || hh <= span * 1e-12) {
          y = half;
          done += hh;
          if (err < 0.01 * kStepTol) h = 2.0 * hh;
          else h = hh;
          break;
        }
        hh *= 0.5;
        h = hh;
      }
    }
    return y;
  }

  double stability_step() const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a_.rows(); ++i)
      worst = std::max(worst, a_.row(i).cwiseAbs().sum());
    return worst > 0.0 ? 0.1 / worst : std::numeric_limits<double>::infinity();
  }

 private:
  Mat a_;
};

ClassicalTrajectory run(const LinearRk4& rk, Vec y, double t_end, double dt,
                        int n_ensemble) {
  if (!(t_end >= 0.0) || !(dt > 0.0))
    throw std::invalid_argument("integrate: need t_end >= 0 and dt > 0");
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
  ClassicalTrajectory traj;
  traj.times.reserve(n_steps + 1);
  traj.alpha.reserve(n_steps + 1);
  traj.beta_a.reserve(n_steps + 1);
  traj.beta.reserve(n_steps + 1);

  auto record = [&](double t, const Vec& state) {
    traj.times.push_back(t);
    traj.alpha.push_back(state(0));
    traj.beta_a.push_back(state(1));
    traj.beta.push_back(state.tail(n_ensemble));
  };

  double h = std::min(dt, rk.stability_step());
  record(0.0, y);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const double t0 = dt * static_cast<double>(k - 1);
    const double t1 = std::min(dt * static_cast<double>(k), t_end);
    y = rk.advance(std::move(y), t1 - t0, h);
    record(t1, y);
  }
  return traj;
}

Mat full_generator(const SystemSpec& spec, const CouplingSet& cs) {
  const int n = cs.size();
  Mat a = Mat::Zero(n + 2, n + 2);
  a(0, 0) = cplx(-spec.cavity.kappa, -spec.delta_c());
  a(0, 1) = -ii * cplx(cs.g_a, 0.0);
  a(1, 0) = a(0, 1);
  a(1, 1) = cplx(-spec.emitter_a.gamma, 0.0);
  for (int j = 0; j < n; ++j) {
    a(0, 2 + j) = -ii * cs.g(j);
    a(2 + j, 0) = -ii * cs.g(j);
    a(1, 2 + j) = -ii * cs.v(j);
    a(2 + j, 1) = -ii * cs.v(j);
    for (int l = 0; l < n; ++l) a(2 + j, 2 + l) = -ii * cs.m(j, l);
  }
  return a;
}

Mat effective_generator(const EffectiveParams& p) {
  Mat a(2, 2);
  const cplx coupling = -ii * cplx(p.g_a_eff, -p.mu);
  a(0, 0) = cplx(-p.kappa_eff, -p.delta_c_eff);
  a(0, 1) = coupling;
  a(1, 0) = coupling;
  a(1, 1) = cplx(-p.gamma_a_eff, -p.delta_a_eff);
  return a;
}

SteadyState steady_state_from_detunings(double delta_c, double delta_a,
                                        double g, double mu, double kappa,
                                        double gamma, double eta) {
  const cplx a(delta_c, -kappa);
  const cplx d(delta_a, -gamma);
  const cplx b(g, -mu);
  const cplx denom = b * b - a * d;
  const double scale = std::max({std::abs(a), std::abs(d), std::abs(b), 1e-30});
  if (std::abs(denom) < 1e-14 * scale * scale)
    throw ResonanceSingularError(
        "driven_steady_state: response matrix is singular at this laser "
        "frequency");
  return SteadyState{eta * d / denom, -eta * b / denom};
}

}  // namespace

ClassicalTrajectory integrate_full_classical(const SystemSpec& spec,
                                             const CouplingSet& cs,
                                             const ClassicalState& initial,
                                             double t_end, double dt) {
  const int n = cs.size();
  Vec y = Vec::Zero(n + 2);
  y(0) = initial.alpha;
  y(1) = initial.beta_a;
  if (initial.beta.size() != 0) {
    if (initial.beta.size() != n)
      throw std::invalid_argument(
          "integrate_full_classical: initial.beta size mismatch");
    y.tail(n) = initial.beta;
  }
  return run(LinearRk4(full_generator(spec, cs)), std::move(y), t_end, dt, n);
}

ClassicalTrajectory integrate_effective_classical(const EffectiveParams& p,
                                                  cplx alpha0, cplx beta_a0,
                                                  double t_end, double dt) {
  Vec y(2);
  y << alpha0, beta_a0;
  return run(LinearRk4(effective_generator(p)), std::move(y), t_end, dt, 0);
}

EffectiveParams eliminate_classical(const SystemSpec& spec,
                                    const CouplingSet& cs) {
  const EliminationForms f = elimination_forms(cs);
  // Insert beta = -M^-1 G alpha - M^-1 V beta_A into the alpha and beta_A
  // equations; the surviving complex coefficients carry the effective
  // parameters as real and imaginary parts.
  const cplx c_alpha_alpha = cplx(spec.delta_c(), -spec.cavity.kappa) - f.gg;
  const cplx c_cross = cplx(cs.g_a, 0.0) - f.gv;
  const cplx c_beta_beta = cplx(0.0, -spec.emitter_a.gamma) - f.vv;
  EffectiveParams p;
  p.delta_c_eff = c_alpha_alpha.real();
  p.kappa_eff = -c_alpha_alpha.imag();
  p.g_a_eff = c_cross.real();
  p.mu = -c_cross.imag();
  p.delta_a_eff = c_beta_beta.real();
  p.gamma_a_eff = -c_beta_beta.imag();
  p.omega_c_eff = spec.cavity.omega - f.gg.real();
  p.omega_a_eff = spec.emitter_a.omega - f.vv.real();
  return p;
}

SteadyState driven_steady_state(const EffectiveParams& p, const DriveSpec& d) {
  return steady_state_from_detunings(
      p.omega_c_eff - d.omega_l, p.omega_a_eff - d.omega_l, p.g_a_eff, p.mu,
      p.kappa_eff, p.gamma_a_eff, d.eta);
}

Spectrum transmission_spectrum(const EffectiveParams& p, double kappa_bare,
                               double eta, const std::vector<double>& grid,
                               SpectrumMode mode) {
  if (!(eta > 0.0) || !(kappa_bare >= 0.0))
    throw std::invalid_argument(
        "transmission_spectrum: need eta > 0 and kappa_bare >= 0");
  Spectrum s;
  s.omega_l = grid;
  s.t_c.reserve(grid.size());
  const double k2 = kappa_bare * kappa_bare;
  if (mode == SpectrumMode::exact) {
    for (const double w : grid) {
      const SteadyState ss = driven_steady_state(p, DriveSpec{eta, w});
      s.t_c.push_back(k2 * std::norm(ss.alpha / eta));
    }
  } else {
    const PolaritonAnalysis pol = polariton_analysis(p);
    for (const double w : grid) {
      const cplx amp =
          pol.z_plus / cplx(w - pol.omega_plus, pol.gamma_plus) +
          pol.z_minus / cplx(w - pol.omega_minus, pol.gamma_minus);
      s.t_c.push_back(k2 * std::norm(amp));
    }
  }
  return s;
}

Spectrum transmission_spectrum_exact_frame(const SystemSpec& spec,
                                           const CouplingSet& cs, double eta,
                                           const std::vector<double>& grid) {
  if (!(eta > 0.0))
    throw std::invalid_argument("transmission_spectrum: need eta > 0");
  Spectrum s;
  s.omega_l = grid;
  s.t_c.reserve(grid.size());
  const double k2 = spec.cavity.kappa * spec.cavity.kappa;
  const int n = cs.size();
  for (const double w : grid) {
    Mat m_shift = cs.m;
    const double shift = spec.emitter_a.omega - w;
    for (int j = 0; j < n; ++j) m_shift(j, j) += shift;
    const SymmetricSolver solver(m_shift);
    const Vec zg = solver.solve(cs.g);
    const Vec zv = solver.solve(cs.v);
    const cplx gg = (cs.g.transpose() * zg).value();
    const cplx gv = (cs.g.transpose() * zv).value();
    const cplx vv = (cs.v.transpose() * zv).value();
    const SteadyState ss = steady_state_from_detunings(
        (spec.cavity.omega - w) - gg.real(), (spec.emitter_a.omega - w) - vv.real(),
        cs.g_a - gv.real(), gv.imag(), spec.cavity.kappa + gg.imag(),
        spec.emitter_a.gamma + vv.imag(), eta);
    s.t_c.push_back(k2 * std::norm(ss.alpha / eta));
  }
  return s;
}

PolaritonAnalysis polariton_analysis(double g_eff, double mu,
                                     double kappa_eff, double gamma_a_eff,
                                     double omega0_eff) {
  const double half_sum = 0.5 * (kappa_eff + gamma_a_eff);
  const double half_diff = 0.5 * (kappa_eff - gamma_a_eff);

  auto roots = [&](double g) {
    const cplx coupling(g, -mu);
    const cplx disc = cplx(half_diff * half_diff, 0.0) - coupling * coupling;
    const cplx rad = std::sqrt(disc);  // principal branch, Re >= 0
    return std::pair<cplx, cplx>{cplx(-half_sum, 0.0) - rad,
                                 cplx(-half_sum, 0.0) + rad};
  };

  PolaritonAnalysis out;
  const auto [xi_p, xi_m] = roots(g_eff);
  out.xi_plus = xi_p;
  out.xi_minus = xi_m;
  out.gamma_plus = -xi_p.real();
  out.gamma_minus = -xi_m.real();
  out.omega0_eff = omega0_eff;
  out.omega_plus = omega0_eff - xi_p.imag();
  out.omega_minus = omega0_eff - xi_m.imag();
  // Residues of the cavity response: z_p = (xi_q + kappa)/(xi_q - xi_p)
  // with q the other mode; their sum telescopes to 1.  They diverge at an
  // exceptional point where the modes coalesce.
  out.z_plus = (xi_m + kappa_eff) / (xi_m - xi_p);
  out.z_minus = (xi_p + kappa_eff) / (xi_p - xi_m);
  out.gamma_plus_onset = half_sum + std::hypot(half_diff, mu);

  const double h = 1e-6 * std::max(1.0, std::abs(g_eff));
  const double slack = 1e-12 * std::max(1.0, out.gamma_plus);
  const double up = -roots(g_eff + h).first.real();
  out.gamma_plus_nonincreasing = up <= out.gamma_plus + slack;
  if (g_eff - h >= 0.0) {
    const double down = -roots(g_eff - h).first.real();
    out.gamma_plus_nonincreasing =
        out.gamma_plus_nonincreasing && out.gamma_plus <= down + slack;
  }
  return out;
}

PolaritonAnalysis polariton_analysis(const EffectiveParams& p) {
  const double scale = std::max(
      {1.0, std::abs(p.omega_a_eff), std::abs(p.omega_c_eff), p.kappa_eff});
  if (std::abs(p.omega_a_eff - p.omega_c_eff) > 1e-8 * scale)
    throw UnsupportedConfigurationError(
        "polariton_analysis: effective cavity and emitter frequencies must "
        "coincide (resonant subsystem)");
  return polariton_analysis(p.g_a_eff, p.mu, p.kappa_eff, p.gamma_a_eff,
                            0.5 * (p.omega_a_eff + p.omega_c_eff));
}

}  // namespace cavelim
