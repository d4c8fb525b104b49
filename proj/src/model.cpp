#include "cavelim/model.hpp"

#include <cmath>

#include "cavelim/dipole.hpp"

namespace cavelim {

namespace {

void append(std::vector<Diagnostic>& out, Diagnostic::Severity sev,
            std::string msg) {
  out.push_back(Diagnostic{sev, std::move(msg)});
}

}  // namespace

std::vector<Diagnostic> validate_spec(const SystemSpec& spec) {
  using S = Diagnostic::Severity;
  std::vector<Diagnostic> out;

  if (!(spec.cavity.kappa >= 0.0))
    append(out, S::error, "cavity.kappa must be >= 0");
  if (!(spec.emitter_a.gamma >= 0.0))
    append(out, S::error, "emitter_a.gamma must be >= 0");
  if (!(spec.ensemble_b.gamma >= 0.0))
    append(out, S::error, "ensemble_b.gamma must be >= 0");
  if (!(spec.cavity.g0_a > 0.0))
    append(out, S::error, "cavity.g0_A must be > 0");
  if (!(spec.cavity.g0_b > 0.0))
    append(out, S::error, "cavity.g0_B must be > 0");
  if (spec.ensemble_b.size() < 1)
    append(out, S::error, "ensemble_b must contain at least one emitter");

  const double axis_norm = spec.cavity.axis.norm();
  if (!(axis_norm > 0.0)) {
    append(out, S::error, "cavity.axis must be a nonzero vector");
  } else if (std::abs(axis_norm - 1.0) > 1e-9) {
    append(out, S::warning, "cavity.axis is not unit length; it will be "
                            "normalized");
  }

  const auto& pos = spec.ensemble_b.positions;
  for (std::size_t j = 0; j < pos.size(); ++j) {
    if ((pos[j] - spec.emitter_a.position).norm() == 0.0)
      append(out, S::error,
             "ensemble emitter " + std::to_string(j) +
                 " coincides with emitter A");
    for (std::size_t l = j + 1; l < pos.size(); ++l)
      if ((pos[j] - pos[l]).norm() == 0.0)
        append(out, S::error,
               "ensemble emitters " + std::to_string(j) + " and " +
                   std::to_string(l) + " coincide");
  }

  // A shared mode function ties the coupling ratio to the decay-rate ratio;
  // a mismatch is legal input but usually a modelling inconsistency.
  if (spec.cavity.g0_a > 0.0 && spec.cavity.g0_b > 0.0 &&
      spec.emitter_a.gamma > 0.0 && spec.ensemble_b.gamma > 0.0) {
    const double expected =
        std::sqrt(spec.emitter_a.gamma / spec.ensemble_b.gamma);
    const double actual = spec.cavity.g0_a / spec.cavity.g0_b;
    if (std::abs(actual / expected - 1.0) > 0.01)
      append(out, S::warning,
             "g0_A/g0_B = " + std::to_string(actual) +
                 " deviates more than 1% from sqrt(gamma_A/gamma_B) = " +
                 std::to_string(expected));
  }

  if (spec.delta_b() == 0.0 && spec.ensemble_b.gamma == 0.0)
    append(out, S::error,
           "ensemble is degenerate: delta_B and gamma_B are both zero, M "
           "is singular");

  return out;
}

CouplingSet build_couplings(const SystemSpec& spec) {
  for (const auto& d : validate_spec(spec))
    if (d.severity == Diagnostic::Severity::error)
      throw UnphysicalParametersError("build_couplings: " + d.message);

  const int n = spec.ensemble_b.size();
  const Vec3 axis = spec.cavity.axis.normalized();
  const double gamma_b = spec.ensemble_b.gamma;
  const double gamma_a = spec.emitter_a.gamma;
  const cplx diag(spec.delta_b(), -gamma_b);

  CouplingSet cs;
  cs.m = Mat::Zero(n, n);
  cs.g = Vec::Zero(n);
  cs.v = Vec::Zero(n);

  const auto& pos = spec.ensemble_b.positions;
  for (int j = 0; j < n; ++j) {
    cs.m(j, j) = diag;
    cs.g(j) = spec.cavity.g0_b *
              std::cos(wave_number * axis.dot(pos[static_cast<std::size_t>(j)]));
    const auto geo =
        pair_geometry(spec.emitter_a.position, pos[static_cast<std::size_t>(j)]);
    cs.v(j) = dipole_coupling(geo, gamma_a, gamma_b).v();
    for (int l = j + 1; l < n; ++l) {
      const auto geo_bb = pair_geometry(pos[static_cast<std::size_t>(j)],
                                        pos[static_cast<std::size_t>(l)]);
      const cplx vbb = dipole_coupling(geo_bb, gamma_b, gamma_b).v();
      cs.m(j, l) = vbb;
      cs.m(l, j) = vbb;
    }
  }
  cs.g_a = spec.cavity.g0_a *
           std::cos(wave_number * axis.dot(spec.emitter_a.position));
  return cs;
}

CouplingSet make_couplings(double delta_b, double gamma_b, Mat m, Vec g,
                           Vec v, double g_a) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n || g.size() != n || v.size() != n)
    throw std::invalid_argument("make_couplings: inconsistent sizes");
  const double scale = std::max(1.0, m.norm());
  if ((m - m.transpose()).norm() > 1e-12 * scale)
    throw std::invalid_argument("make_couplings: M must be symmetric");
  const cplx diag(delta_b, -gamma_b);
  for (Eigen::Index j = 0; j < n; ++j)
    if (std::abs(m(j, j) - diag) > 1e-12 * scale)
      throw std::invalid_argument(
          "make_couplings: diag(M) must equal delta_B - i*gamma_B");
  CouplingSet cs;
  cs.m = std::move(m);
  cs.g = std::move(g);
  cs.v = std::move(v);
  cs.g_a = g_a;
  return cs;
}

CouplingSet make_couplings_single(double delta_b, double gamma_b,
                                  double omega_ab, double gamma_ab,
                                  double g_b, double g_a) {
  Mat m(1, 1);
  m(0, 0) = cplx(delta_b, -gamma_b);
  Vec g(1), v(1);
  g(0) = g_b;
  v(0) = cplx(omega_ab, -gamma_ab);
  return make_couplings(delta_b, gamma_b, std::move(m), std::move(g),
                        std::move(v), g_a);
}

}  // namespace cavelim
