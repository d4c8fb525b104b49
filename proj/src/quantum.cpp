#include "cavelim/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace cavelim {

namespace {

void check_hilbert(const HilbertSpec& h) {
  if (h.n_max < 1)
    throw std::invalid_argument("HilbertSpec: n_max must be >= 1");
  if (h.n_spins_b < 0)
    throw std::invalid_argument("HilbertSpec: n_spins_b must be >= 0");
  if (h.dim() > h.cap)
    throw DimensionCapError("HilbertSpec: dimension " +
                            std::to_string(h.dim()) + " exceeds cap " +
                            std::to_string(h.cap));
}

Mat fock_lowering(int n_max) {
  Mat a = Mat::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n)
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Mat spin_lowering() {
  Mat s = Mat::Zero(2, 2);
  s(0, 1) = 1.0;  // basis order |g>, |e>
  return s;
}

Mat identity(int d) { return Mat::Identity(d, d); }

// Assemble the shared parts of a model once the Hamiltonian, channel
// lowering operators, and channel rate matrix are known.
LindbladModel finish_model(HilbertSpec h, Mat hamiltonian,
                           std::vector<Mat> channels,
                           Eigen::MatrixXd rates) {
  LindbladModel model;
  model.hilbert = h;
  model.hamiltonian = std::move(hamiltonian);
  model.channel_lowering = std::move(channels);
  model.rate_matrix = std::move(rates);

  const double h_scale = std::max(1.0, model.hamiltonian.norm());
  if ((model.hamiltonian - model.hamiltonian.adjoint()).norm() >
      1e-12 * h_scale)
    throw Error("LindbladModel: Hamiltonian is not Hermitian");

  const Eigen::Index nc = model.rate_matrix.rows();
  const double r_scale = std::max(1.0, model.rate_matrix.norm());
  if ((model.rate_matrix - model.rate_matrix.transpose()).norm() >
      1e-12 * r_scale)
    throw Error("LindbladModel: rate matrix is not symmetric");

  for (Eigen::Index x = 0; x < nc; ++x)
    for (Eigen::Index y = 0; y < nc; ++y)
      if (model.rate_matrix(x, y) != 0.0)
        model.dissipator_terms.push_back(
            DissipatorTerm{model.rate_matrix(x, y), static_cast<int>(x),
                           static_cast<int>(y)});

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.rate_matrix);
  const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-10 * top)
    throw UnphysicalParametersError(
        "LindbladModel: channel rate matrix is not positive semidefinite "
        "(min eigenvalue " +
        std::to_string(es.eigenvalues().minCoeff()) + ")");

  const int d = h.dim();
  Mat damping = Mat::Zero(d, d);
  for (Eigen::Index k = 0; k < nc; ++k) {
    const double rate = std::max(0.0, es.eigenvalues()(k));
    if (rate <= 1e-14 * top) continue;
    Mat op = Mat::Zero(d, d);
    for (Eigen::Index x = 0; x < nc; ++x)
      op += es.eigenvectors()(x, k) * model.channel_lowering[static_cast<std::size_t>(x)];
    damping += rate * (op.adjoint() * op);
    model.jumps.push_back(JumpOperator{rate, std::move(op)});
  }
  model.no_jump = model.hamiltonian - ii * damping;
  return model;
}

Mat expand_b(const HilbertSpec& h, const Mat& op, int j) {
  // op acts on ensemble spin j
  const int before = 1 << j;
  const int after = 1 << (h.n_spins_b - 1 - j);
  return kron(identity(h.fock_dim() * 2),
              kron(identity(before), kron(op, identity(after))));
}

}  // namespace

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat op_annihilation(const HilbertSpec& h) {
  check_hilbert(h);
  return kron(fock_lowering(h.n_max), identity(h.spin_dim()));
}

Mat op_sigma_minus_a(const HilbertSpec& h) {
  check_hilbert(h);
  return kron(identity(h.fock_dim()),
              kron(spin_lowering(), identity(1 << h.n_spins_b)));
}

Mat op_sigma_minus_b(const HilbertSpec& h, int j) {
  check_hilbert(h);
  if (j < 0 || j >= h.n_spins_b)
    throw std::invalid_argument("op_sigma_minus_b: index out of range");
  return expand_b(h, spin_lowering(), j);
}

Mat apply_liouvillian(const LindbladModel& model, const Mat& rho) {
  // -i (H_nj rho - rho H_nj^dag) folds the commutator and both
  // anticommutator halves into two products.
  Mat out = -ii * (model.no_jump * rho - rho * model.no_jump.adjoint());
  for (const auto& jump : model.jumps) {
    const Mat jr = jump.op * rho;
    out.noalias() += (2.0 * jump.rate) * (jr * jump.op.adjoint());
  }
  return out;
}

double suggested_dt(const LindbladModel& model) {
  double scale = 0.0;
  for (Eigen::Index i = 0; i < model.no_jump.rows(); ++i)
    scale = std::max(scale, model.no_jump.row(i).cwiseAbs().sum());
  double jump_scale = 0.0;
  for (const auto& jump : model.jumps) {
    double row = 0.0;
    for (Eigen::Index i = 0; i < jump.op.rows(); ++i)
      row = std::max(row, jump.op.row(i).cwiseAbs().sum());
    jump_scale += jump.rate * row * row;
  }
  const double total = 2.0 * scale + 2.0 * jump_scale;
  return total > 0.0 ? 0.1 / total : 1.0;
}

LindbladModel build_full_model(const SystemSpec& spec, const CouplingSet& cs,
                               const HilbertSpec& hilbert,
                               std::optional<DriveSpec> drive) {
  check_hilbert(hilbert);
  const int n = cs.size();
  if (hilbert.n_spins_b != n)
    throw std::invalid_argument(
        "build_full_model: hilbert.n_spins_b must match the ensemble size");

  const double delta_c =
      drive ? drive->detuning_c(spec) : spec.delta_c();
  const double delta_a = drive ? drive->detuning_a(spec) : 0.0;
  const double delta_b = drive ? drive->detuning_b(spec) : spec.delta_b();

  const Mat a = op_annihilation(hilbert);
  const Mat sig_a = op_sigma_minus_a(hilbert);
  std::vector<Mat> sig_b;
  sig_b.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) sig_b.push_back(op_sigma_minus_b(hilbert, j));

  Mat h = delta_c * (a.adjoint() * a) + delta_a * (sig_a.adjoint() * sig_a);
  Mat collective = cplx(cs.g_a, 0.0) * sig_a;
  for (int j = 0; j < n; ++j) {
    h += delta_b * (sig_b[static_cast<std::size_t>(j)].adjoint() *
                    sig_b[static_cast<std::size_t>(j)]);
    collective += cs.g(j) * sig_b[static_cast<std::size_t>(j)];
  }
  h += a.adjoint() * collective + collective.adjoint() * a;
  for (int j = 0; j < n; ++j) {
    const double omega_ja = cs.v(j).real();
    h += omega_ja * (sig_b[static_cast<std::size_t>(j)].adjoint() * sig_a +
                     sig_a.adjoint() * sig_b[static_cast<std::size_t>(j)]);
    for (int l = j + 1; l < n; ++l) {
      const double omega_jl = cs.m(j, l).real();
      h += omega_jl * (sig_b[static_cast<std::size_t>(j)].adjoint() *
                           sig_b[static_cast<std::size_t>(l)] +
                       sig_b[static_cast<std::size_t>(l)].adjoint() *
                           sig_b[static_cast<std::size_t>(j)]);
    }
  }
  if (drive && drive->eta != 0.0) h += drive->eta * (a + a.adjoint());

  std::vector<Mat> channels;
  channels.push_back(a);
  channels.push_back(sig_a);
  for (auto& s : sig_b) channels.push_back(std::move(s));

  Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(n + 2, n + 2);
  rates(0, 0) = spec.cavity.kappa;
  rates(1, 1) = spec.emitter_a.gamma;
  for (int j = 0; j < n; ++j) {
    const double gamma_ja = -cs.v(j).imag();
    rates(1, 2 + j) = gamma_ja;
    rates(2 + j, 1) = gamma_ja;
    rates(2 + j, 2 + j) = spec.ensemble_b.gamma;
    for (int l = j + 1; l < n; ++l) {
      const double gamma_jl = -cs.m(j, l).imag();
      rates(2 + j, 2 + l) = gamma_jl;
      rates(2 + l, 2 + j) = gamma_jl;
    }
  }

  return finish_model(hilbert, std::move(h), std::move(channels),
                      std::move(rates));
}

LindbladModel build_effective_model(const EffectiveParams& p, int n_max,
                                    std::optional<DriveSpec> drive, int cap) {
  HilbertSpec hilbert{n_max, 0, cap};
  check_hilbert(hilbert);

  const double delta_c =
      drive ? p.omega_c_eff - drive->omega_l : p.delta_c_eff;
  const double delta_a =
      drive ? p.omega_a_eff - drive->omega_l : p.delta_a_eff;

  const Mat a = op_annihilation(hilbert);
  const Mat sig = op_sigma_minus_a(hilbert);
  Mat h = delta_c * (a.adjoint() * a) + delta_a * (sig.adjoint() * sig) +
          p.g_a_eff * (a.adjoint() * sig + sig.adjoint() * a);
  if (drive && drive->eta != 0.0) h += drive->eta * (a + a.adjoint());

  Eigen::MatrixXd rates(2, 2);
  rates << p.kappa_eff, p.mu, p.mu, p.gamma_a_eff;

  std::vector<Mat> channels{a, sig};
  return finish_model(hilbert, std::move(h), std::move(channels),
                      std::move(rates));
}

void check_density_matrix(const Mat& rho, double herm_tol, double trace_tol) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix must be square");
  const double scale = std::max(1.0, rho.norm());
  if ((rho - rho.adjoint()).norm() > herm_tol * scale)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0, 0.0)) > trace_tol)
    throw std::invalid_argument("density matrix trace differs from 1");
}

Mat vacuum_state(const HilbertSpec& h) {
  check_hilbert(h);
  Mat rho = Mat::Zero(h.dim(), h.dim());
  rho(0, 0) = 1.0;
  return rho;
}

Mat a_excited_state(const HilbertSpec& h) {
  check_hilbert(h);
  Vec psi = Vec::Zero(h.dim());
  psi(1 << h.n_spins_b) = 1.0;  // n = 0, A excited, ensemble ground
  return psi * psi.adjoint();
}

Mat a_superposition_state(const HilbertSpec& h) {
  check_hilbert(h);
  Vec psi = Vec::Zero(h.dim());
  const double r = 1.0 / std::sqrt(2.0);
  psi(0) = r;
  psi(1 << h.n_spins_b) = r;
  return psi * psi.adjoint();
}

Mat coherent_state(const HilbertSpec& h, cplx amplitude) {
  check_hilbert(h);
  Vec fock = Vec::Zero(h.fock_dim());
  cplx term = 1.0;
  fock(0) = term;
  for (int n = 1; n <= h.n_max; ++n) {
    term *= amplitude / std::sqrt(static_cast<double>(n));
    fock(n) = term;
  }
  fock /= fock.norm();  // renormalize the truncated ladder
  Vec psi = Vec::Zero(h.dim());
  for (int n = 0; n <= h.n_max; ++n) psi(n * h.spin_dim()) = fock(n);
  return psi * psi.adjoint();
}

namespace {

Mat rk4_rho_step(const LindbladModel& model, const Mat& rho, double dt) {
  const Mat k1 = apply_liouvillian(model, rho);
  const Mat k2 = apply_liouvillian(model, rho + (0.5 * dt) * k1);
  const Mat k3 = apply_liouvillian(model, rho + (0.5 * dt) * k2);
  const Mat k4 = apply_liouvillian(model, rho + dt * k3);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

QuantumTrajectory evolve(const LindbladModel& model, const Mat& rho0,
                         const EvolveOptions& options) {
  if (rho0.rows() != model.hilbert.dim() || rho0.cols() != model.hilbert.dim())
    throw std::invalid_argument("evolve: state dimension mismatch");
  check_density_matrix(rho0);
  if (!(options.t_end >= 0.0))
    throw std::invalid_argument("evolve: t_end must be >= 0");
  const double dt = options.dt > 0.0 ? options.dt : suggested_dt(model);
  const int n_samples = std::max(2, options.n_samples);

  const auto n_steps = static_cast<long>(
      std::max(1.0, std::ceil(options.t_end / dt)));
  const double step = options.t_end / static_cast<double>(n_steps);

  const Mat a = op_annihilation(model.hilbert);
  const Mat sig_a = op_sigma_minus_a(model.hilbert);
  const Mat n_phot = a.adjoint() * a;
  const Mat n_a = sig_a.adjoint() * sig_a;
  Mat n_b = Mat::Zero(model.hilbert.dim(), model.hilbert.dim());
  for (int j = 0; j < model.hilbert.n_spins_b; ++j) {
    const Mat s = op_sigma_minus_b(model.hilbert, j);
    n_b += s.adjoint() * s;
  }

  QuantumTrajectory traj;
  auto record = [&](double t, const Mat& rho) {
    traj.times.push_back(t);
    traj.a_amp.push_back((a * rho).trace());
    traj.sigma_a_amp.push_back((sig_a * rho).trace());
    traj.photon_population.push_back((n_phot * rho).trace().real());
    traj.a_population.push_back((n_a * rho).trace().real());
    traj.b_population.push_back(model.hilbert.n_spins_b > 0
                                    ? (n_b * rho).trace().real()
                                    : 0.0);
    const double tr = rho.trace().real();
    traj.trace.push_back(tr);
    const double drift = std::abs(rho.trace() - cplx(1.0, 0.0));
    traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
    const double herm =
        (rho - rho.adjoint()).norm() / std::max(1.0, rho.norm());
    traj.max_hermiticity_error = std::max(traj.max_hermiticity_error, herm);
    if (options.store_states) traj.states.push_back(rho);
    if (drift > options.trace_drift_tol)
      throw InvariantBreachError(
          "evolve: trace drifted by " + std::to_string(drift) + " at t = " +
          std::to_string(t) + "; reduce dt");
    if (herm > 1e-8)
      throw InvariantBreachError("evolve: state lost hermiticity at t = " +
                                 std::to_string(t));
  };

  // Sample on (close to) an even grid while stepping at fixed dt.
  std::vector<long> sample_at(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s)
    sample_at[static_cast<std::size_t>(s)] = static_cast<long>(
        std::llround(static_cast<double>(n_steps) * s / (n_samples - 1)));

  Mat rho = rho0;
  std::size_t next_sample = 0;
  for (long k = 0; k <= n_steps; ++k) {
    if (next_sample < sample_at.size() && sample_at[next_sample] == k) {
      record(step * static_cast<double>(k), rho);
      while (next_sample < sample_at.size() && sample_at[next_sample] == k)
        ++next_sample;
    }
    if (k < n_steps) rho = rk4_rho_step(model, rho, step);
  }
  return traj;
}

Mat partial_trace_b(const Mat& rho, const HilbertSpec& h) {
  if (rho.rows() != h.dim() || rho.cols() != h.dim())
    throw std::invalid_argument("partial_trace_b: dimension mismatch");
  const int db = 1 << h.n_spins_b;
  const int ds = h.fock_dim() * 2;
  Mat out = Mat::Zero(ds, ds);
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < ds; ++j)
      for (int b = 0; b < db; ++b) out(i, j) += rho(i * db + b, j * db + b);
  return out;
}

double trace_distance(const Mat& rho1, const Mat& rho2) {
  const Mat diff = rho1 - rho2;
  const Mat herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

SteadyStateResult quantum_steady_state(const LindbladModel& model, double dt,
                                       double residual_tol) {
  double min_rate = std::numeric_limits<double>::infinity();
  for (const auto& jump : model.jumps)
    if (jump.rate > 0.0) min_rate = std::min(min_rate, jump.rate);
  if (!std::isfinite(min_rate))
    throw UnsupportedConfigurationError(
        "quantum_steady_state: model has no dissipation, no unique steady "
        "state");
  const double h = dt > 0.0 ? dt : suggested_dt(model);
  double horizon = 20.0 / min_rate;

  Mat rho = vacuum_state(model.hilbert);
  double t = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  for (int rounds = 0; rounds < 4; ++rounds) {
    const auto n_steps =
        static_cast<long>(std::ceil((horizon - t) / h));
    for (long k = 0; k < n_steps; ++k) rho = rk4_rho_step(model, rho, h);
    t = horizon;
    residual = apply_liouvillian(model, rho).norm();
    if (residual < residual_tol) return SteadyStateResult{rho, residual, t};
    horizon *= 2.0;
  }
  throw Error("quantum_steady_state: residual " + std::to_string(residual) +
              " did not reach " + std::to_string(residual_tol));
}

ComparisonReport compare_full_vs_effective(const SystemSpec& spec,
                                           const CouplingSet& cs,
                                           const HilbertSpec& hilbert,
                                           const ComparisonProtocol& protocol) {
  const auto report = validity_report(spec, cs);
  double worst =
      std::max({report.max_coupling_ratio, report.cavity_scale_ratio,
                report.emitter_scale_ratio, report.coupling_scale_ratio});
  if (protocol.require_valid && report.verdict != Verdict::pass)
    throw UnsupportedConfigurationError(
        "compare_full_vs_effective: elimination validity verdict is not "
        "pass; set require_valid = false to force the comparison");

  Mat rho0;
  switch (protocol.initial) {
    case InitialStateKind::vacuum: rho0 = vacuum_state(hilbert); break;
    case InitialStateKind::a_excited: rho0 = a_excited_state(hilbert); break;
    case InitialStateKind::a_superposition:
      rho0 = a_superposition_state(hilbert);
      break;
    case InitialStateKind::coherent:
      rho0 = coherent_state(hilbert, protocol.coherent_amplitude);
      break;
  }

  const LindbladModel full = build_full_model(spec, cs, hilbert);
  const EffectiveParams p = effective_params(cs, spec);
  const LindbladModel eff = build_effective_model(p, hilbert.n_max);

  EvolveOptions opts;
  opts.t_end = protocol.t_end;
  opts.dt = protocol.dt > 0.0
                ? protocol.dt
                : std::min(suggested_dt(full), suggested_dt(eff));
  opts.n_samples = protocol.n_samples;
  opts.store_states = true;

  const QuantumTrajectory full_traj = evolve(full, rho0, opts);
  const QuantumTrajectory eff_traj =
      evolve(eff, partial_trace_b(rho0, hilbert), opts);

  ComparisonReport out;
  out.validity_verdict = report.verdict;
  out.validity_max_ratio = worst;
  for (std::size_t k = 0; k < full_traj.times.size(); ++k) {
    const Mat reduced = partial_trace_b(full_traj.states[k], hilbert);
    out.max_trace_distance = std::max(
        out.max_trace_distance, trace_distance(reduced, eff_traj.states[k]));
    out.max_a_discrepancy =
        std::max(out.max_a_discrepancy,
                 std::abs(full_traj.a_amp[k] - eff_traj.a_amp[k]));
    out.max_sigma_discrepancy =
        std::max(out.max_sigma_discrepancy,
                 std::abs(full_traj.sigma_a_amp[k] - eff_traj.sigma_a_amp[k]));
    out.max_photon_discrepancy = std::max(
        out.max_photon_discrepancy, std::abs(full_traj.photon_population[k] -
                                             eff_traj.photon_population[k]));
    out.max_a_population_discrepancy =
        std::max(out.max_a_population_discrepancy,
                 std::abs(full_traj.a_population[k] - eff_traj.a_population[k]));
    out.peak_a = std::max(out.peak_a, std::abs(full_traj.a_amp[k]));
    out.peak_sigma = std::max(out.peak_sigma, std::abs(full_traj.sigma_a_amp[k]));
    out.peak_photon = std::max(out.peak_photon, full_traj.photon_population[k]);
    out.peak_a_population =
        std::max(out.peak_a_population, full_traj.a_population[k]);
  }
  return out;
}

}  // namespace cavelim
