#ifndef CAVELIM_QUANTUM_HPP
#define CAVELIM_QUANTUM_HPP

#include <optional>
#include <vector>

#include "cavelim/classical.hpp"
#include "cavelim/elimination.hpp"
#include "cavelim/model.hpp"

namespace cavelim {

// Truncated space: photon Fock ladder (0..n_max) tensor emitter A tensor
// the ensemble spins, ordered photon (x) A (x) B_1 ... B_N.
struct HilbertSpec {
  int n_max = 1;
  int n_spins_b = 0;
  int cap = 256;
  int fock_dim() const { return n_max + 1; }
  int spin_dim() const { return 1 << (n_spins_b + 1); }
  int dim() const { return fock_dim() * spin_dim(); }
};

Mat kron(const Mat& a, const Mat& b);
Mat op_annihilation(const HilbertSpec& h);
Mat op_sigma_minus_a(const HilbertSpec& h);
Mat op_sigma_minus_b(const HilbertSpec& h, int j);

// One dissipator contribution -rate * D(X, Y) with
// D(x,y)rho = [x, y rho] + [rho x, y]; X and Y are the raising/lowering
// operators of the referenced channels.
struct DissipatorTerm {
  double rate = 0.0;
  int raise_channel = 0;
  int lower_channel = 0;
};

struct JumpOperator {
  double rate = 0.0;
  Mat op;
};

// Hamiltonian plus dissipation in two equivalent representations: the
// defining channel rate matrix (Hermitian PSD) and its eigendecomposition
// into statistically independent jump operators, which the integrator
// uses.  Full and effective models share this container.
struct LindbladModel {
  HilbertSpec hilbert;
  Mat hamiltonian;
  Eigen::MatrixXd rate_matrix;        // channel space
  std::vector<Mat> channel_lowering;  // lowering operator per channel
  std::vector<DissipatorTerm> dissipator_terms;
  std::vector<JumpOperator> jumps;    // diagonalized form
  Mat no_jump;                        // H - i sum_k r_k Jk^dag Jk
};

Mat apply_liouvillian(const LindbladModel& model, const Mat& rho);

// Conservative step-size heuristic for fixed-step RK4 on this model.
double suggested_dt(const LindbladModel& model);

// Undriven models live in the frame rotating at omega_A; passing a drive
// switches to the laser frame (all detunings relative to omega_L) and adds
// eta (a + a^dag).
LindbladModel build_full_model(const SystemSpec& spec,
                               const CouplingSet& couplings,
                               const HilbertSpec& hilbert,
                               std::optional<DriveSpec> drive = {});

LindbladModel build_effective_model(const EffectiveParams& p, int n_max,
                                    std::optional<DriveSpec> drive = {},
                                    int cap = 256);

void check_density_matrix(const Mat& rho, double herm_tol = 1e-10,
                          double trace_tol = 1e-8);

Mat vacuum_state(const HilbertSpec& h);
Mat a_excited_state(const HilbertSpec& h);
// Emitter A in (|g> + |e>)/sqrt(2): carries coherence, so first-moment
// amplitudes are nonzero and comparable against the classical equations.
Mat a_superposition_state(const HilbertSpec& h);
Mat coherent_state(const HilbertSpec& h, cplx amplitude);

struct EvolveOptions {
  double t_end = 1.0;
  double dt = 0.0;  // 0 -> suggested_dt(model)
  int n_samples = 201;
  bool store_states = false;
  double trace_drift_tol = 1e-8;
};

struct QuantumTrajectory {
  std::vector<double> times;
  std::vector<cplx> a_amp;        // <a>
  std::vector<cplx> sigma_a_amp;  // <sigma_A^->
  std::vector<double> photon_population;
  std::vector<double> a_population;
  std::vector<double> b_population;  // sum over ensemble spins
  std::vector<double> trace;
  std::vector<Mat> states;  // filled when store_states
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
};

QuantumTrajectory evolve(const LindbladModel& model, const Mat& rho0,
                         const EvolveOptions& options);

Mat partial_trace_b(const Mat& rho, const HilbertSpec& h);

double trace_distance(const Mat& rho1, const Mat& rho2);

struct SteadyStateResult {
  Mat rho;
  double residual = 0.0;  // ||L(rho)||_F at the returned state
  double t = 0.0;
};

// Long-time integration until t = 20 / (slowest decay rate), extended if
// the generator residual has not fallen below `residual_tol`.
SteadyStateResult quantum_steady_state(const LindbladModel& model,
                                       double dt = 0.0,
                                       double residual_tol = 1e-9);

enum class InitialStateKind { vacuum, a_excited, a_superposition, coherent };

struct ComparisonProtocol {
  InitialStateKind initial = InitialStateKind::a_excited;
  cplx coherent_amplitude{0.0, 0.0};
  double t_end = 20.0;
  double dt = 0.0;
  int n_samples = 201;
  bool require_valid = true;  // demand a passing validity verdict
};

struct ComparisonReport {
  double max_trace_distance = 0.0;
  double max_a_discrepancy = 0.0;
  double max_sigma_discrepancy = 0.0;
  double max_photon_discrepancy = 0.0;
  double max_a_population_discrepancy = 0.0;
  double peak_a = 0.0;  // peak |<a>| of the full run, for normalization
  double peak_sigma = 0.0;
  double peak_photon = 0.0;
  double peak_a_population = 0.0;
  Verdict validity_verdict = Verdict::fail;
  double validity_max_ratio = 0.0;
};

// Evolves the full model, traces out the ensemble, and evolves the
// effective model from the same reduced initial state.
ComparisonReport compare_full_vs_effective(const SystemSpec& spec,
                                           const CouplingSet& couplings,
                                           const HilbertSpec& hilbert,
                                           const ComparisonProtocol& protocol);

}  // namespace cavelim

#endif
