#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "cavelim/classical.hpp"
#include "cavelim/common.hpp"
#include "cavelim/config.hpp"
#include "cavelim/dipole.hpp"
#include "cavelim/elimination.hpp"
#include "cavelim/model.hpp"
#include "cavelim/quantum.hpp"

namespace py = pybind11;
using namespace cavelim;

namespace {

std::string severity_name(Diagnostic::Severity s) {
  return s == Diagnostic::Severity::error ? "error" : "warning";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::marginal: return "marginal";
    default: return "fail";
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Adiabatic elimination of a fast emitter ensemble coupled to a "
      "cavity and a retained emitter: effective parameters, validity "
      "diagnostics, classical and Lindblad dynamics, spectra.";
  m.attr("__version__") = CAVELIM_VERSION;
  m.attr("pi") = pi;
  m.attr("wave_number") = wave_number;
  m.attr("magic_angle") = magic_angle;

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  // ---- model ----
  py::class_<EmitterA>(m, "EmitterA")
      .def(py::init<>())
      .def_readwrite("omega", &EmitterA::omega)
      .def_readwrite("gamma", &EmitterA::gamma)
      .def_readwrite("position", &EmitterA::position);

  py::class_<EnsembleB>(m, "EnsembleB")
      .def(py::init<>())
      .def_readwrite("omega", &EnsembleB::omega)
      .def_readwrite("gamma", &EnsembleB::gamma)
      .def_readwrite("positions", &EnsembleB::positions)
      .def("__len__", &EnsembleB::size);

  py::class_<Cavity>(m, "Cavity")
      .def(py::init<>())
      .def_readwrite("omega", &Cavity::omega)
      .def_readwrite("kappa", &Cavity::kappa)
      .def_readwrite("g0_a", &Cavity::g0_a)
      .def_readwrite("g0_b", &Cavity::g0_b)
      .def_readwrite("axis", &Cavity::axis);

  py::class_<SystemSpec>(m, "SystemSpec")
      .def(py::init<>())
      .def_readwrite("emitter_a", &SystemSpec::emitter_a)
      .def_readwrite("ensemble_b", &SystemSpec::ensemble_b)
      .def_readwrite("cavity", &SystemSpec::cavity)
      .def("frame_frequency", &SystemSpec::frame_frequency)
      .def("delta_c", &SystemSpec::delta_c)
      .def("delta_b", &SystemSpec::delta_b);

  py::class_<Diagnostic>(m, "Diagnostic")
      .def_property_readonly(
          "severity",
          [](const Diagnostic& d) { return severity_name(d.severity); })
      .def_readonly("message", &Diagnostic::message)
      .def("__repr__", [](const Diagnostic& d) {
        return "Diagnostic(" + severity_name(d.severity) + ": " + d.message +
               ")";
      });
  m.def("validate_spec", &validate_spec, py::arg("spec"));

  py::class_<CouplingSet>(m, "CouplingSet")
      .def_readonly("m", &CouplingSet::m)
      .def_readonly("g", &CouplingSet::g)
      .def_readonly("v", &CouplingSet::v)
      .def_readonly("g_a", &CouplingSet::g_a)
      .def("omega_ab", &CouplingSet::omega_ab)
      .def("gamma_ab", &CouplingSet::gamma_ab)
      .def("__len__", &CouplingSet::size);
  m.def("build_couplings", &build_couplings, py::arg("spec"));
  m.def("make_couplings", &make_couplings, py::arg("delta_b"),
        py::arg("gamma_b"), py::arg("m"), py::arg("g"), py::arg("v"),
        py::arg("g_a"));
  m.def("make_couplings_single", &make_couplings_single, py::arg("delta_b"),
        py::arg("gamma_b"), py::arg("omega_ab"), py::arg("gamma_ab"),
        py::arg("g_b"), py::arg("g_a"));

  // ---- config ----
  m.def("load_system_config", &load_system_config, py::arg("path"));
  m.def(
      "parse_system_config",
      [](const std::string& text, const std::string& name) {
        std::istringstream in(text);
        return parse_system_config(in, name);
      },
      py::arg("text"), py::arg("name") = "<string>");

  // ---- dipole ----
  py::class_<PairGeometry>(m, "PairGeometry")
      .def(py::init<double, double>(), py::arg("xi") = 0.0,
           py::arg("theta") = 0.0)
      .def_readwrite("xi", &PairGeometry::xi)
      .def_readwrite("theta", &PairGeometry::theta);
  m.def("pair_geometry", &pair_geometry, py::arg("r_a"), py::arg("r_b"));
  m.def("coupling_g", &coupling_g, py::arg("xi"), py::arg("theta"));
  m.def("coupling_f", &coupling_f, py::arg("xi"), py::arg("theta"));

  py::class_<DipoleCoupling>(m, "DipoleCoupling")
      .def_readonly("omega", &DipoleCoupling::omega)
      .def_readonly("gamma", &DipoleCoupling::gamma)
      .def_readonly("g", &DipoleCoupling::g)
      .def_readonly("f", &DipoleCoupling::f)
      .def("v", &DipoleCoupling::v);
  m.def("dipole_coupling", &dipole_coupling, py::arg("geometry"),
        py::arg("gamma_a"), py::arg("gamma_b"));

  // ---- elimination ----
  py::class_<EffectiveParams>(m, "EffectiveParams")
      .def(py::init<>())
      .def_readwrite("delta_c_eff", &EffectiveParams::delta_c_eff)
      .def_readwrite("delta_a_eff", &EffectiveParams::delta_a_eff)
      .def_readwrite("g_a_eff", &EffectiveParams::g_a_eff)
      .def_readwrite("kappa_eff", &EffectiveParams::kappa_eff)
      .def_readwrite("gamma_a_eff", &EffectiveParams::gamma_a_eff)
      .def_readwrite("mu", &EffectiveParams::mu)
      .def_readwrite("omega_c_eff", &EffectiveParams::omega_c_eff)
      .def_readwrite("omega_a_eff", &EffectiveParams::omega_a_eff)
      .def("__repr__", [](const EffectiveParams& p) {
        std::ostringstream out;
        out << "EffectiveParams(g_a_eff=" << p.g_a_eff << ", mu=" << p.mu
            << ", kappa_eff=" << p.kappa_eff
            << ", gamma_a_eff=" << p.gamma_a_eff
            << ", delta_c_eff=" << p.delta_c_eff
            << ", delta_a_eff=" << p.delta_a_eff << ")";
        return out.str();
      });
  m.def("effective_params", &effective_params, py::arg("couplings"),
        py::arg("spec"));
  m.def("effective_params_single", &effective_params_single,
        py::arg("delta_b"), py::arg("gamma_b"), py::arg("omega_ab"),
        py::arg("gamma_ab"), py::arg("g_a"), py::arg("g_b"),
        py::arg("gamma_a"), py::arg("kappa"), py::arg("delta_c"),
        py::arg("omega_a") = 0.0);

  py::class_<CouplingModification>(m, "CouplingModification")
      .def_readonly("delta_g_a", &CouplingModification::delta_g_a)
      .def_readonly("coherent", &CouplingModification::coherent)
      .def_readonly("dissipative", &CouplingModification::dissipative);
  m.def("coupling_modification", &coupling_modification, py::arg("spec"),
        py::arg("couplings"));

  py::class_<LinewidthModification>(m, "LinewidthModification")
      .def_readonly("delta_kappa", &LinewidthModification::delta_kappa)
      .def_readonly("delta_gamma_a", &LinewidthModification::delta_gamma_a)
      .def_readonly("broadening", &LinewidthModification::broadening)
      .def_readonly("narrowing", &LinewidthModification::narrowing);
  m.def("linewidth_modification", &linewidth_modification, py::arg("spec"),
        py::arg("couplings"));

  py::class_<DissipatorModes>(m, "DissipatorModes")
      .def_readonly("gamma_plus", &DissipatorModes::gamma_plus)
      .def_readonly("gamma_minus", &DissipatorModes::gamma_minus)
      .def_readonly("alpha", &DissipatorModes::alpha)
      .def_readonly("c", &DissipatorModes::c)
      .def_readonly("s", &DissipatorModes::s);
  m.def("diagonalize_dissipator", &diagonalize_dissipator, py::arg("params"));

  py::enum_<Verdict>(m, "Verdict")
      .value("pass_", Verdict::pass)
      .value("marginal", Verdict::marginal)
      .value("fail", Verdict::fail);

  py::class_<ValidityOptions>(m, "ValidityOptions")
      .def(py::init<>())
      .def_readwrite("n_bar", &ValidityOptions::n_bar)
      .def_readwrite("pass_threshold", &ValidityOptions::pass_threshold)
      .def_readwrite("marginal_threshold",
                     &ValidityOptions::marginal_threshold)
      .def_readwrite("subsystem_state", &ValidityOptions::subsystem_state);

  py::class_<SingleEmitterRatios>(m, "SingleEmitterRatios")
      .def_readonly("dipole", &SingleEmitterRatios::dipole)
      .def_readonly("cavity", &SingleEmitterRatios::cavity);

  py::class_<ValidityReport>(m, "ValidityReport")
      .def_readonly("eigenvalues", &ValidityReport::eigenvalues)
      .def_readonly("min_eigenvalue_magnitude",
                    &ValidityReport::min_eigenvalue_magnitude)
      .def_readonly("max_coupling_ratio", &ValidityReport::max_coupling_ratio)
      .def_readonly("cavity_scale_ratio", &ValidityReport::cavity_scale_ratio)
      .def_readonly("emitter_scale_ratio",
                    &ValidityReport::emitter_scale_ratio)
      .def_readonly("coupling_scale_ratio",
                    &ValidityReport::coupling_scale_ratio)
      .def_readonly("retardation_ratio", &ValidityReport::retardation_ratio)
      .def_readonly("single", &ValidityReport::single)
      .def_readonly("degraded", &ValidityReport::degraded)
      .def_readonly("n_bar", &ValidityReport::n_bar)
      .def_readonly("pass_threshold", &ValidityReport::pass_threshold)
      .def_readonly("marginal_threshold", &ValidityReport::marginal_threshold)
      .def_readonly("verdict", &ValidityReport::verdict)
      .def_property_readonly("verdict_name", [](const ValidityReport& r) {
        return verdict_name(r.verdict);
      });
  m.def("validity_report", &validity_report, py::arg("spec"),
        py::arg("couplings"), py::arg("options") = ValidityOptions{});

  m.def("adiabatic_amplitudes", &adiabatic_amplitudes, py::arg("couplings"),
        py::arg("alpha"), py::arg("beta_a"));
  m.def("retardation_correction", &retardation_correction,
        py::arg("couplings"), py::arg("params"), py::arg("alpha"),
        py::arg("beta_a"));

  // ---- classical ----
  py::class_<ClassicalState>(m, "ClassicalState")
      .def(py::init<>())
      .def_readwrite("alpha", &ClassicalState::alpha)
      .def_readwrite("beta_a", &ClassicalState::beta_a)
      .def_readwrite("beta", &ClassicalState::beta);

  py::class_<DriveSpec>(m, "DriveSpec")
      .def(py::init<double, double>(), py::arg("eta") = 0.0,
           py::arg("omega_l") = 0.0)
      .def_readwrite("eta", &DriveSpec::eta)
      .def_readwrite("omega_l", &DriveSpec::omega_l);

  py::class_<ClassicalTrajectory>(m, "ClassicalTrajectory")
      .def_readonly("times", &ClassicalTrajectory::times)
      .def_readonly("alpha", &ClassicalTrajectory::alpha)
      .def_readonly("beta_a", &ClassicalTrajectory::beta_a)
      .def_readonly("beta", &ClassicalTrajectory::beta);
  m.def("integrate_full_classical", &integrate_full_classical,
        py::arg("spec"), py::arg("couplings"), py::arg("initial"),
        py::arg("t_end"), py::arg("dt"));
  m.def("integrate_effective_classical", &integrate_effective_classical,
        py::arg("params"), py::arg("alpha0"), py::arg("beta_a0"),
        py::arg("t_end"), py::arg("dt"));
  m.def("eliminate_classical", &eliminate_classical, py::arg("spec"),
        py::arg("couplings"));

  py::class_<SteadyState>(m, "SteadyState")
      .def_readonly("alpha", &SteadyState::alpha)
      .def_readonly("beta_a", &SteadyState::beta_a);
  m.def("driven_steady_state", &driven_steady_state, py::arg("params"),
        py::arg("drive"));

  py::enum_<SpectrumMode>(m, "SpectrumMode")
      .value("exact", SpectrumMode::exact)
      .value("polariton", SpectrumMode::polariton);

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("omega_l", &Spectrum::omega_l)
      .def_readonly("t_c", &Spectrum::t_c);
  m.def("transmission_spectrum", &transmission_spectrum, py::arg("params"),
        py::arg("kappa_bare"), py::arg("eta"), py::arg("omega_l"),
        py::arg("mode") = SpectrumMode::exact);
  m.def("transmission_spectrum_exact_frame", &transmission_spectrum_exact_frame,
        py::arg("spec"), py::arg("couplings"), py::arg("eta"),
        py::arg("omega_l"));

  py::class_<PolaritonAnalysis>(m, "PolaritonAnalysis")
      .def_readonly("xi_plus", &PolaritonAnalysis::xi_plus)
      .def_readonly("xi_minus", &PolaritonAnalysis::xi_minus)
      .def_readonly("gamma_plus", &PolaritonAnalysis::gamma_plus)
      .def_readonly("gamma_minus", &PolaritonAnalysis::gamma_minus)
      .def_readonly("omega_plus", &PolaritonAnalysis::omega_plus)
      .def_readonly("omega_minus", &PolaritonAnalysis::omega_minus)
      .def_readonly("z_plus", &PolaritonAnalysis::z_plus)
      .def_readonly("z_minus", &PolaritonAnalysis::z_minus)
      .def_readonly("omega0_eff", &PolaritonAnalysis::omega0_eff)
      .def_readonly("gamma_plus_onset", &PolaritonAnalysis::gamma_plus_onset)
      .def_readonly("gamma_plus_nonincreasing",
                    &PolaritonAnalysis::gamma_plus_nonincreasing);
  m.def("polariton_analysis",
        py::overload_cast<double, double, double, double, double>(
            &polariton_analysis),
        py::arg("g_eff"), py::arg("mu"), py::arg("kappa_eff"),
        py::arg("gamma_a_eff"), py::arg("omega0_eff") = 0.0);
  m.def("polariton_analysis",
        py::overload_cast<const EffectiveParams&>(&polariton_analysis),
        py::arg("params"));

  // ---- quantum ----
  py::class_<HilbertSpec>(m, "HilbertSpec")
      .def(py::init<int, int, int>(), py::arg("n_max") = 1,
           py::arg("n_spins_b") = 0, py::arg("cap") = 256)
      .def_readwrite("n_max", &HilbertSpec::n_max)
      .def_readwrite("n_spins_b", &HilbertSpec::n_spins_b)
      .def_readwrite("cap", &HilbertSpec::cap)
      .def("fock_dim", &HilbertSpec::fock_dim)
      .def("spin_dim", &HilbertSpec::spin_dim)
      .def("dim", &HilbertSpec::dim);

  py::class_<LindbladModel>(m, "LindbladModel")
      .def_readonly("hilbert", &LindbladModel::hilbert)
      .def_readonly("hamiltonian", &LindbladModel::hamiltonian)
      .def_readonly("rate_matrix", &LindbladModel::rate_matrix);
  m.def("apply_liouvillian", &apply_liouvillian, py::arg("model"),
        py::arg("rho"));
  m.def("suggested_dt", &suggested_dt, py::arg("model"));
  m.def("build_full_model", &build_full_model, py::arg("spec"),
        py::arg("couplings"), py::arg("hilbert"),
        py::arg("drive") = std::optional<DriveSpec>{});
  m.def("build_effective_model", &build_effective_model, py::arg("params"),
        py::arg("n_max"), py::arg("drive") = std::optional<DriveSpec>{},
        py::arg("cap") = 256);

  m.def("vacuum_state", &vacuum_state, py::arg("hilbert"));
  m.def("a_excited_state", &a_excited_state, py::arg("hilbert"));
  m.def("a_superposition_state", &a_superposition_state, py::arg("hilbert"));
  m.def("coherent_state", &coherent_state, py::arg("hilbert"),
        py::arg("amplitude"));
  m.def("check_density_matrix", &check_density_matrix, py::arg("rho"),
        py::arg("herm_tol") = 1e-10, py::arg("trace_tol") = 1e-8);

  py::class_<EvolveOptions>(m, "EvolveOptions")
      .def(py::init<>())
      .def_readwrite("t_end", &EvolveOptions::t_end)
      .def_readwrite("dt", &EvolveOptions::dt)
      .def_readwrite("n_samples", &EvolveOptions::n_samples)
      .def_readwrite("store_states", &EvolveOptions::store_states)
      .def_readwrite("trace_drift_tol", &EvolveOptions::trace_drift_tol);

  py::class_<QuantumTrajectory>(m, "QuantumTrajectory")
      .def_readonly("times", &QuantumTrajectory::times)
      .def_readonly("a_amp", &QuantumTrajectory::a_amp)
      .def_readonly("sigma_a_amp", &QuantumTrajectory::sigma_a_amp)
      .def_readonly("photon_population", &QuantumTrajectory::photon_population)
      .def_readonly("a_population", &QuantumTrajectory::a_population)
      .def_readonly("b_population", &QuantumTrajectory::b_population)
      .def_readonly("trace", &QuantumTrajectory::trace)
      .def_readonly("states", &QuantumTrajectory::states)
      .def_readonly("max_trace_drift", &QuantumTrajectory::max_trace_drift)
      .def_readonly("max_hermiticity_error",
                    &QuantumTrajectory::max_hermiticity_error);
  m.def("evolve", &evolve, py::arg("model"), py::arg("rho0"),
        py::arg("options"));
  m.def("partial_trace_b", &partial_trace_b, py::arg("rho"),
        py::arg("hilbert"));
  m.def("trace_distance", &trace_distance, py::arg("rho1"), py::arg("rho2"));

  py::class_<SteadyStateResult>(m, "SteadyStateResult")
      .def_readonly("rho", &SteadyStateResult::rho)
      .def_readonly("residual", &SteadyStateResult::residual)
      .def_readonly("t", &SteadyStateResult::t);
  m.def("quantum_steady_state", &quantum_steady_state, py::arg("model"),
        py::arg("dt") = 0.0, py::arg("residual_tol") = 1e-9);

  py::enum_<InitialStateKind>(m, "InitialStateKind")
      .value("vacuum", InitialStateKind::vacuum)
      .value("a_excited", InitialStateKind::a_excited)
      .value("a_superposition", InitialStateKind::a_superposition)
      .value("coherent", InitialStateKind::coherent);

  py::class_<ComparisonProtocol>(m, "ComparisonProtocol")
      .def(py::init<>())
      .def_readwrite("initial", &ComparisonProtocol::initial)
      .def_readwrite("coherent_amplitude",
                     &ComparisonProtocol::coherent_amplitude)
      .def_readwrite("t_end", &ComparisonProtocol::t_end)
      .def_readwrite("dt", &ComparisonProtocol::dt)
      .def_readwrite("n_samples", &ComparisonProtocol::n_samples)
      .def_readwrite("require_valid", &ComparisonProtocol::require_valid);

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("max_trace_distance", &ComparisonReport::max_trace_distance)
      .def_readonly("max_a_discrepancy", &ComparisonReport::max_a_discrepancy)
      .def_readonly("max_sigma_discrepancy",
                    &ComparisonReport::max_sigma_discrepancy)
      .def_readonly("max_photon_discrepancy",
                    &ComparisonReport::max_photon_discrepancy)
      .def_readonly("max_a_population_discrepancy",
                    &ComparisonReport::max_a_population_discrepancy)
      .def_readonly("peak_a", &ComparisonReport::peak_a)
      .def_readonly("peak_sigma", &ComparisonReport::peak_sigma)
      .def_readonly("peak_photon", &ComparisonReport::peak_photon)
      .def_readonly("peak_a_population", &ComparisonReport::peak_a_population)
      .def_readonly("validity_verdict", &ComparisonReport::validity_verdict)
      .def_readonly("validity_max_ratio",
                    &ComparisonReport::validity_max_ratio);
  m.def("compare_full_vs_effective", &compare_full_vs_effective,
        py::arg("spec"), py::arg("couplings"), py::arg("hilbert"),
        py::arg("protocol"));
}
