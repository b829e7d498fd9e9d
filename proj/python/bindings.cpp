#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oqsim/analysis.hpp"
#include "oqsim/channels.hpp"
#include "oqsim/circuit.hpp"
#include "oqsim/decomp.hpp"
#include "oqsim/errors.hpp"
#include "oqsim/experiments.hpp"
#include "oqsim/qstate.hpp"
#include "oqsim/tomomit.hpp"

namespace py = pybind11;
using namespace oqsim;

namespace {

void bind_states(py::module_& m) {
  py::class_<PureState>(m, "PureState")
      .def(py::init<ComplexVector>(), py::arg("amplitudes"))
      .def_static("basis", &PureState::basis, py::arg("num_qubits"), py::arg("index"))
      .def_static("plus", &PureState::plus)
      .def_static("phi_plus", &PureState::phi_plus)
      .def_static("phi_minus", &PureState::phi_minus)
      .def_static("psi_plus", &PureState::psi_plus)
      .def_static("psi_minus", &PureState::psi_minus)
      .def_static("ghz", &PureState::ghz)
      .def_property_readonly("amplitudes", &PureState::amplitudes)
      .def_property_readonly("num_qubits", &PureState::num_qubits);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<ComplexMatrix>(), py::arg("matrix"))
      .def_static("from_pure", &DensityMatrix::from_pure)
      .def_static("maximally_mixed", &DensityMatrix::maximally_mixed)
      .def_static("basis", &DensityMatrix::basis, py::arg("num_qubits"), py::arg("index"))
      .def_property_readonly("matrix", &DensityMatrix::matrix)
      .def_property_readonly("num_qubits", &DensityMatrix::num_qubits)
      .def("purity", &DensityMatrix::purity);

  m.def("tensor", py::overload_cast<const DensityMatrix&, const DensityMatrix&>(&tensor));
  m.def("partial_trace", [](const DensityMatrix& rho, const std::vector<int>& keep) {
    return partial_trace(rho, std::span<const int>(keep));
  });
  m.def("overlap", &overlap);
  m.def("vn_entropy", &vn_entropy);
  m.def("mutual_information", [](const DensityMatrix& rho, const std::vector<int>& a) {
    return mutual_information(rho, std::span<const int>(a));
  });
  m.def("trace_distance", &trace_distance);
  m.def("fidelity", &fidelity);
  m.def("bloch_vector", &bloch_vector);
}

void bind_channels(py::module_& m) {
  py::class_<KrausChannel>(m, "KrausChannel")
      .def(py::init<std::vector<ComplexMatrix>>(), py::arg("operators"))
      .def_property_readonly("dim", &KrausChannel::dim)
      .def_property_readonly("operators", &KrausChannel::operators)
      .def("apply", py::overload_cast<const DensityMatrix&>(&KrausChannel::apply, py::const_));

  py::class_<ChoiMatrix>(m, "ChoiMatrix")
      .def(py::init<std::size_t, ComplexMatrix>(), py::arg("system_dim"), py::arg("matrix"))
      .def_property_readonly("system_dim", &ChoiMatrix::system_dim)
      .def_property_readonly("matrix", &ChoiMatrix::matrix)
      .def("apply", py::overload_cast<const DensityMatrix&>(&ChoiMatrix::apply, py::const_));

  py::class_<ADParams>(m, "ADParams")
      .def(py::init<double, double, double>(), py::arg("gamma0") = 1.0, py::arg("lambda_") = 1.0,
           py::arg("omega0") = 0.0)
      .def_static("from_ratio", &ADParams::from_ratio, py::arg("ratio"), py::arg("lambda_") = 1.0)
      .def_readwrite("gamma0", &ADParams::gamma0)
      .def_readwrite("lambda_", &ADParams::lambda)
      .def("ratio", &ADParams::ratio);

  py::class_<RateFunction>(m, "RateFunction")
      .def_static("constant", &RateFunction::constant)
      .def_static("tanh", &RateFunction::tanh)
      .def_static("tan", &RateFunction::tan)
      .def_static("from_function", &RateFunction::from_function)
      .def("__call__", &RateFunction::operator())
      .def("integral", &RateFunction::integral);

  py::class_<PauliRates>(m, "PauliRates")
      .def(py::init<RateFunction, RateFunction, RateFunction>(), py::arg("gamma_x"), py::arg("gamma_y"),
           py::arg("gamma_z"))
      .def_static("eternal", &PauliRates::eternal, py::arg("lambda_"), py::arg("omega"))
      .def_static("tan_model", &PauliRates::tan_model, py::arg("lambda_"), py::arg("omega"));

  m.def("choi", &choi);
  m.def("is_cptp", &is_cptp, py::arg("choi"), py::arg("tol") = 1e-10);
  m.def("choi_distance", py::overload_cast<const KrausChannel&, const KrausChannel&>(&choi_distance));
  m.def("compose", &compose, "a after b");
  m.def("identity_channel", &identity_channel);
  m.def("pump_zz", &pump_zz);
  m.def("pump_xx", &pump_xx);
  m.def("collisional_correlated", &collisional_correlated, py::arg("n"), py::arg("g_tau"));
  m.def("collisional_separable", &collisional_separable, py::arg("n"), py::arg("g_tau"));
  m.def("c1", &c1, py::arg("t"), py::arg("params"));
  m.def("gamma_ad", &gamma_ad, py::arg("t"), py::arg("params"));
  m.def("amplitude_damping_channel", &amplitude_damping_channel, py::arg("t"), py::arg("params"));
  m.def("depolarizing", &depolarizing, py::arg("p"));
  m.def("pauli_channel", py::overload_cast<const std::array<double, 4>&>(&pauli_channel));
  m.def("pauli_rates_to_probabilities", &pauli_rates_to_probabilities, py::arg("rates"), py::arg("t"));
}

void bind_circuits(py::module_& m) {
  py::class_<Circuit>(m, "Circuit")
      .def(py::init<int>(), py::arg("num_qubits"))
      .def_property_readonly("num_qubits", &Circuit::num_qubits)
      .def("__len__", &Circuit::size)
      .def("h", &Circuit::h, py::return_value_policy::reference_internal)
      .def("x", &Circuit::x, py::return_value_policy::reference_internal)
      .def("y", &Circuit::y, py::return_value_policy::reference_internal)
      .def("z", &Circuit::z, py::return_value_policy::reference_internal)
      .def("s", &Circuit::s, py::return_value_policy::reference_internal)
      .def("sdg", &Circuit::sdg, py::return_value_policy::reference_internal)
      .def("rx", &Circuit::rx, py::return_value_policy::reference_internal)
      .def("ry", &Circuit::ry, py::return_value_policy::reference_internal)
      .def("rz", &Circuit::rz, py::return_value_policy::reference_internal)
      .def("cnot", &Circuit::cnot, py::return_value_policy::reference_internal)
      .def("cy", &Circuit::cy, py::return_value_policy::reference_internal)
      .def("cz", &Circuit::cz, py::return_value_policy::reference_internal)
      .def("cry", &Circuit::cry, py::return_value_policy::reference_internal)
      .def("to_json", [](const Circuit& c) { return circuit_to_json(c); })
      .def_static("from_json", &circuit_from_json);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init<>())
      .def_static("default", &NoiseModel::default_model)
      .def_static("none", &NoiseModel::none)
      .def_readwrite("eps1", &NoiseModel::eps1)
      .def_readwrite("eps2", &NoiseModel::eps2)
      .def_readwrite("readout", &NoiseModel::readout);

  py::class_<Counts>(m, "Counts")
      .def_readonly("num_bits", &Counts::num_bits)
      .def_readonly("shots", &Counts::shots)
      .def_readonly("table", &Counts::table)
      .def("probabilities", &Counts::probabilities);

  m.def("confusion_matrix", &confusion_matrix, py::arg("p1_given_0"), py::arg("p0_given_1"));
  m.def("run_exact", py::overload_cast<const Circuit&, const DensityMatrix&>(&run_exact));
  m.def("run_noisy", py::overload_cast<const Circuit&, const DensityMatrix&, const NoiseModel&>(&run_noisy));
  m.def(
      "sample_counts",
      [](const DensityMatrix& rho, std::uint64_t shots, const std::vector<RealMatrix>& readout, std::uint64_t seed) {
        return sample_counts(rho, shots, readout, seed);
      },
      py::arg("rho"), py::arg("shots"), py::arg("readout") = std::vector<RealMatrix>{}, py::arg("seed") = 0);
  m.def("circuit_to_channel", [](const Circuit& c, const std::vector<int>& system) {
    return circuit_to_channel(c, std::span<const int>(system));
  });

  m.def("build_pump_zz_circuit", &build_pump_zz_circuit);
  m.def("build_pump_xx_circuit", &build_pump_xx_circuit);
  m.def("build_composed_pump_circuit", &build_composed_pump_circuit);
  m.def("build_collisional_circuit", &build_collisional_circuit, py::arg("n"), py::arg("g_tau"),
        py::arg("correlated"), py::arg("readout_rotation") = true);
  m.def(
      "build_amplitude_damping_circuit",
      [](double t, const ADParams& p) { return build_amplitude_damping_circuit(t, p); }, py::arg("t"),
      py::arg("params"));
  m.def("build_depolarizing_circuit", &build_depolarizing_circuit);
  m.def("solve_pauli_angles", py::overload_cast<const std::array<double, 4>&>(&solve_pauli_angles));

  py::class_<PauliAngles>(m, "PauliAngles")
      .def_readwrite("theta1", &PauliAngles::theta1)
      .def_readwrite("theta2", &PauliAngles::theta2)
      .def_readwrite("theta3", &PauliAngles::theta3);
  m.def("build_pauli_circuit", &build_pauli_circuit);
}

void bind_tomography(py::module_& m) {
  py::class_<CalibrationMatrix>(m, "CalibrationMatrix")
      .def_readonly("num_qubits", &CalibrationMatrix::num_qubits)
      .def_readonly("a", &CalibrationMatrix::a);
  py::class_<MitigationResult>(m, "MitigationResult")
      .def_readonly("probabilities", &MitigationResult::probabilities)
      .def_readonly("residual", &MitigationResult::residual)
      .def_readonly("converged", &MitigationResult::converged);
  py::class_<TomographyRecord>(m, "TomographyRecord");

  m.def("exact_calibration", &exact_calibration, py::arg("noise"), py::arg("num_qubits"));
  m.def("measure_calibration", &measure_calibration, py::arg("noise"), py::arg("num_qubits"), py::arg("shots"),
        py::arg("seed"));
  m.def("mitigate_counts", &mitigate_counts);
  m.def("project_to_density", &project_to_density);
  m.def(
      "simulate_tomography",
      [](const DensityMatrix& rho, std::uint64_t shots, const std::vector<RealMatrix>& readout, std::uint64_t seed) {
        return simulate_tomography(rho, shots, readout, seed);
      },
      py::arg("rho"), py::arg("shots"), py::arg("readout") = std::vector<RealMatrix>{}, py::arg("seed") = 0);
  m.def(
      "tomography",
      [](const std::vector<TomographyRecord>& records, const std::optional<CalibrationMatrix>& cal) {
        const std::span<const TomographyRecord> r(records);
        return cal ? tomography(r, true, cal) : tomography(r, false);
      },
      py::arg("records"), py::arg("calibration") = py::none());
}

void bind_analysis(py::module_& m) {
  m.def("witness_f", py::overload_cast<const KrausChannel&>(&witness_f));
  m.def("binary_entropy", &binary_entropy);
  m.def("channel_capacity_ad", &channel_capacity_ad, py::arg("eta"));
  m.def("extractable_work", &extractable_work, py::arg("rho"), py::arg("kT") = 1.0);

  py::class_<TimeSeries>(m, "TimeSeries")
      .def(py::init<>())
      .def_readwrite("times", &TimeSeries::times)
      .def_readwrite("values", &TimeSeries::values)
      .def_readwrite("label", &TimeSeries::label);
  py::class_<Revival>(m, "Revival")
      .def_readonly("index", &Revival::index)
      .def_readonly("magnitude", &Revival::magnitude);
  m.def(
      "detect_revivals",
      [](const std::vector<double>& v, double tol) { return detect_revivals(std::span<const double>(v), tol); },
      py::arg("values"), py::arg("tol"));
  m.def("to_csv", [](const std::vector<TimeSeries>& s) { return to_csv(std::span<const TimeSeries>(s)); });
}

void bind_experiments(py::module_& m) {
  py::enum_<Experiment>(m, "Experiment")
      .value("reservoir", Experiment::Reservoir)
      .value("collisional", Experiment::Collisional)
      .value("amplitude_damping", Experiment::AmplitudeDamping)
      .value("depolarizing", Experiment::Depolarizing)
      .value("pauli_work", Experiment::PauliWork)
      .value("capacity", Experiment::Capacity);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_property(
          "experiment", [](const ExperimentConfig& c) { return experiment_name(c.experiment); },
          [](ExperimentConfig& c, const std::string& name) { c.experiment = experiment_from_name(name); })
      .def_readwrite("shots", &ExperimentConfig::shots)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("noise", &ExperimentConfig::noise)
      .def_readwrite("mitigate", &ExperimentConfig::mitigate)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_readwrite("p_grid", &ExperimentConfig::p_grid)
      .def_readwrite("n_max", &ExperimentConfig::n_max)
      .def_readwrite("g_tau", &ExperimentConfig::g_tau)
      .def_readwrite("ratios", &ExperimentConfig::ratios)
      .def_readwrite("lambda_", &ExperimentConfig::lambda)
      .def_readwrite("t_max", &ExperimentConfig::t_max)
      .def_readwrite("points", &ExperimentConfig::points)
      .def("to_json", [](const ExperimentConfig& c) { return config_to_json(c); })
      .def_static("from_json", &config_from_json);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("theory", &ExperimentResult::theory)
      .def_readonly("simulated", &ExperimentResult::simulated)
      .def_readonly("title", &ExperimentResult::title);

  m.def("run_experiment", [](ExperimentConfig c) {
    c.finalize();
    py::gil_scoped_release release;
    return run_experiment(c);
  });
  m.def("write_outputs", &write_outputs, py::arg("config"), py::arg("result"), py::arg("dir"),
        py::arg("wall_seconds") = 0.0);
}

}  // namespace

PYBIND11_MODULE(_oqsim, m) {
  m.doc() = "Open-quantum-system channels, circuits and experiments";
  m.attr("__version__") = version();

  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<SingularityError>(m, "SingularityError", numerical.ptr());
  py::register_exception<ModelError>(m, "ModelError", numerical.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", numerical.ptr());
  py::register_exception<SolverError>(m, "SolverError", numerical.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);

  bind_states(m);
  bind_channels(m);
  bind_circuits(m);
  bind_tomography(m);
  bind_analysis(m);
  bind_experiments(m);
}
