#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "socmetro/error.hpp"
#include "socmetro/measurement.hpp"
#include "socmetro/metrology.hpp"
#include "socmetro/models.hpp"
#include "socmetro/scenarios.hpp"

namespace py = pybind11;
using namespace socmetro;

namespace {

Statistics parse_statistics(const std::string& name) {
  if (name == "fermionic") return Statistics::Fermionic;
  if (name == "bosonic" || name == "symmetric-bosonic") return Statistics::SymmetricBosonic;
  if (name == "tonks-girardeau" || name == "tg") return Statistics::TonksGirardeau;
  throw InvalidArgument("unknown statistics: " + name);
}

StateProvider model_provider(const std::string& model, std::size_t cutoff) {
  if (model == "effective")
    return [cutoff](const ModelParams& p) {
      return effective_ground_state(p, cutoff ? cutoff : default_model_cutoff(p));
    };
  if (model == "rabi")
    return [cutoff](const ModelParams& p) {
      return rabi_ground_state(p, cutoff ? cutoff : default_model_cutoff(p));
    };
  throw InvalidArgument("unknown model: " + model);
}

}  // namespace

PYBIND11_MODULE(_socmetro, m) {
  m.doc() = "Spin-orbit-coupled trapped-atom metrology core";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<OutOfPhase>(m, "OutOfPhase", error.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<EstimationError>(m, "EstimationError", error.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_static("from_ratio", &ModelParams::from_ratio, py::arg("k_over_kc"), py::arg("omega") = 1.0,
                  py::arg("Omega") = 100.0, py::arg("n_atoms") = 1)
      .def_readwrite("omega", &ModelParams::omega)
      .def_readwrite("Omega", &ModelParams::Omega)
      .def_readwrite("mass", &ModelParams::mass)
      .def_readwrite("k", &ModelParams::k)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("n_atoms", &ModelParams::n_atoms)
      .def_readwrite("beta", &ModelParams::beta)
      .def("validate", &ModelParams::validate)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(omega=" + std::to_string(p.omega) + ", Omega=" + std::to_string(p.Omega) +
               ", k=" + std::to_string(p.k) + ", n_atoms=" + std::to_string(p.n_atoms) + ")";
      });

  py::class_<FisherResult>(m, "FisherResult")
      .def_readonly("value", &FisherResult::value)
      .def_property_readonly("method", [](const FisherResult& r) { return std::string(to_string(r.method)); })
      .def_readonly("metadata", &FisherResult::metadata)
      .def_readonly("notes", &FisherResult::notes)
      .def_readonly("time_normalized", &FisherResult::time_normalized)
      .def("__float__", [](const FisherResult& r) { return r.value; });

  py::class_<FermionicContributions>(m, "FermionicContributions")
      .def_readonly("first", &FermionicContributions::first)
      .def_readonly("second", &FermionicContributions::second)
      .def_readonly("first_numerator", &FermionicContributions::first_numerator)
      .def_readonly("second_numerator", &FermionicContributions::second_numerator);

  py::class_<ThresholdReport>(m, "ThresholdReport")
      .def_readonly("sql_margin", &ThresholdReport::sql_margin)
      .def_readonly("sql_margin_with_ratio", &ThresholdReport::sql_margin_with_ratio)
      .def_readonly("sql_beaten", &ThresholdReport::sql_beaten)
      .def_readonly("excitations_at_kf", &ThresholdReport::excitations_at_kf)
      .def_readonly("excitation_ceiling", &ThresholdReport::excitation_ceiling)
      .def_readonly("max_k_over_kc", &ThresholdReport::max_k_over_kc)
      .def_readonly("squeezing_within_ceiling", &ThresholdReport::squeezing_within_ceiling)
      .def_readonly("n_min", &ThresholdReport::n_min)
      .def_readonly("n_atoms_above_threshold", &ThresholdReport::n_atoms_above_threshold)
      .def_readonly("hl_margin_bosonic", &ThresholdReport::hl_margin_bosonic)
      .def_readonly("hl_beaten_bosonic", &ThresholdReport::hl_beaten_bosonic)
      .def_readonly("sweep_time", &ThresholdReport::sweep_time);

  py::class_<EstimationRun>(m, "EstimationRun")
      .def_readonly("true_Omega", &EstimationRun::true_Omega)
      .def_readonly("sample_count", &EstimationRun::sample_count)
      .def_readonly("repetitions", &EstimationRun::repetitions)
      .def_readonly("seed", &EstimationRun::seed)
      .def_readonly("estimates", &EstimationRun::estimates)
      .def_readonly("mean", &EstimationRun::mean)
      .def_readonly("empirical_variance", &EstimationRun::empirical_variance)
      .def_readonly("fisher_information", &EstimationRun::fisher_information)
      .def_readonly("crb", &EstimationRun::crb);

  m.def("critical_coupling", &critical_coupling);
  m.def("squeeze_parameter", &squeeze_parameter, py::arg("k"), py::arg("k_c"));
  m.def("mean_excitations", [](double k, double k_c) {
    const auto e = mean_excitations(k, k_c);
    return py::make_tuple(e.exact, e.approximate);
  });
  m.def("adiabatic_sweep_time", &adiabatic_sweep_time, py::arg("params"), py::arg("k_f"));
  m.def("spectrum", [](const ModelParams& p, const std::string& model, std::size_t cutoff, std::size_t n_states) {
    const std::size_t d = cutoff ? cutoff : default_model_cutoff(p);
    const FockOperator h = model == "rabi" ? build_rabi_hamiltonian(p, d) : build_effective_hamiltonian(p, d);
    return diagonalize(h, n_states).eigenvalues;
  }, py::arg("params"), py::arg("model") = "effective", py::arg("cutoff") = 0, py::arg("n_states") = 6);

  m.def("qfi_single_particle_analytic", &qfi_single_particle_analytic);
  m.def("qfi_fermionic_analytic", &qfi_fermionic_analytic);
  m.def("qfi_fermionic_contributions", &qfi_fermionic_contributions);
  m.def("qfi_bosonic_excited_analytic", &qfi_bosonic_excited_analytic);
  m.def("qfi_bosonic_excited_asymptotic", &qfi_bosonic_excited_asymptotic, py::arg("params"), py::arg("k_f"));
  m.def("qfi_collective_variance",
        [](const ModelParams& p, const std::string& statistics, std::size_t cutoff, bool tensor_product) {
          const double xi = squeeze_parameter(p.k, critical_coupling(p));
          return qfi_collective_variance(ManyBodyProbe::ground(p.n_atoms, parse_statistics(statistics), xi), p,
                                         cutoff,
                                         tensor_product ? VarianceRoute::TensorProduct : VarianceRoute::Combinatorial);
        },
        py::arg("params"), py::arg("statistics") = "fermionic", py::arg("cutoff") = 0,
        py::arg("tensor_product") = false);
  m.def("qfi_finite_difference",
        [](const ModelParams& p, const std::string& model, std::size_t cutoff, double dOmega) {
          return qfi_finite_difference(model_provider(model, cutoff), p, dOmega);
        },
        py::arg("params"), py::arg("model") = "effective", py::arg("cutoff") = 0, py::arg("dOmega") = 0.0);
  m.def("qfi_thermal_spectral", [](const ModelParams& p) { return qfi_mixed_spectral(thermal_state(p), p); });
  m.def("qfi_thermal_closed_form", &qfi_thermal_closed_form);
  m.def("thermal_factor_printed", &thermal_factor_printed);
  m.def("thermal_factor_exact", &thermal_factor_exact);
  m.def("time_normalized_qfi", &time_normalized_qfi, py::arg("params"), py::arg("k_f"));
  m.def("sql_hl_thresholds", &sql_hl_thresholds, py::arg("params"), py::arg("k_f"));

  m.def("classical_fisher_information",
        [](const ModelParams& p, const std::string& statistics, std::size_t grid_points, bool momentum) {
          const Quadrature q = momentum ? Quadrature::Momentum : Quadrature::Position;
          if (p.n_atoms == 1)
            return classical_fisher_information(
                single_particle_density_provider(p, 0, default_grid_for_params(p, 0, grid_points, q), q), p.Omega);
          return classical_fisher_information(
              pair_density_provider(p, parse_statistics(statistics), default_grid_for_params(p, 1, grid_points, q), q),
              p.Omega);
        },
        py::arg("params"), py::arg("statistics") = "fermionic", py::arg("grid_points") = kDefaultGridPoints,
        py::arg("momentum") = false);
  m.def("grid_qfi",
        [](const ModelParams& p, const std::string& statistics, std::size_t grid_points) {
          if (p.n_atoms == 1)
            return grid_qfi_real_wavefunction(
                single_particle_wavefunction_provider(p, 0, default_grid_for_params(p, 0, grid_points)), p.Omega);
          return grid_qfi_real_wavefunction(
              pair_wavefunction_provider(p, parse_statistics(statistics), default_grid_for_params(p, 1, grid_points)),
              p.Omega);
        },
        py::arg("params"), py::arg("statistics") = "fermionic", py::arg("grid_points") = kDefaultGridPoints);
  m.def("mle_monte_carlo",
        [](const ModelParams& p, std::size_t sample_count, std::uint64_t seed, std::size_t repetitions,
           std::size_t grid_points, double omega_margin) {
          MleOptions opts;
          opts.repetitions = repetitions;
          const Grid1D g = default_grid_for_params(p, 0, grid_points, Quadrature::Position, omega_margin);
          py::gil_scoped_release release;
          return mle_monte_carlo(single_particle_density_provider(p, 0, g), p.Omega, sample_count, seed, opts);
        },
        py::arg("params"), py::arg("sample_count"), py::arg("seed"), py::arg("repetitions") = 2000,
        py::arg("grid_points") = kDefaultGridPoints, py::arg("omega_margin") = 0.2);

  m.def("scenario_names", &scenario_names);
  m.def("run_scenario",
        [](const std::string& scenario, const std::string& config_json, const std::vector<std::string>& overrides) {
          const nlohmann::json doc = config_json.empty() ? nlohmann::json() : nlohmann::json::parse(config_json);
          const RunConfig cfg = resolve_config(scenario, doc, overrides);
          ScenarioOutput out;
          {
            py::gil_scoped_release release;
            out = run_scenario(cfg);
          }
          py::dict result;
          result["extension"] = out.primary_extension;
          result["primary"] = out.primary;
          result["summary"] = out.summary_json ? py::object(py::str(*out.summary_json)) : py::none();
          result["extra_files"] = out.extra_files;
          return result;
        },
        py::arg("scenario"), py::arg("config_json") = "", py::arg("overrides") = std::vector<std::string>{});
}
