#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pdc/config.hpp"
#include "pdc/dispersion.hpp"
#include "pdc/error.hpp"
#include "pdc/fit.hpp"
#include "pdc/jsa.hpp"
#include "pdc/montecarlo.hpp"
#include "pdc/schmidt.hpp"
#include "pdc/twinstats.hpp"
#include "pdc/units.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

// Python mirror of pdc::Error; `kind` holds the error category name.
PyObject* g_error = nullptr;

pdc::JointAmplitude amplitude_from(const pdc::FrequencyGrid& grid, const Eigen::MatrixXcd& values) {
  return pdc::JointAmplitude(grid, values, false);
}

}  // namespace

PYBIND11_MODULE(_pdcsim, m) {
  m.doc() = "Pulsed type-II downconversion simulator";
  m.attr("__version__") = "0.1.0";

  static py::exception<pdc::Error> error(m, "PdcError");
  g_error = error.ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const pdc::Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(g_error)(e.what());
      exc.attr("kind") = pdc::to_string(e.kind());
      exc.attr("exit_code") = e.exit_code();
      PyErr_SetObject(g_error, exc.ptr());
    }
  });

  // ---- units ----
  m.def("thz_to_rad_per_ps", &pdc::units::thz_to_rad_per_ps, "f_thz"_a);
  m.def("wavelength_nm", &pdc::units::wavelength_nm, "omega"_a, "Vacuum wavelength (nm) of an angular frequency (rad/ps).");
  m.def("nm_width_to_rad_per_ps", &pdc::units::nm_width_to_rad_per_ps, "width_nm"_a, "center_nm"_a);
  m.def("rad_per_ps_width_to_nm", &pdc::units::rad_per_ps_width_to_nm, "width"_a, "center_nm"_a);

  // ---- device and dispersion ----
  py::class_<pdc::DispersionTriple>(m, "DispersionTriple")
      .def(py::init<>())
      .def_readwrite("group_velocity", &pdc::DispersionTriple::group_velocity)
      .def_readwrite("kappa", &pdc::DispersionTriple::kappa)
      .def_readwrite("lambda_coeff", &pdc::DispersionTriple::lambda_coeff);

  py::class_<pdc::DeviceSpec>(m, "DeviceSpec")
      .def(py::init<>())
      .def_readwrite("length_um", &pdc::DeviceSpec::length_um)
      .def_readwrite("gamma", &pdc::DeviceSpec::gamma)
      .def_readwrite("pump_center", &pdc::DeviceSpec::pump_center)
      .def_readwrite("signal_center", &pdc::DeviceSpec::signal_center)
      .def_readwrite("idler_center", &pdc::DeviceSpec::idler_center)
      .def_readwrite("pump", &pdc::DeviceSpec::pump)
      .def_readwrite("signal", &pdc::DeviceSpec::signal)
      .def_readwrite("idler", &pdc::DeviceSpec::idler)
      .def("validate", &pdc::DeviceSpec::validate);

  m.def("delta_k", &pdc::delta_k, "device"_a, "nu_s"_a, "nu_i"_a);
  m.def("pm_tilt_deviation", &pdc::pm_tilt_deviation, "device"_a);
  m.def("group_delay_mismatch", &pdc::group_delay_mismatch, "device"_a);

  // ---- joint spectral amplitude ----
  py::enum_<pdc::PmApproximation>(m, "PmApproximation")
      .value("gaussian", pdc::PmApproximation::gaussian)
      .value("sinc", pdc::PmApproximation::sinc);

  py::class_<pdc::PumpSpec>(m, "PumpSpec")
      .def(py::init([](double sigma) { return pdc::PumpSpec{sigma}; }), "sigma"_a)
      .def_readwrite("sigma", &pdc::PumpSpec::sigma);

  py::class_<pdc::FrequencyGrid>(m, "FrequencyGrid")
      .def(py::init([](std::size_t n_s, std::size_t n_i, double span_s, double span_i) {
             return pdc::FrequencyGrid{n_s, n_i, span_s, span_i};
           }),
           "n_s"_a, "n_i"_a, "span_s"_a, "span_i"_a)
      .def_static("square", &pdc::FrequencyGrid::square, "n"_a, "span"_a)
      .def_readonly("n_s", &pdc::FrequencyGrid::n_s)
      .def_readonly("n_i", &pdc::FrequencyGrid::n_i)
      .def_readonly("span_s", &pdc::FrequencyGrid::span_s)
      .def_readonly("span_i", &pdc::FrequencyGrid::span_i)
      .def("axis_s", &pdc::FrequencyGrid::axis_s)
      .def("axis_i", &pdc::FrequencyGrid::axis_i);

  py::class_<pdc::JointAmplitude>(m, "JointAmplitude")
      .def(py::init(&amplitude_from), "grid"_a, "values"_a)
      .def_property_readonly("grid", &pdc::JointAmplitude::grid)
      .def_property_readonly("values", [](const pdc::JointAmplitude& j) { return j.values(); },
                             "Complex amplitude (n_s x n_i), a copy.")
      .def_property_readonly("normalized", &pdc::JointAmplitude::normalized)
      .def("norm_squared", &pdc::JointAmplitude::norm_squared)
      .def("renormalized", &pdc::JointAmplitude::renormalized);

  m.def("pump_envelope", &pdc::pump_envelope, "pump"_a, "nu_s"_a, "nu_i"_a);
  m.def("pm_function", &pdc::pm_function, "device"_a, "nu_s"_a, "nu_i"_a, "approx"_a);
  m.def("build_jsa", &pdc::build_jsa, "device"_a, "pump"_a, "grid"_a, "approx"_a = pdc::PmApproximation::gaussian,
        py::call_guard<py::gil_scoped_release>());

  py::enum_<pdc::FilterShape>(m, "FilterShape")
      .value("gaussian", pdc::FilterShape::gaussian)
      .value("supergaussian", pdc::FilterShape::supergaussian)
      .value("rectangular", pdc::FilterShape::rectangular);
  py::enum_<pdc::FilterAxes>(m, "FilterAxes")
      .value("signal", pdc::FilterAxes::signal)
      .value("idler", pdc::FilterAxes::idler)
      .value("both", pdc::FilterAxes::both);

  py::class_<pdc::FilterSpec>(m, "FilterSpec")
      .def(py::init([](pdc::FilterShape shape, double bandwidth, double center, int order, pdc::FilterAxes axes) {
             return pdc::FilterSpec{shape, center, bandwidth, order, axes};
           }),
           "shape"_a, "bandwidth"_a, "center"_a = 0.0, "order"_a = 4, "applies_to"_a = pdc::FilterAxes::both)
      .def_readwrite("shape", &pdc::FilterSpec::shape)
      .def_readwrite("center", &pdc::FilterSpec::center)
      .def_readwrite("bandwidth", &pdc::FilterSpec::bandwidth)
      .def_readwrite("order", &pdc::FilterSpec::order)
      .def_readwrite("applies_to", &pdc::FilterSpec::applies_to);

  py::class_<pdc::FilteredJsa>(m, "FilteredJsa")
      .def_readonly("jsa", &pdc::FilteredJsa::jsa)
      .def_readonly("transmitted_fraction", &pdc::FilteredJsa::transmitted_fraction)
      .def_readonly("renormalization_flagged", &pdc::FilteredJsa::renormalization_flagged);

  m.def("filter_transmission", &pdc::filter_transmission, "filter"_a, "nu"_a);
  m.def("apply_filter", &pdc::apply_filter, "jsa"_a, "filter"_a);

  py::class_<pdc::Marginals>(m, "Marginals")
      .def_readonly("signal", &pdc::Marginals::signal)
      .def_readonly("idler", &pdc::Marginals::idler);
  m.def("marginals", &pdc::marginals, "jsa"_a);

  py::enum_<pdc::CutAxis>(m, "CutAxis")
      .value("antidiagonal", pdc::CutAxis::antidiagonal)
      .value("diagonal", pdc::CutAxis::diagonal);
  m.def("jsi_linewidth", &pdc::jsi_linewidth, "jsa"_a, "axis"_a = pdc::CutAxis::antidiagonal);
  m.def("fwhm", &pdc::fwhm, "x"_a, "y"_a);
  m.def("centroid", &pdc::centroid, "x"_a, "weights"_a);

  // ---- Schmidt analysis and overlaps ----
  py::class_<pdc::SchmidtData>(m, "SchmidtData")
      .def_readonly("grid", &pdc::SchmidtData::grid)
      .def_readonly("coefficients", &pdc::SchmidtData::coefficients)
      .def_readonly("signal_modes", &pdc::SchmidtData::signal_modes)
      .def_readonly("idler_modes", &pdc::SchmidtData::idler_modes)
      .def_readonly("effective_modes", &pdc::SchmidtData::effective_modes)
      .def_readonly("truncation_residual", &pdc::SchmidtData::truncation_residual)
      .def("rank", &pdc::SchmidtData::rank);

  m.def("decompose", &pdc::decompose, "jsa"_a, "discarded_weight"_a = pdc::kDefaultDiscardedWeight,
        py::call_guard<py::gil_scoped_release>());
  m.def("effective_mode_number", &pdc::effective_mode_number, "coefficients"_a);
  m.def("spectral_overlap", &pdc::spectral_overlap, "jsa"_a);
  m.def("spectral_overlap_schmidt", &pdc::spectral_overlap_schmidt, "data"_a, "max_terms"_a = 0);
  m.def("density_overlap", &pdc::density_overlap, "jsa"_a);
  m.def("density_overlap_schmidt", &pdc::density_overlap_schmidt, "data"_a);
  m.def("delayed_overlap", &pdc::delayed_overlap, "jsa"_a, "tau"_a);
  m.def("default_delay_range", &pdc::default_delay_range, "device"_a);

  py::class_<pdc::DelayCompensation>(m, "DelayCompensation")
      .def_readonly("tau", &pdc::DelayCompensation::tau)
      .def_readonly("overlap", &pdc::DelayCompensation::overlap)
      .def_readonly("overlap_complex", &pdc::DelayCompensation::overlap_complex);
  m.def("delay_compensated_overlap", &pdc::delay_compensated_overlap, "jsa"_a, "tau_lo"_a, "tau_hi"_a,
        py::call_guard<py::gil_scoped_release>());

  py::class_<pdc::GainSpec>(m, "GainSpec")
      .def(py::init([](double gain) { return pdc::GainSpec{gain}; }), "gain"_a)
      .def_readwrite("gain", &pdc::GainSpec::gain)
      .def("squeezing", &pdc::GainSpec::squeezing, "coefficients"_a)
      .def("mean_photon_number", &pdc::GainSpec::mean_photon_number, "coefficients"_a);

  // ---- twin-beam statistics ----
  py::class_<pdc::DetectionSpec>(m, "DetectionSpec")
      .def(py::init([](double eta1, double eta2, double gate_rate, double dark_prob) {
             return pdc::DetectionSpec{eta1, eta2, gate_rate, dark_prob};
           }),
           "eta1"_a, "eta2"_a, "gate_rate"_a = 76.2e6 / 64, "dark_prob"_a = 0.0)
      .def_readwrite("eta1", &pdc::DetectionSpec::eta1)
      .def_readwrite("eta2", &pdc::DetectionSpec::eta2)
      .def_readwrite("gate_rate", &pdc::DetectionSpec::gate_rate)
      .def_readwrite("dark_prob", &pdc::DetectionSpec::dark_prob)
      .def_static("dark_prob_from_rate", &pdc::DetectionSpec::dark_prob_from_rate, "dark_rate"_a, "gate_rate"_a);

  py::class_<pdc::CountRecord>(m, "CountRecord")
      .def(py::init([](std::uint64_t gates, std::uint64_t s_s, std::uint64_t s_i, std::uint64_t c, double rate) {
             return pdc::CountRecord{gates, s_s, s_i, c, rate};
           }),
           "gates"_a, "singles_s"_a, "singles_i"_a, "coincidences"_a, "gate_rate"_a)
      .def_readwrite("gates", &pdc::CountRecord::gates)
      .def_readwrite("singles_s", &pdc::CountRecord::singles_s)
      .def_readwrite("singles_i", &pdc::CountRecord::singles_i)
      .def_readwrite("coincidences", &pdc::CountRecord::coincidences)
      .def_readwrite("gate_rate", &pdc::CountRecord::gate_rate)
      .def("accidentals", &pdc::CountRecord::accidentals)
      .def("validate", &pdc::CountRecord::validate)
      .def("__eq__", [](const pdc::CountRecord& a, const pdc::CountRecord& b) { return a == b; })
      .def("__repr__", [](const pdc::CountRecord& r) {
        std::ostringstream os;
        os << "CountRecord(gates=" << r.gates << ", singles_s=" << r.singles_s << ", singles_i=" << r.singles_i
           << ", coincidences=" << r.coincidences << ")";
        return os.str();
      });

  py::class_<pdc::Estimate>(m, "Estimate")
      .def_readonly("value", &pdc::Estimate::value)
      .def_readonly("sigma", &pdc::Estimate::sigma)
      .def("__repr__", [](const pdc::Estimate& e) {
        std::ostringstream os;
        os << "Estimate(" << e.value << " +- " << e.sigma << ")";
        return os.str();
      });
  py::class_<pdc::KlyshkoEstimate>(m, "KlyshkoEstimate")
      .def_readonly("eta_s", &pdc::KlyshkoEstimate::eta_s)
      .def_readonly("eta_i", &pdc::KlyshkoEstimate::eta_i);
  py::class_<pdc::CoincidenceRates>(m, "CoincidenceRates")
      .def_readonly("r_min", &pdc::CoincidenceRates::r_min)
      .def_readonly("r_max", &pdc::CoincidenceRates::r_max);

  py::enum_<pdc::GlauberOrder>(m, "GlauberOrder")
      .value("g10", pdc::GlauberOrder::g10)
      .value("g01", pdc::GlauberOrder::g01)
      .value("g20", pdc::GlauberOrder::g20)
      .value("g02", pdc::GlauberOrder::g02)
      .value("g11", pdc::GlauberOrder::g11);
  m.def("glauber", py::overload_cast<double, double, pdc::GlauberOrder>(&pdc::glauber), "effective_modes"_a,
        "mean_n"_a, "order"_a);
  m.def("coincidence_rates",
        py::overload_cast<double, double, double, double, double, double>(&pdc::coincidence_rates), "overlap"_a,
        "density_overlap"_a, "mean_n"_a, "eta1"_a, "eta2"_a, "effective_modes"_a = pdc::kInfiniteModes);
  m.def("visibility_from_rates", &pdc::visibility_from_rates, "rates"_a);
  m.def("visibility_full", &pdc::visibility_full, "overlap"_a, "mean_n"_a, "eta1"_a, "eta2"_a);
  m.def("visibility_approx", &pdc::visibility_approx, "overlap"_a, "mean_n"_a);
  m.def("klyshko", &pdc::klyshko, "record"_a);
  m.def("cross_correlation", &pdc::cross_correlation, "record"_a);
  m.def("mean_n_from_cross", &pdc::mean_n_from_cross, "record"_a);

  // ---- Monte Carlo ----
  py::enum_<pdc::SamplingMode>(m, "SamplingMode")
      .value("automatic", pdc::SamplingMode::automatic)
      .value("per_mode", pdc::SamplingMode::per_mode)
      .value("thermal_mixture", pdc::SamplingMode::thermal_mixture);

  py::class_<pdc::SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("schmidt_coefficients", &pdc::SimConfig::schmidt_coefficients)
      .def_readwrite("gain", &pdc::SimConfig::gain)
      .def_readwrite("detection", &pdc::SimConfig::detection)
      .def_readwrite("gates", &pdc::SimConfig::gates)
      .def_readwrite("seed", &pdc::SimConfig::seed)
      .def_readwrite("stream", &pdc::SimConfig::stream)
      .def_readwrite("laser_rep_rate", &pdc::SimConfig::laser_rep_rate)
      .def_readwrite("gate_divisor", &pdc::SimConfig::gate_divisor)
      .def_readwrite("sampling", &pdc::SimConfig::sampling)
      .def("gate_rate", &pdc::SimConfig::gate_rate);

  py::class_<pdc::SimResult>(m, "SimResult")
      .def_readonly("record", &pdc::SimResult::record)
      .def_readonly("sampling", &pdc::SimResult::sampling)
      .def_readonly("mean_n", &pdc::SimResult::mean_n)
      .def_readonly("effective_modes", &pdc::SimResult::effective_modes)
      .def_readonly("warnings", &pdc::SimResult::warnings);

  py::class_<pdc::SweepRow>(m, "SweepRow")
      .def_readonly("power", &pdc::SweepRow::power)
      .def_readonly("mean_n_true", &pdc::SweepRow::mean_n_true)
      .def_readonly("record", &pdc::SweepRow::record)
      .def_readonly("ratio_s", &pdc::SweepRow::ratio_s)
      .def_readonly("ratio_i", &pdc::SweepRow::ratio_i)
      .def_readonly("mean_n", &pdc::SweepRow::mean_n);

  m.def("simulate", &pdc::simulate, "config"_a, py::call_guard<py::gil_scoped_release>());
  m.def("flat_spectrum", &pdc::flat_spectrum, "modes"_a);
  m.def("gain_for_mean_n", &pdc::gain_for_mean_n, "coefficients"_a, "mean_n"_a);
  m.def("efficiency_sweep", &pdc::efficiency_sweep, "config"_a, "powers"_a, "gain_sq_per_power"_a,
        py::call_guard<py::gil_scoped_release>());
  m.def("extrapolate_klyshko", &pdc::extrapolate_klyshko, "rows"_a);

  // ---- fitting ----
  py::class_<pdc::VisibilityPoint>(m, "VisibilityPoint")
      .def(py::init([](double n, double v, double s) { return pdc::VisibilityPoint{n, v, s}; }), "mean_n"_a,
           "visibility"_a, "sigma"_a)
      .def_readwrite("mean_n", &pdc::VisibilityPoint::mean_n)
      .def_readwrite("visibility", &pdc::VisibilityPoint::visibility)
      .def_readwrite("sigma", &pdc::VisibilityPoint::sigma);

  py::class_<pdc::VisibilityModel> model(m, "VisibilityModel");
  py::enum_<pdc::VisibilityModel::Kind>(model, "Kind")
      .value("approx", pdc::VisibilityModel::Kind::approx)
      .value("full", pdc::VisibilityModel::Kind::full);
  model.def(py::init<>())
      .def_static("approximate", &pdc::VisibilityModel::approximate)
      .def_static("full", &pdc::VisibilityModel::full, "eta_ratio"_a = std::nullopt)
      .def_readwrite("kind", &pdc::VisibilityModel::kind)
      .def_readwrite("eta_ratio", &pdc::VisibilityModel::eta_ratio)
      .def_readwrite("max_eta_ratio", &pdc::VisibilityModel::max_eta_ratio)
      .def_readwrite("max_iterations", &pdc::VisibilityModel::max_iterations)
      .def("evaluate", &pdc::VisibilityModel::evaluate, "overlap"_a, "mean_n"_a, "ratio"_a = 1.0);

  py::class_<pdc::FitReport>(m, "FitReport")
      .def_readonly("overlap", &pdc::FitReport::overlap)
      .def_readonly("sigma_overlap", &pdc::FitReport::sigma_overlap)
      .def_readonly("eta_ratio", &pdc::FitReport::eta_ratio)
      .def_readonly("sigma_eta_ratio", &pdc::FitReport::sigma_eta_ratio)
      .def_readonly("chi_square", &pdc::FitReport::chi_square)
      .def_readonly("dof", &pdc::FitReport::dof)
      .def_readonly("residuals", &pdc::FitReport::residuals)
      .def_readonly("at_boundary", &pdc::FitReport::at_boundary)
      .def_readonly("iterations", &pdc::FitReport::iterations);

  m.def("fit_overlap", &pdc::fit_overlap, "points"_a, "model"_a = pdc::VisibilityModel::approximate());
  m.def("linear_fit", &pdc::linear_fit, "x"_a, "y"_a, "sigma"_a = std::vector<double>{});
  py::class_<pdc::LinearFit>(m, "LinearFit")
      .def_readonly("slope", &pdc::LinearFit::slope)
      .def_readonly("intercept", &pdc::LinearFit::intercept)
      .def_readonly("sigma_slope", &pdc::LinearFit::sigma_slope)
      .def_readonly("sigma_intercept", &pdc::LinearFit::sigma_intercept)
      .def_readonly("r_squared", &pdc::LinearFit::r_squared)
      .def_readonly("chi_square", &pdc::LinearFit::chi_square);

  // ---- configuration ----
  py::class_<pdc::Config>(m, "Config")
      .def_static("load", &pdc::Config::load, "path"_a)
      .def_static(
          "parse",
          [](const std::string& text, const std::string& source) {
            std::istringstream in(text);
            return pdc::Config::parse(in, source);
          },
          "text"_a, "source"_a = "<string>")
      .def("set", &pdc::Config::set, "section"_a, "key"_a, "value"_a)
      .def("has", &pdc::Config::has, "section"_a, "key"_a)
      .def("text", &pdc::Config::text, "section"_a, "key"_a)
      .def("number", &pdc::Config::number, "section"_a, "key"_a)
      .def_property_readonly("source", &pdc::Config::source);

  m.def("device_from_config", &pdc::device_from_config, "config"_a);
  m.def("pump_from_config", &pdc::pump_from_config, "config"_a, "device"_a);
  m.def("approximation_from_config", &pdc::approximation_from_config, "config"_a);
  m.def("grid_from_config", &pdc::grid_from_config, "config"_a, "filtered"_a = false);
  m.def("filter_preset", &pdc::filter_preset, "name"_a, "config"_a);
  m.def("detection_from_config", &pdc::detection_from_config, "config"_a);
  m.def("sim_from_config", &pdc::sim_from_config, "config"_a, "spectrum"_a = std::nullopt);
}
