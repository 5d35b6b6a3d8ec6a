// pdcsim: command-line front end. Every command renders its full output into
// memory first and writes it only on success.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pdc/config.hpp"
#include "pdc/error.hpp"
#include "pdc/fit.hpp"
#include "pdc/io.hpp"
#include "pdc/jsa.hpp"
#include "pdc/montecarlo.hpp"
#include "pdc/report.hpp"
#include "pdc/schmidt.hpp"
#include "pdc/twinstats.hpp"
#include "pdc/units.hpp"

#ifndef PDCSIM_DEFAULT_CONFIG
#define PDCSIM_DEFAULT_CONFIG "configs/waveguide.cfg"
#endif

namespace {

using pdc::Config;
using pdc::Error;
using pdc::ErrorKind;

constexpr const char* kThreadsVar = "PDCSIM_THREADS";

struct Sink {
  std::string path;  // empty: stdout
  std::ostringstream buffer;
};

// Writes all buffered outputs; files are written only after every command step succeeded.
void commit(std::vector<Sink*> sinks) {
  for (Sink* s : sinks) {
    if (s->path.empty()) continue;
    std::ofstream f(s->path);
    if (!f) throw Error(ErrorKind::config, "cannot write '" + s->path + "'");
    f << s->buffer.str();
    if (!f) throw Error(ErrorKind::config, "failed writing '" + s->path + "'");
  }
  for (Sink* s : sinks) {
    if (s->path.empty()) std::cout << s->buffer.str() << std::flush;
  }
}

void apply_threads() {
  const char* env = std::getenv(kThreadsVar);
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw Error(ErrorKind::usage, std::string(kThreadsVar) + " must be a positive integer");
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(n));
#endif
}

std::string header(const std::string& command, const std::string& model, const Config* cfg) {
  std::ostringstream os;
  os << "# pdcsim " << command << "\n";
  if (!model.empty()) os << "# model: " << model << "\n";
  if (cfg) {
    os << "# effective config (" << cfg->source() << "):\n";
    cfg->echo(os, "#   ");
  }
  return os.str();
}

// "N" or "N:span_thz".
void apply_grid_flag(Config& cfg, const std::string& grid, bool filtered) {
  if (grid.empty()) return;
  const auto colon = grid.find(':');
  cfg.set("grid", "points", grid.substr(0, colon));
  if (colon != std::string::npos) cfg.set("grid", filtered ? "filtered_span_thz" : "span_thz", grid.substr(colon + 1));
  (void)cfg.integer("grid", "points");
}

struct Spectral {
  std::string config_path = PDCSIM_DEFAULT_CONFIG;
  std::string filter = "none";
  std::string grid;
  std::string approx;
};

void add_spectral_options(CLI::App* cmd, Spectral& s) {
  cmd->add_option("config", s.config_path, "Config file")->capture_default_str();
  cmd->add_option("--filter", s.filter, "Band-pass filter")
      ->check(CLI::IsMember({"none", "g12", "sg40", "custom"}))
      ->capture_default_str();
  cmd->add_option("--grid", s.grid, "Grid points per axis, optionally N:half-span-THz");
  cmd->add_option("--approx", s.approx, "Phasematching function")->check(CLI::IsMember({"gaussian", "sinc"}));
}

struct Prepared {
  Config cfg;
  pdc::DeviceSpec device;
  pdc::JointAmplitude jsa;
  std::optional<pdc::FilteredJsa> filtered;
};

Prepared prepare(const Spectral& s) {
  Config cfg = Config::load(s.config_path);
  const bool filtered = s.filter != "none";
  if (!s.approx.empty()) cfg.set("device", "approximation", s.approx);
  apply_grid_flag(cfg, s.grid, filtered);
  const pdc::DeviceSpec device = pdc::device_from_config(cfg);
  const pdc::PumpSpec pump = pdc::pump_from_config(cfg, device);
  const auto filter = pdc::filter_preset(s.filter, cfg);
  pdc::JointAmplitude jsa =
      pdc::build_jsa(device, pump, pdc::grid_from_config(cfg, filtered), pdc::approximation_from_config(cfg));
  std::optional<pdc::FilteredJsa> f;
  if (filter) {
    f = pdc::apply_filter(jsa, *filter);
    if (f->renormalization_flagged) {
      std::cerr << "warning: filter transmits only " << f->transmitted_fraction
                << " of the pairs; the renormalized JSA is dominated by tails\n";
    }
    jsa = f->jsa;
  }
  return {std::move(cfg), device, std::move(jsa), std::move(f)};
}

std::vector<double> parse_sweep(const std::string& text) {
  // "lo:hi:count" or comma-separated values.
  std::vector<double> out;
  const auto to_d = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::usage, "bad number '" + s + "' in sweep '" + text + "'");
    }
  };
  const auto c1 = text.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw Error(ErrorKind::usage, "sweep must be lo:hi:count");
    const double lo = to_d(text.substr(0, c1));
    const double hi = to_d(text.substr(c1 + 1, c2 - c1 - 1));
    const double count = to_d(text.substr(c2 + 1));
    if (count < 1 || count != std::floor(count)) throw Error(ErrorKind::usage, "sweep count must be a positive integer");
    const auto n = static_cast<int>(count);
    for (int j = 0; j < n; ++j) out.push_back(n == 1 ? lo : lo + (hi - lo) * j / (n - 1));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_d(item));
  if (out.empty()) throw Error(ErrorKind::usage, "empty sweep");
  return out;
}

// ---- commands ----

struct JsaArgs {
  Spectral spectral;
  std::string dump;
  std::string marginals;
  std::string cut;
  std::string diag_cut;
};

void run_jsa(const JsaArgs& a) {
  Prepared p = prepare(a.spectral);
  const double center_nm = pdc::signal_center_nm(p.device);
  const std::string head = header("jsa", "f = pump(nu_s + nu_i) * pm(dk) / norm, dk to second order", &p.cfg);

  Sink summary;
  Sink dump{a.dump, {}};
  Sink marg{a.marginals, {}};
  Sink cut{a.cut, {}};
  Sink diag{a.diag_cut, {}};
  std::vector<Sink*> sinks{&summary};

  const double line = pdc::jsi_linewidth(p.jsa, pdc::CutAxis::antidiagonal);
  const auto m = pdc::marginals(p.jsa);
  const auto axis_s = p.jsa.grid().axis_s();
  const auto axis_i = p.jsa.grid().axis_i();
  auto& out = summary.buffer;
  out << head << std::setprecision(8) << "quantity,value,unit\n";
  out << "antidiagonal_linewidth," << pdc::units::rad_per_ps_width_to_nm(line, center_nm) << ",nm\n";
  out << "antidiagonal_linewidth," << line << ",rad/ps\n";
  try {
    const double extent = pdc::jsi_linewidth(p.jsa, pdc::CutAxis::diagonal);
    out << "diagonal_extent," << pdc::units::rad_per_ps_width_to_nm(extent, center_nm) << ",nm\n";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::range) throw;
    out << "# diagonal extent exceeds the grid\n";
  }
  out << "signal_marginal_fwhm," << pdc::units::rad_per_ps_width_to_nm(pdc::fwhm(axis_s, m.signal), center_nm)
      << ",nm\n";
  out << "idler_marginal_fwhm," << pdc::units::rad_per_ps_width_to_nm(pdc::fwhm(axis_i, m.idler), center_nm)
      << ",nm\n";
  out << "signal_center," << pdc::units::wavelength_nm(p.device.signal_center + pdc::centroid(axis_s, m.signal))
      << ",nm\n";
  out << "idler_center," << pdc::units::wavelength_nm(p.device.idler_center + pdc::centroid(axis_i, m.idler))
      << ",nm\n";
  out << "pm_tilt_deviation," << pdc::pm_tilt_deviation(p.device) << ",deg\n";
  if (p.filtered) out << "transmitted_fraction," << p.filtered->transmitted_fraction << ",\n";

  if (!a.dump.empty()) {
    pdc::io::write_grid(dump.buffer, p.jsa, head);
    sinks.push_back(&dump);
  }
  if (!a.marginals.empty()) {
    pdc::io::write_marginals(marg.buffer, p.jsa, p.device.signal_center, p.device.idler_center, head);
    sinks.push_back(&marg);
  }
  if (!a.cut.empty()) {
    pdc::io::write_cut(cut.buffer, p.jsa, pdc::CutAxis::antidiagonal, head);
    sinks.push_back(&cut);
  }
  if (!a.diag_cut.empty()) {
    pdc::io::write_cut(diag.buffer, p.jsa, pdc::CutAxis::diagonal, head);
    sinks.push_back(&diag);
  }
  commit(sinks);
}

struct OverlapArgs {
  Spectral spectral;
  bool compensate = false;
  std::vector<double> tau_range;
};

void run_overlap(const OverlapArgs& a) {
  Prepared p = prepare(a.spectral);
  Sink out;
  out.buffer << header("overlap", "O = sum f(s, i) conj(f(i, s)) dnu_s dnu_i", &p.cfg);
  out.buffer << std::setprecision(10) << "quantity,value\n";
  const auto o = pdc::spectral_overlap(p.jsa);
  out.buffer << "overlap_abs," << std::abs(o) << "\n";
  out.buffer << "overlap_re," << o.real() << "\noverlap_im," << o.imag() << "\n";
  if (p.filtered) out.buffer << "transmitted_fraction," << p.filtered->transmitted_fraction << "\n";
  if (a.compensate) {
    auto [lo, hi] = pdc::default_delay_range(p.device);
    if (!a.tau_range.empty()) {
      lo = a.tau_range[0];
      hi = a.tau_range[1];
    }
    const auto d = pdc::delay_compensated_overlap(p.jsa, lo, hi);
    out.buffer << "compensated_overlap," << d.overlap << "\n";
    out.buffer << "optimal_delay_ps," << d.tau << "\n";
  }
  commit({&out});
}

struct SchmidtArgs {
  Spectral spectral;
  double cutoff = pdc::kDefaultDiscardedWeight;
  std::string modes;
  std::size_t mode_count = 5;
};

void run_schmidt(const SchmidtArgs& a) {
  Prepared p = prepare(a.spectral);
  const pdc::SchmidtData data = pdc::decompose(p.jsa, a.cutoff);
  const std::string head =
      header("schmidt", "f = sum_k lambda_k phi_k(s) psi_k(i), K = 1 / sum lambda_k^4", &p.cfg);
  std::ostringstream summary;
  summary << std::setprecision(8) << "K = " << data.effective_modes << "\nrank = " << data.rank()
          << "\noverlap (grid) = " << std::abs(pdc::spectral_overlap(p.jsa))
          << "\noverlap (Schmidt basis) = " << std::abs(pdc::spectral_overlap_schmidt(data))
          << "\ndensity overlap A = " << pdc::density_overlap_schmidt(data) << "\n";
  Sink spectrum;
  pdc::io::write_schmidt_spectrum(spectrum.buffer, data, head + pdc::io::comment_block(summary.str()));
  Sink modes{a.modes, {}};
  std::vector<Sink*> sinks{&spectrum};
  if (!a.modes.empty()) {
    pdc::io::write_modes(modes.buffer, data, a.mode_count, head);
    sinks.push_back(&modes);
  }
  commit(sinks);
}

struct VisibilityArgs {
  double overlap = 1.0;
  std::string mean_n = "0:0.5:11";
  double eta1 = 1.0;
  double eta2 = 1.0;
  double sigma = 0.0;
  std::optional<std::uint64_t> noise_seed;
  std::optional<double> modes;
  double density_overlap = 0.0;
  std::string output;
};

void run_visibility(const VisibilityArgs& a) {
  const auto ns = parse_sweep(a.mean_n);
  if (a.sigma < 0.0) throw Error(ErrorKind::usage, "--sigma must be non-negative");
  std::vector<pdc::VisibilityPoint> pts;
  std::mt19937_64 rng(a.noise_seed.value_or(0));
  std::normal_distribution<double> noise(0.0, a.sigma > 0.0 ? a.sigma : 1.0);
  for (double n : ns) {
    double v = 0.0;
    if (a.modes) {
      v = pdc::visibility_from_rates(
          pdc::coincidence_rates(a.overlap, a.density_overlap, n, a.eta1, a.eta2, *a.modes));
    } else {
      v = pdc::visibility_full(a.overlap, n, a.eta1, a.eta2);
    }
    if (a.noise_seed && a.sigma > 0.0) v += noise(rng);
    pts.push_back({n, v, a.sigma});
  }
  std::ostringstream h;
  h << header("visibility",
              a.modes ? "(R_max - R_min) / (R_max + R_min) with K modes"
                      : "V = ((1 + O) + n (1 - q)) / ((3 - O) + 3 n + n q), q = (eta1/eta2 + eta2/eta1) / 2",
              nullptr)
    << "# overlap = " << a.overlap << ", eta1 = " << a.eta1 << ", eta2 = " << a.eta2;
  if (a.modes) h << ", K = " << *a.modes << ", A = " << a.density_overlap;
  if (a.noise_seed) h << ", gaussian noise sigma = " << a.sigma << " seed " << *a.noise_seed;
  h << "\n";
  Sink out{a.output, {}};
  pdc::io::write_visibility_points(out.buffer, pts, h.str());
  commit({&out});
}

struct MonteCarloArgs {
  std::string config_path = PDCSIM_DEFAULT_CONFIG;
  std::optional<long long> seed;
  std::optional<double> gates;
  std::optional<double> mean_n;
  std::optional<long long> modes;
  bool sweep = false;
  std::string output;
};

void run_montecarlo(const MonteCarloArgs& a) {
  Config cfg = Config::load(a.config_path);
  if (a.seed) cfg.set("sim", "seed", std::to_string(*a.seed));
  if (a.gates) {
    std::ostringstream g;
    g << std::setprecision(17) << *a.gates;
    cfg.set("sim", "gates", g.str());
  }
  if (a.mean_n) {
    std::ostringstream m;
    m << std::setprecision(17) << *a.mean_n;
    cfg.set("sim", "mean_n", m.str());
  }
  if (a.modes) cfg.set("sim", "modes", std::to_string(*a.modes));
  const pdc::SimConfig sim = pdc::sim_from_config(cfg);
  const std::string model = "thermal pair statistics per Schmidt mode, binomial click detection, Bernoulli darks";

  std::ostringstream report;
  report << std::setprecision(8);
  std::vector<pdc::CountRecord> records;
  if (a.sweep) {
    const auto powers = cfg.numbers("sim", "powers");
    const auto k = cfg.number("sim", "gain_sq_per_power");
    if (!powers || !k) throw Error(ErrorKind::config, a.config_path + ": sweep needs sim.powers and sim.gain_sq_per_power");
    std::cerr << "simulating " << powers->size() << " sweep points x " << sim.gates << " gates\n";
    const auto rows = pdc::efficiency_sweep(sim, *powers, *k);
    report << "power,mean_n_true,C/S_s,sigma,C/S_i,sigma,n_from_C/A,sigma\n";
    for (const auto& r : rows) {
      records.push_back(r.record);
      report << r.power << ',' << r.mean_n_true << ',' << r.ratio_s.value << ',' << r.ratio_s.sigma << ','
             << r.ratio_i.value << ',' << r.ratio_i.sigma << ',' << r.mean_n.value << ',' << r.mean_n.sigma << '\n';
    }
    const auto est = pdc::extrapolate_klyshko(rows);
    report << "zero-power Klyshko eta_s = " << est.eta_s.value << " +- " << est.eta_s.sigma << "\n";
    report << "zero-power Klyshko eta_i = " << est.eta_i.value << " +- " << est.eta_i.sigma << "\n";
  } else {
    std::cerr << "simulating " << sim.gates << " gates\n";
    const pdc::SimResult r = pdc::simulate(sim);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    records.push_back(r.record);
    const auto k = pdc::klyshko(r.record);
    const auto ca = pdc::cross_correlation(r.record);
    report << "sampling = " << (r.sampling == pdc::SamplingMode::per_mode ? "per_mode" : "thermal_mixture") << "\n";
    report << "configured mean_n = " << r.mean_n << ", K = " << r.effective_modes << "\n";
    report << "Klyshko eta_s = C/S_i = " << k.eta_s.value << " +- " << k.eta_s.sigma << "\n";
    report << "Klyshko eta_i = C/S_s = " << k.eta_i.value << " +- " << k.eta_i.sigma << "\n";
    report << "C/A = " << ca.value << " +- " << ca.sigma << "\n";
    try {
      const auto n = pdc::mean_n_from_cross(r.record);
      report << "mean_n from C/A = " << n.value << " +- " << n.sigma << " (biased low by the 1/K term)\n";
    } catch (const Error& e) {
      report << "mean_n from C/A unavailable: " << e.what() << "\n";
    }
  }
  Sink out{a.output, {}};
  pdc::io::write_count_records(out.buffer, records,
                               header("montecarlo", model, &cfg) + pdc::io::comment_block(report.str()));
  commit({&out});
}

struct FitArgs {
  std::string points;
  std::string model = "approx";
  std::optional<double> eta_ratio;
  std::string output;
};

void run_fit(const FitArgs& a) {
  std::ifstream in(a.points);
  if (!in) throw Error(ErrorKind::config, "cannot open points file '" + a.points + "'");
  std::vector<pdc::VisibilityPoint> pts;
  try {
    pts = pdc::io::read_visibility_points(in);
  } catch (const Error& e) {
    throw Error(e.kind(), a.points + ": " + e.what());
  }
  pdc::VisibilityModel model =
      a.model == "full" ? pdc::VisibilityModel::full(a.eta_ratio) : pdc::VisibilityModel::approximate();
  const pdc::FitReport rep = pdc::fit_overlap(pts, model);
  std::ostringstream h;
  h << header("fit",
              a.model == "full" ? "V = ((1 + O) + n (1 - q)) / ((3 - O) + 3 n + n q)" : "V = (1 + O) / (3 - O + 4 n)",
              nullptr)
    << "# points: " << a.points << "\n";
  Sink out{a.output, {}};
  pdc::io::write_fit_report(out.buffer, rep, pts, h.str());
  commit({&out});
  std::cerr << pdc::io::fit_summary(rep);
}

struct ReportArgs {
  std::string config_path = PDCSIM_DEFAULT_CONFIG;
  std::uint64_t klyshko_gates = 40'000'000;
  std::uint64_t estimator_gates = 1'000'000;
};

int run_report(const ReportArgs& a) {
  const auto study = pdc::report::Study::from_config(Config::load(a.config_path));
  pdc::report::Options opt;
  opt.klyshko_gates = a.klyshko_gates;
  opt.estimator_gates = a.estimator_gates;
  opt.progress = &std::cerr;
  const auto results = pdc::report::run_all(study, opt);
  std::ostringstream out;
  int failed = 0;
  for (const auto& c : results) {
    out << pdc::report::format(c);
    failed += !c.passed;
  }
  out << (failed ? "FAILED " : "ALL PASSED ") << results.size() - failed << "/" << results.size() << "\n";
  std::cout << out.str() << std::flush;
  return failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis of pulsed type-II parametric downconversion"};
  app.require_subcommand(1);
  app.footer(std::string("Environment: ") + kThreadsVar +
             " sets the worker thread count.\nExit codes: 0 ok, 1 usage, 2 config, 3 numeric, 4 non-convergence.");

  JsaArgs jsa;
  auto* c_jsa = app.add_subcommand("jsa", "Build the JSA; print geometry summary, optionally dump grid/marginals");
  add_spectral_options(c_jsa, jsa.spectral);
  c_jsa->add_option("--dump", jsa.dump, "Write the complex grid dump to this file");
  c_jsa->add_option("--marginals", jsa.marginals, "Write marginal spectra CSV to this file");
  c_jsa->add_option("--cut", jsa.cut, "Write the anti-diagonal JSI cut CSV to this file");
  c_jsa->add_option("--diagonal-cut", jsa.diag_cut, "Write the diagonal JSI cut CSV to this file");

  OverlapArgs ov;
  auto* c_ov = app.add_subcommand("overlap", "Spectral overlap of signal and idler");
  add_spectral_options(c_ov, ov.spectral);
  c_ov->add_flag("--compensate-delay", ov.compensate, "Also maximize the overlap over a signal delay");
  c_ov->add_option("--tau-range", ov.tau_range, "Delay search interval in ps (lo hi)")->expected(2);

  SchmidtArgs sc;
  auto* c_sc = app.add_subcommand("schmidt", "Schmidt decomposition; writes the (k, lambda_k) spectrum");
  add_spectral_options(c_sc, sc.spectral);
  c_sc->add_option("--cutoff", sc.cutoff, "Discarded Schmidt weight")->capture_default_str();
  c_sc->add_option("--modes", sc.modes, "Write leading mode functions to this file");
  c_sc->add_option("--mode-count", sc.mode_count, "Number of modes to write")->capture_default_str();

  VisibilityArgs vis;
  auto* c_vis = app.add_subcommand("visibility", "Visibility versus mean photon number");
  c_vis->add_option("--overlap", vis.overlap, "Spectral overlap O")->required();
  c_vis->add_option("--mean-n", vis.mean_n, "lo:hi:count or comma list")->capture_default_str();
  c_vis->add_option("--eta1", vis.eta1, "Signal-arm efficiency")->capture_default_str();
  c_vis->add_option("--eta2", vis.eta2, "Idler-arm efficiency")->capture_default_str();
  c_vis->add_option("--modes", vis.modes, "Finite effective mode number K (rate model)");
  c_vis->add_option("--density-overlap", vis.density_overlap, "Density overlap A (with --modes)");
  c_vis->add_option("--sigma", vis.sigma, "Error bar written to sigma_V");
  c_vis->add_option("--noise-seed", vis.noise_seed, "Add Gaussian noise of --sigma with this seed");
  c_vis->add_option("-o,--output", vis.output, "Output file (default stdout)");

  MonteCarloArgs mc;
  auto* c_mc = app.add_subcommand("montecarlo", "Simulate gated click counts");
  c_mc->add_option("config", mc.config_path, "Config file")->capture_default_str();
  c_mc->add_option("--seed", mc.seed, "Random seed");
  c_mc->add_option("--gates", mc.gates, "Number of detector gates");
  c_mc->add_option("--mean-n", mc.mean_n, "Mean photon number per gate");
  c_mc->add_option("--modes", mc.modes, "Flat Schmidt spectrum with this many modes");
  c_mc->add_flag("--sweep", mc.sweep, "Pump-power sweep with zero-power Klyshko extrapolation");
  c_mc->add_option("-o,--output", mc.output, "Output file (default stdout)");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Fit the overlap to visibility data");
  c_fit->add_option("points", fit.points, "VisibilityPoint CSV (mean_n, V, sigma_V)")->required();
  c_fit->add_option("--model", fit.model, "Visibility model")
      ->check(CLI::IsMember({"approx", "full"}))
      ->capture_default_str();
  c_fit->add_option("--eta-ratio", fit.eta_ratio, "Fixed eta1/eta2 for the full model (fitted if omitted)");
  c_fit->add_option("-o,--output", fit.output, "Output file (default stdout)");

  ReportArgs rep;
  auto* c_rep = app.add_subcommand("report", "Run the acceptance checks on a study config");
  c_rep->add_option("config", rep.config_path, "Config file")->capture_default_str();
  c_rep->add_option("--klyshko-gates", rep.klyshko_gates, "Gates per Klyshko sweep point")->capture_default_str();
  c_rep->add_option("--estimator-gates", rep.estimator_gates, "Gates per C/A oracle cell")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    apply_threads();
    if (*c_jsa) run_jsa(jsa);
    if (*c_ov) run_overlap(ov);
    if (*c_sc) run_schmidt(sc);
    if (*c_vis) run_visibility(vis);
    if (*c_mc) run_montecarlo(mc);
    if (*c_fit) run_fit(fit);
    if (*c_rep) return run_report(rep);
  } catch (const Error& e) {
    std::cerr << "error (" << pdc::to_string(e.kind()) << "): " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
