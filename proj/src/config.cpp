#include "pdc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pdc/error.hpp"
#include "pdc/units.hpp"

namespace pdc {

namespace {

const std::map<std::string, std::set<std::string>>& vocabulary() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"device",
       {"length_um", "gamma", "pump_center_thz", "signal_center_thz", "idler_center_thz", "vg_p", "vg_s",
        "vg_i", "kappa_s", "kappa_i", "lambda_p", "lambda_s", "lambda_i", "approximation"}},
      {"pump", {"fwhm_nm", "center_nm", "sigma_rad_per_ps"}},
      {"grid", {"points", "span_thz", "filtered_span_thz"}},
      {"filter", {"shape", "bandwidth_nm", "center_thz", "order", "applies_to"}},
      {"detection", {"eta1", "eta2", "dark_rate_hz", "dark_prob"}},
      {"sim",
       {"gates", "seed", "stream", "gain", "mean_n", "laser_rep_hz", "gate_divisor", "sampling", "modes",
        "powers", "gain_sq_per_power"}},
      {"fit", {"model", "eta_ratio", "max_eta_ratio"}},
  };
  return keys;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::optional<double> parse_double(const std::string& s) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (is.fail()) return std::nullopt;
  is >> std::ws;
  if (!is.eof() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string section;
  std::string raw;
  int line = 0;
  const auto err = [&](const std::string& why) {
    throw Error(ErrorKind::config, source + ":" + std::to_string(line) + ": " + why);
  };
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string text = trim(raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') err("unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      if (!vocabulary().count(section)) err("unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) err("expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (section.empty()) err("key '" + key + "' outside a section");
    if (!vocabulary().at(section).count(key)) err("unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) err("empty value for '" + key + "'");
    auto& entries = cfg.sections_[section];
    if (entries.count(key)) {
      err("duplicate key '" + key + "' (first on line " + std::to_string(entries[key].line) + ")");
    }
    entries[key] = {value, line};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file '" + path + "'");
  return parse(in, path);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  const auto sec = vocabulary().find(section);
  if (sec == vocabulary().end() || !sec->second.count(key)) {
    throw Error(ErrorKind::config, "unknown setting " + section + "." + key);
  }
  sections_[section][key] = {value, 0};
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto sec = sections_.find(section);
  if (sec == sections_.end()) return nullptr;
  const auto it = sec->second.find(key);
  return it == sec->second.end() ? nullptr : &it->second;
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key); }

void Config::fail(const std::string& section, const std::string& key, const std::string& why) const {
  const Entry* e = find(section, key);
  const std::string where =
      e && e->line > 0 ? source_ + ":" + std::to_string(e->line) : std::string("command line");
  throw Error(ErrorKind::config, where + ": " + section + "." + key + ": " + why);
}

std::optional<std::string> Config::text(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  return e->value;
}

std::optional<double> Config::number(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  const auto v = parse_double(e->value);
  if (!v) fail(section, key, "not a number: '" + e->value + "'");
  return v;
}

std::optional<long long> Config::integer(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  long long v = 0;
  const char* first = e->value.data();
  const char* last = first + e->value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    // Accept integral values written in exponent form, e.g. 1e6.
    const auto d = parse_double(e->value);
    if (!d || *d != std::floor(*d) || std::abs(*d) > 9e18) fail(section, key, "not an integer: '" + e->value + "'");
    return static_cast<long long>(*d);
  }
  return v;
}

std::optional<std::vector<double>> Config::numbers(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  std::vector<double> out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(trim(item));
    if (!v) fail(section, key, "not a number list: '" + e->value + "'");
    out.push_back(*v);
  }
  if (out.empty()) fail(section, key, "empty list");
  return out;
}

double Config::require_number(const std::string& section, const std::string& key) const {
  const auto v = number(section, key);
  if (!v) throw Error(ErrorKind::config, source_ + ": missing required key " + section + "." + key);
  return *v;
}

void Config::echo(std::ostream& out, const std::string& prefix) const {
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, entry] : entries) {
      out << prefix << section << "." << key << " = " << entry.value << "\n";
    }
  }
}

double signal_center_nm(const DeviceSpec& device) { return units::wavelength_nm(device.signal_center); }

DeviceSpec device_from_config(const Config& cfg) {
  DeviceSpec d;
  d.length_um = cfg.require_number("device", "length_um");
  d.gamma = cfg.number("device", "gamma").value_or(0.193);
  d.pump_center = units::thz_to_rad_per_ps(cfg.require_number("device", "pump_center_thz"));
  const auto signal_thz = cfg.number("device", "signal_center_thz");
  const auto idler_thz = cfg.number("device", "idler_center_thz");
  if (signal_thz) {
    d.signal_center = units::thz_to_rad_per_ps(*signal_thz);
  } else if (idler_thz) {
    d.signal_center = d.pump_center - units::thz_to_rad_per_ps(*idler_thz);
  } else {
    d.signal_center = 0.5 * d.pump_center;
  }
  d.idler_center = idler_thz ? units::thz_to_rad_per_ps(*idler_thz) : d.pump_center - d.signal_center;

  d.pump.group_velocity = cfg.number("device", "vg_p");
  d.signal.group_velocity = cfg.number("device", "vg_s");
  d.idler.group_velocity = cfg.number("device", "vg_i");
  const auto kappa = [&](const char* key, const std::optional<double>& vg) {
    if (const auto k = cfg.number("device", key)) return *k;
    if (vg && d.pump.group_velocity) return 1.0 / *vg - 1.0 / *d.pump.group_velocity;
    throw Error(ErrorKind::config, cfg.source() + ": need device." + key + " or both group velocities");
  };
  d.signal.kappa = kappa("kappa_s", d.signal.group_velocity);
  d.idler.kappa = kappa("kappa_i", d.idler.group_velocity);
  d.pump.lambda_coeff = cfg.require_number("device", "lambda_p");
  d.signal.lambda_coeff = cfg.require_number("device", "lambda_s");
  d.idler.lambda_coeff = cfg.require_number("device", "lambda_i");
  try {
    d.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, cfg.source() + ": invalid device: " + e.what());
  }
  return d;
}

PumpSpec pump_from_config(const Config& cfg, const DeviceSpec& device) {
  PumpSpec p;
  if (const auto sigma = cfg.number("pump", "sigma_rad_per_ps")) {
    p.sigma = *sigma;
  } else {
    const double center = cfg.number("pump", "center_nm").value_or(units::wavelength_nm(device.pump_center));
    const double fwhm = cfg.require_number("pump", "fwhm_nm");
    if (!(fwhm > 0.0) || !(center > 0.0)) throw Error(ErrorKind::config, cfg.source() + ": pump widths must be positive");
    p = PumpSpec::from_fwhm_nm(fwhm, center);
  }
  if (!(p.sigma > 0.0)) throw Error(ErrorKind::config, cfg.source() + ": pump width must be positive");
  return p;
}

PmApproximation approximation_from_config(const Config& cfg) {
  const std::string a = cfg.text("device", "approximation").value_or("gaussian");
  if (a == "gaussian") return PmApproximation::gaussian;
  if (a == "sinc") return PmApproximation::sinc;
  throw Error(ErrorKind::config, cfg.source() + ": device.approximation must be gaussian or sinc, got '" + a + "'");
}

FrequencyGrid grid_from_config(const Config& cfg, bool filtered) {
  const long long points = cfg.integer("grid", "points").value_or(2048);
  if (points < 2) throw Error(ErrorKind::config, cfg.source() + ": grid.points must be >= 2");
  const double span_thz = filtered ? cfg.number("grid", "filtered_span_thz").value_or(6.0)
                                   : cfg.number("grid", "span_thz").value_or(14.5);
  if (!(span_thz > 0.0)) throw Error(ErrorKind::config, cfg.source() + ": grid spans must be positive");
  return FrequencyGrid::square(static_cast<std::size_t>(points), units::thz_to_rad_per_ps(span_thz));
}

std::optional<FilterSpec> filter_from_config(const Config& cfg, const DeviceSpec& device) {
  const std::string shape = cfg.text("filter", "shape").value_or("none");
  if (shape == "none") return std::nullopt;
  FilterSpec f;
  if (shape == "gaussian") {
    f.shape = FilterShape::gaussian;
  } else if (shape == "supergaussian") {
    f.shape = FilterShape::supergaussian;
  } else if (shape == "rectangular") {
    f.shape = FilterShape::rectangular;
  } else {
    throw Error(ErrorKind::config, cfg.source() + ": unknown filter.shape '" + shape + "'");
  }
  f.bandwidth = units::nm_width_to_rad_per_ps(cfg.require_number("filter", "bandwidth_nm"), signal_center_nm(device));
  f.center = units::thz_to_rad_per_ps(cfg.number("filter", "center_thz").value_or(0.0));
  f.order = static_cast<int>(cfg.integer("filter", "order").value_or(4));
  const std::string axes = cfg.text("filter", "applies_to").value_or("both");
  if (axes == "both") {
    f.applies_to = FilterAxes::both;
  } else if (axes == "signal") {
    f.applies_to = FilterAxes::signal;
  } else if (axes == "idler") {
    f.applies_to = FilterAxes::idler;
  } else {
    throw Error(ErrorKind::config, cfg.source() + ": filter.applies_to must be both, signal or idler");
  }
  try {
    f.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, cfg.source() + ": invalid filter: " + e.what());
  }
  return f;
}

std::optional<FilterSpec> filter_preset(const std::string& name, const Config& cfg) {
  if (name == "none") return std::nullopt;
  const DeviceSpec device = device_from_config(cfg);
  if (name == "custom") {
    auto f = filter_from_config(cfg, device);
    if (!f) throw Error(ErrorKind::config, cfg.source() + ": --filter custom needs a [filter] section with a shape");
    return f;
  }
  FilterSpec f;
  if (name == "g12") {
    f.shape = FilterShape::gaussian;
    f.order = 1;
    f.bandwidth = units::nm_width_to_rad_per_ps(12.0, signal_center_nm(device));
  } else if (name == "sg40") {
    f.shape = FilterShape::supergaussian;
    f.order = static_cast<int>(cfg.integer("filter", "order").value_or(4));
    f.bandwidth = units::nm_width_to_rad_per_ps(40.0, signal_center_nm(device));
  } else {
    throw Error(ErrorKind::usage, "unknown filter '" + name + "' (none, g12, sg40, custom)");
  }
  f.validate();
  return f;
}

DetectionSpec detection_from_config(const Config& cfg) {
  DetectionSpec d;
  d.eta1 = cfg.require_number("detection", "eta1");
  d.eta2 = cfg.require_number("detection", "eta2");
  const double rep = cfg.number("sim", "laser_rep_hz").value_or(76.2e6);
  const long long divisor = cfg.integer("sim", "gate_divisor").value_or(64);
  if (divisor < 1 || !(rep > 0.0)) throw Error(ErrorKind::config, cfg.source() + ": invalid gate timing");
  d.gate_rate = rep / static_cast<double>(divisor);
  if (const auto p = cfg.number("detection", "dark_prob")) {
    d.dark_prob = *p;
  } else {
    d.dark_prob = DetectionSpec::dark_prob_from_rate(cfg.number("detection", "dark_rate_hz").value_or(0.0), d.gate_rate);
  }
  try {
    d.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, cfg.source() + ": invalid detection: " + e.what());
  }
  return d;
}

VisibilityModel fit_model_from_config(const Config& cfg) {
  const std::string model = cfg.text("fit", "model").value_or("approx");
  VisibilityModel m;
  if (model == "approx") {
    m.kind = VisibilityModel::Kind::approx;
  } else if (model == "full") {
    m.kind = VisibilityModel::Kind::full;
    m.eta_ratio = cfg.number("fit", "eta_ratio");
    m.max_eta_ratio = cfg.number("fit", "max_eta_ratio").value_or(10.0);
  } else {
    throw Error(ErrorKind::config, cfg.source() + ": fit.model must be approx or full, got '" + model + "'");
  }
  return m;
}

SimConfig sim_from_config(const Config& cfg, std::optional<std::vector<double>> spectrum) {
  SimConfig s;
  s.detection = detection_from_config(cfg);
  if (spectrum) {
    s.schmidt_coefficients = std::move(*spectrum);
  } else {
    const long long modes = cfg.integer("sim", "modes").value_or(1);
    if (modes < 1) throw Error(ErrorKind::config, cfg.source() + ": sim.modes must be >= 1");
    s.schmidt_coefficients = flat_spectrum(static_cast<std::size_t>(modes));
  }
  const long long gates = cfg.integer("sim", "gates").value_or(1000000);
  const long long seed = cfg.integer("sim", "seed").value_or(1);
  const long long stream = cfg.integer("sim", "stream").value_or(0);
  if (gates < 1) throw Error(ErrorKind::config, cfg.source() + ": sim.gates must be >= 1");
  if (seed < 0 || stream < 0 || stream > 0xffffffffLL) {
    throw Error(ErrorKind::config, cfg.source() + ": sim.seed and sim.stream must be non-negative");
  }
  s.gates = static_cast<std::uint64_t>(gates);
  s.seed = static_cast<std::uint64_t>(seed);
  s.stream = static_cast<std::uint32_t>(stream);
  s.laser_rep_rate = cfg.number("sim", "laser_rep_hz").value_or(76.2e6);
  s.gate_divisor = static_cast<unsigned>(cfg.integer("sim", "gate_divisor").value_or(64));

  const auto gain = cfg.number("sim", "gain");
  const auto mean_n = cfg.number("sim", "mean_n");
  if (gain && mean_n) throw Error(ErrorKind::config, cfg.source() + ": give sim.gain or sim.mean_n, not both");
  if (gain) {
    s.gain = *gain;
  } else {
    s.gain = gain_for_mean_n(s.schmidt_coefficients, mean_n.value_or(0.1));
  }

  const std::string sampling = cfg.text("sim", "sampling").value_or("auto");
  if (sampling == "auto") {
    s.sampling = SamplingMode::automatic;
  } else if (sampling == "per_mode") {
    s.sampling = SamplingMode::per_mode;
  } else if (sampling == "thermal") {
    s.sampling = SamplingMode::thermal_mixture;
  } else {
    throw Error(ErrorKind::config, cfg.source() + ": sim.sampling must be auto, per_mode or thermal");
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, cfg.source() + ": invalid simulation: " + e.what());
  }
  return s;
}

}  // namespace pdc
