#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdc/dispersion.hpp"
#include "pdc/fit.hpp"
#include "pdc/jsa.hpp"
#include "pdc/montecarlo.hpp"

namespace pdc {

/// Sectioned key-value file:
///
///     # comment
///     [device]
///     length_um = 1750
///
/// Keys are validated against a fixed vocabulary; every diagnostic names
/// the source line. Values set from the command line report line 0.
class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static Config parse(std::istream& in, const std::string& source = "<input>");
  static Config load(const std::string& path);

  void set(const std::string& section, const std::string& key, const std::string& value);
  bool has(const std::string& section, const std::string& key) const;

  std::optional<std::string> text(const std::string& section, const std::string& key) const;
  std::optional<double> number(const std::string& section, const std::string& key) const;
  std::optional<long long> integer(const std::string& section, const std::string& key) const;
  std::optional<std::vector<double>> numbers(const std::string& section, const std::string& key) const;

  double require_number(const std::string& section, const std::string& key) const;

  /// Effective configuration as "# [section] key = value" lines.
  void echo(std::ostream& out, const std::string& prefix = "# ") const;

  const std::string& source() const { return source_; }

 private:
  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& why) const;
  const Entry* find(const std::string& section, const std::string& key) const;

  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

/// Named filter presets: "none", "g12" (12 nm Gaussian), "sg40" (40 nm
/// super-Gaussian), "custom" (the [filter] section).
std::optional<FilterSpec> filter_preset(const std::string& name, const Config& cfg);

DeviceSpec device_from_config(const Config& cfg);
PumpSpec pump_from_config(const Config& cfg, const DeviceSpec& device);
PmApproximation approximation_from_config(const Config& cfg);
/// Grid for unfiltered (`filtered` = false) or filtered studies.
FrequencyGrid grid_from_config(const Config& cfg, bool filtered);
std::optional<FilterSpec> filter_from_config(const Config& cfg, const DeviceSpec& device);
DetectionSpec detection_from_config(const Config& cfg);
VisibilityModel fit_model_from_config(const Config& cfg);

/// Simulation settings. The Schmidt spectrum is a flat K-mode spectrum
/// unless `spectrum` is given by the caller (e.g. from a decomposed JSA).
SimConfig sim_from_config(const Config& cfg, std::optional<std::vector<double>> spectrum = std::nullopt);

/// Degeneracy wavelength of the signal axis (nm), used for nm <-> rad/ps widths.
double signal_center_nm(const DeviceSpec& device);

}  // namespace pdc
