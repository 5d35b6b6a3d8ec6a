#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdc/config.hpp"
#include "pdc/jsa.hpp"

namespace pdc::report {

/// Device, pump and grids resolved from a study config.
struct Study {
  Config config;
  DeviceSpec device;
  PumpSpec pump;
  PmApproximation approximation = PmApproximation::gaussian;
  FrequencyGrid wide;      // unfiltered studies
  FrequencyGrid filtered;  // filtered studies

  static Study from_config(const Config& cfg);
};

struct Options {
  std::uint64_t estimator_gates = 1'000'000;  // per (n, eta, K) cell
  std::uint64_t klyshko_gates = 40'000'000;   // per sweep point
  std::uint64_t seed = 20240611;
  int fit_seeds = 100;
  std::ostream* progress = nullptr;
};

struct Criterion {
  int id = 0;
  std::string title;
  bool passed = false;
  std::vector<std::string> details;  // measured values against targets
};

Criterion unfiltered_overlap(const Study& study, const Options& opt);
Criterion compensated_overlap(const Study& study, const Options& opt);
Criterion filtered_overlaps(const Study& study, const Options& opt);
Criterion jsi_geometry(const Study& study, const Options& opt);
Criterion visibility_identities(const Study& study, const Options& opt);
Criterion estimator_oracles(const Study& study, const Options& opt);
Criterion fit_round_trip(const Study& study, const Options& opt);
Criterion schmidt_properties(const Study& study, const Options& opt);

/// All criteria in order.
std::vector<Criterion> run_all(const Study& study, const Options& opt);

/// "PASS 3 filtered overlaps: ..." followed by indented details.
std::string format(const Criterion& c);

}  // namespace pdc::report
