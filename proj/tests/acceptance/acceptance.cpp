// Acceptance runner: one PASS/FAIL line per criterion on the bundled study
// configuration; exits nonzero if any criterion fails.

#include <exception>
#include <iostream>

#include "pdc/error.hpp"
#include "pdc/report.hpp"

namespace rep = pdc::report;

int main() {
  using Check = rep::Criterion (*)(const rep::Study&, const rep::Options&);
  const Check checks[] = {rep::unfiltered_overlap,    rep::compensated_overlap, rep::filtered_overlaps,
                          rep::jsi_geometry,          rep::visibility_identities, rep::estimator_oracles,
                          rep::fit_round_trip,        rep::schmidt_properties};

  rep::Options opt;
  opt.progress = &std::cerr;
  const rep::Study study = rep::Study::from_config(pdc::Config::load(PDCSIM_CONFIG));

  int failures = 0;
  int id = 0;
  for (Check check : checks) {
    ++id;
    rep::Criterion c;
    try {
      c = check(study, opt);
    } catch (const std::exception& e) {
      c.id = id;
      c.title = "aborted";
      c.passed = false;
      c.details.push_back(std::string("error: ") + e.what());
    }
    failures += c.passed ? 0 : 1;
    std::cout << rep::format(c) << std::flush;
  }
  std::cout << (failures == 0 ? "all criteria passed" : "criteria failed: " + std::to_string(failures)) << "\n";
  return failures == 0 ? 0 : 1;
}
