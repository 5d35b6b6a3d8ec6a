#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "pdc/twinstats.hpp"

using fixtures::kind_of;
using pdc::ErrorKind;
using pdc::GlauberOrder;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Displayed full-visibility expression, written out independently.
double full_oracle(double o, double n, double e1, double e2) {
  const double r = 0.5 * (e1 / e2 + e2 / e1);
  return ((1.0 + o) + n * (1.0 - r)) / ((3.0 - o) + 3.0 * n + 0.5 * n * (e1 / e2 + e2 / e1));
}

}  // namespace

TEST_SUITE("twinstats") {
  TEST_CASE("Glauber moments") {
    CHECK(pdc::glauber(kInf, 0.5, GlauberOrder::g20) == doctest::Approx(0.25));
    CHECK(pdc::glauber(1.0, 0.5, GlauberOrder::g20) == doctest::Approx(0.5));
    CHECK(pdc::glauber(7.0, 0.3, GlauberOrder::g10) == 0.3);
    CHECK(pdc::glauber(7.0, 0.3, GlauberOrder::g01) == 0.3);
    CHECK(pdc::glauber(7.0, 0.3, GlauberOrder::g02) == doctest::Approx(0.09 * (1.0 + 1.0 / 7.0)));
    for (double k : {1.0, 3.0, 88.0, kInf}) {
      for (double n : {0.0, 0.01, 0.4, 2.0}) {
        CHECK(pdc::glauber(k, n, GlauberOrder::g11) - pdc::glauber(k, n, GlauberOrder::g20) == doctest::Approx(n));
      }
    }
    CHECK(kind_of([] { pdc::glauber(0.5, 0.1, GlauberOrder::g20); }) == ErrorKind::contract);
    CHECK(kind_of([] { pdc::glauber(2.0, 0.1, static_cast<GlauberOrder>(42)); }) == ErrorKind::contract);
  }

  TEST_CASE("Glauber moments from a Schmidt spectrum") {
    pdc::SchmidtData s;
    s.coefficients = {0.5, 0.5, 0.5, 0.5};
    s.effective_modes = 4.0;
    const pdc::GainSpec g{0.2};
    const double n = 4.0 * std::pow(std::sinh(0.1), 2);
    CHECK(pdc::glauber(s, g, GlauberOrder::g20) == doctest::Approx(n * n * 1.25));
  }

  TEST_CASE("perfect bunching and the classical limit") {
    const double n = 1e-9;
    const auto ideal = pdc::coincidence_rates(1.0, 0.0, n, 0.1, 0.1, kInf);
    CHECK(ideal.r_min / ideal.r_max < 1e-8);
    const auto classical = pdc::coincidence_rates(0.0, 0.0, n, 0.1, 0.1, kInf);
    CHECK(classical.r_min / classical.r_max == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(pdc::visibility_from_rates(classical) == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  }

  TEST_CASE("rates without interference are independent-arm statistics") {
    const double n = 0.2;
    const double k = 5.0;
    const double e1 = 0.3;
    const double e2 = 0.1;
    const auto r = pdc::coincidence_rates(0.0, 0.0, n, e1, e2, k);
    const double g20 = n * n * (1.0 + 1.0 / k);
    const double g11 = g20 + n;
    CHECK(r.r_min == doctest::Approx(0.25 * g20 * (e1 * e1 + e2 * e2) + 0.5 * g11 * e1 * e2));
    CHECK(r.r_max == doctest::Approx(g11 * e1 * e2));
  }

  TEST_CASE("imbalanced detection lowers the visibility") {
    const double n = 0.01;
    const double v = pdc::visibility_from_rates(pdc::coincidence_rates(1.0, 0.0, n, 0.2, 0.1, kInf));
    CHECK(v < 1.0);
    CHECK(v == doctest::Approx(full_oracle(1.0, n, 0.2, 0.1)).epsilon(1e-12));
    CHECK(v < pdc::visibility_full(1.0, n, 0.1, 0.1));
  }

  TEST_CASE("rate model with vanishing density overlap reproduces the full form") {
    for (double o : {0.0, 0.3, 0.816, 1.0}) {
      for (double n : {0.0, 0.05, 0.5}) {
        for (double ratio : {1.0, 1.5, 4.0}) {
          if (n == 0.0) continue;
          const double v = pdc::visibility_from_rates(pdc::coincidence_rates(o, 0.0, n, 0.05 * ratio, 0.05, kInf));
          CHECK(v == doctest::Approx(full_oracle(o, n, 0.05 * ratio, 0.05)).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("rates from Schmidt data") {
    pdc::SchmidtData s;
    s.coefficients = {std::sqrt(0.5), std::sqrt(0.5)};
    s.effective_modes = 2.0;
    const pdc::DetectionSpec det{0.2, 0.3, 1e6, 0.0};
    const auto a = pdc::coincidence_rates(s, pdc::GainSpec{0.3}, det, 0.7, 0.1);
    const auto b = pdc::coincidence_rates(0.7, 0.1, 2.0 * std::pow(std::sinh(0.3 * std::sqrt(0.5)), 2), 0.2, 0.3, 2.0);
    CHECK(a.r_min == doctest::Approx(b.r_min));
    CHECK(a.r_max == doctest::Approx(b.r_max));
    CHECK(kind_of([] { pdc::coincidence_rates(1.0, 0.0, 0.1, 0.0, 0.0, 2.0); }) == ErrorKind::degenerate);
  }

  TEST_CASE("visibility closed forms") {
    CHECK(pdc::visibility_full(1.0, 0.0, 0.06, 0.056) == 1.0);
    CHECK(pdc::visibility_full(0.0, 0.0, 0.06, 0.056) == 1.0 / 3.0);
    CHECK(pdc::visibility_approx(1.0, 0.0) == 1.0);
    CHECK(pdc::visibility_approx(0.0, 0.0) == 1.0 / 3.0);
    CHECK(pdc::visibility_approx(0.95, 0.0) == doctest::Approx(1.95 / 2.05));
    // V = 0.83 at O = 0.95 needs n = (1.95 / 0.83 - 2.05) / 4.
    const double n = (1.95 / 0.83 - 2.05) / 4.0;
    CHECK(n == doctest::Approx(0.0748).epsilon(1e-3));
    CHECK(pdc::visibility_approx(0.95, n) == doctest::Approx(0.83));
    for (double o : {0.2, 0.7}) {
      for (double n2 : {0.1, 0.4}) {
        CHECK(pdc::visibility_full(o, n2, 0.3, 0.1) == doctest::Approx(full_oracle(o, n2, 0.3, 0.1)).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("balanced full form equals the approximation on a grid") {
    for (int a = 0; a < 100; ++a) {
      for (int b = 0; b < 100; ++b) {
        const double o = a / 99.0;
        const double n = b / 99.0;
        CHECK(std::abs(pdc::visibility_full(o, n, 0.05, 0.05) - pdc::visibility_approx(o, n)) <= 1e-12);
      }
    }
  }

  TEST_CASE("approximate visibility is monotone") {
    for (int a = 0; a < 50; ++a) {
      for (int b = 0; b < 50; ++b) {
        const double o = a / 50.0;
        const double n = b / 50.0;
        CHECK(pdc::visibility_approx(o, n + 0.01) < pdc::visibility_approx(o, n));
        CHECK(pdc::visibility_approx(o + 0.01, n) > pdc::visibility_approx(o, n));
      }
    }
  }

  TEST_CASE("visibility input contracts") {
    CHECK(kind_of([] { pdc::visibility_approx(1.2, 0.1); }) == ErrorKind::contract);
    CHECK(kind_of([] { pdc::visibility_approx(0.5, -0.1); }) == ErrorKind::contract);
    CHECK(kind_of([] { pdc::visibility_full(0.5, 0.1, 0.0, 0.1); }) == ErrorKind::degenerate);
  }

  TEST_CASE("Klyshko efficiencies") {
    const pdc::CountRecord lossless{1000, 100, 100, 100, 1e6};
    const auto k = pdc::klyshko(lossless);
    CHECK(k.eta_s.value == 1.0);
    CHECK(k.eta_i.value == 1.0);

    const pdc::CountRecord rec{1000000, 20000, 25000, 1200, 1.19e6};
    const auto e = pdc::klyshko(rec);
    CHECK(e.eta_s.value == doctest::Approx(1200.0 / 25000.0));
    CHECK(e.eta_i.value == doctest::Approx(1200.0 / 20000.0));
    CHECK(e.eta_s.sigma == doctest::Approx(std::sqrt(0.048 * 0.952 / 25000.0)));

    const pdc::CountRecord scaled{10000000, 200000, 250000, 12000, 1.19e6};
    CHECK(pdc::klyshko(scaled).eta_s.value == doctest::Approx(e.eta_s.value).epsilon(1e-15));
    CHECK(pdc::klyshko(scaled).eta_i.value == doctest::Approx(e.eta_i.value).epsilon(1e-15));
    CHECK(kind_of([] { pdc::klyshko({100, 10, 0, 0, 1.0}); }) == ErrorKind::non_physical);
  }

  TEST_CASE("mean photon number from the cross-correlation") {
    const pdc::CountRecord rec{1000000, 10000, 10000, 300, 1.19e6};
    CHECK(rec.accidentals() == doctest::Approx(100.0));
    const auto ca = pdc::cross_correlation(rec);
    CHECK(ca.value == doctest::Approx(3.0));
    CHECK(ca.sigma == doctest::Approx(3.0 * std::sqrt(1.0 / 300 + 2.0 / 10000)));
    const auto n = pdc::mean_n_from_cross(rec);
    CHECK(n.value == doctest::Approx(0.5));
    CHECK(n.sigma == doctest::Approx(0.25 * ca.sigma));
    CHECK(kind_of([] { pdc::mean_n_from_cross({1000000, 10000, 10000, 100, 1.0}); }) == ErrorKind::non_physical);
    CHECK(kind_of([] { pdc::mean_n_from_cross({1000000, 10000, 10000, 90, 1.0}); }) == ErrorKind::non_physical);
  }

  TEST_CASE("count record invariants and accumulation") {
    CHECK(kind_of([] { pdc::CountRecord{10, 5, 3, 4, 1.0}.validate(); }) == ErrorKind::contract);
    CHECK(kind_of([] { pdc::CountRecord{10, 11, 3, 1, 1.0}.validate(); }) == ErrorKind::contract);
    CHECK(kind_of([] { pdc::CountRecord{10, 5, 3, 1, 0.0}.validate(); }) == ErrorKind::contract);
    pdc::CountRecord a{10, 5, 3, 1, 2.0};
    a += pdc::CountRecord{20, 1, 2, 1, 2.0};
    CHECK(a == pdc::CountRecord{30, 6, 5, 2, 2.0});
    CHECK(a.duration_s() == 15.0);
  }

  TEST_CASE("detection spec") {
    CHECK(pdc::DetectionSpec::dark_prob_from_rate(70.0, 76.2e6 / 64) == doctest::Approx(70.0 / 1190625.0));
    CHECK(kind_of([] { pdc::DetectionSpec{1.1, 0.5, 1.0, 0.0}.validate(); }) == ErrorKind::contract);
    CHECK(kind_of([] { pdc::DetectionSpec{0.1, 0.5, 0.0, 0.0}.validate(); }) == ErrorKind::contract);
    CHECK(kind_of([] { pdc::DetectionSpec{0.1, 0.5, 1.0, 1.0}.validate(); }) == ErrorKind::contract);
  }

  TEST_CASE("fringe curve endpoints and period") {
    pdc::FringeModel m;
    m.overlap = 0.8;
    m.mean_n = 0.1;
    m.eta1 = 0.06;
    m.eta2 = 0.05;
    m.splitting_angle_deg = 3.0;
    const auto r = pdc::coincidence_rates(0.8, 0.0, 0.1, 0.06, 0.05, kInf);
    const auto c = pdc::fringe_curve(m, {3.0, 25.5, 93.0, 115.5, 48.0});
    CHECK(c[0] == doctest::Approx(r.r_max).epsilon(1e-14));
    CHECK(c[1] == doctest::Approx(r.r_min).epsilon(1e-12));
    CHECK(c[2] == doctest::Approx(c[0]).epsilon(1e-12));
    CHECK(c[3] == doctest::Approx(c[1]).epsilon(1e-12));
    CHECK(c[4] == doctest::Approx(c[0]).epsilon(1e-12));  // 45 deg is another splitting orientation

    std::vector<double> angles;
    for (int j = 0; j <= 900; ++j) angles.push_back(j * 0.1);
    const auto curve = pdc::fringe_curve(m, angles);
    const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
    const double v = (*hi - *lo) / (*hi + *lo);
    CHECK(std::abs(v - pdc::visibility_full(0.8, 0.1, 0.06, 0.05)) <= 1e-12);
    for (double x : curve) CHECK(x >= *lo);
    CHECK(kind_of([&] { pdc::fringe_curve(m, {NAN}); }) == ErrorKind::contract);
  }
}
