#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fixtures.hpp"
#include "pdc/schmidt.hpp"

using fixtures::kind_of;
using pdc::ErrorKind;
using pdc::FrequencyGrid;
using pdc::JointAmplitude;
using cplx = std::complex<double>;

namespace {

Eigen::VectorXcd hermite_gauss(const FrequencyGrid& g, double width, int order) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(g.n_s));
  for (std::size_t j = 0; j < g.n_s; ++j) {
    const double x = g.nu_s(j) / width;
    const double h = order == 0 ? 1.0 : order == 1 ? 2.0 * x : 4.0 * x * x - 2.0;
    v(static_cast<Eigen::Index>(j)) = h * std::exp(-0.5 * x * x);
  }
  return v / std::sqrt(v.squaredNorm() * g.step_s());
}

// Correlated JSA small enough for quick decompositions.
JointAmplitude correlated(std::size_t n = 256) {
  const auto d = fixtures::reference_device(500.0);
  return pdc::build_jsa(d, pdc::PumpSpec{3.0}, FrequencyGrid::square(n, 40.0), pdc::PmApproximation::gaussian);
}

JointAmplitude random_complex(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) v(r, c) = cplx(nd(rng), nd(rng));
  }
  return JointAmplitude(FrequencyGrid::square(n, 2.0), v, false).renormalized();
}

cplx brute_overlap(const JointAmplitude& f) {
  cplx sum = 0.0;
  const auto& v = f.values();
  for (Eigen::Index s = 0; s < v.rows(); ++s) {
    for (Eigen::Index i = 0; i < v.cols(); ++i) sum += v(s, i) * std::conj(v(i, s));
  }
  return sum * f.grid().cell_area();
}

double brute_density_overlap(const JointAmplitude& f) {
  const auto& v = f.values();
  const Eigen::Index n = v.rows();
  const double d = f.grid().step_s();
  cplx sum = 0.0;
  for (Eigen::Index w = 0; w < n; ++w) {
    for (Eigen::Index wp = 0; wp < n; ++wp) {
      cplx gs = 0.0;
      cplx gi = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        gs += std::conj(v(w, k)) * v(wp, k) * d;  // g_s(w, w')
        gi += std::conj(v(k, wp)) * v(k, w) * d;  // g_i(w', w)
      }
      sum += gs * gi * d * d;
    }
  }
  return sum.real();
}

}  // namespace

TEST_SUITE("schmidt") {
  TEST_CASE("separable input has a single mode") {
    const auto g = FrequencyGrid::square(128, 10.0);
    const Eigen::MatrixXcd v = hermite_gauss(g, 1.3, 0) * hermite_gauss(g, 2.2, 0).transpose();
    const auto s = pdc::decompose(JointAmplitude(g, v, false).renormalized());
    CHECK(s.rank() == 1);
    CHECK(s.effective_modes == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("two-term input recovers its weights") {
    const auto g = FrequencyGrid::square(128, 10.0);
    const Eigen::MatrixXcd v = std::sqrt(0.8) * hermite_gauss(g, 1.3, 0) * hermite_gauss(g, 2.0, 0).transpose() +
                               std::sqrt(0.2) * hermite_gauss(g, 1.3, 2) * hermite_gauss(g, 2.0, 1).transpose();
    const auto s = pdc::decompose(JointAmplitude(g, v, false).renormalized());
    REQUIRE(s.rank() == 2);
    CHECK(s.coefficients[0] == doctest::Approx(std::sqrt(0.8)).epsilon(1e-9));
    CHECK(s.coefficients[1] == doctest::Approx(std::sqrt(0.2)).epsilon(1e-9));
    CHECK(s.effective_modes == doctest::Approx(1.0 / 0.68).epsilon(1e-9));
  }

  TEST_CASE("decomposition invariants on a correlated JSA") {
    const auto f = correlated();
    const auto s = pdc::decompose(f);
    double sum = 0.0;
    for (std::size_t k = 0; k < s.rank(); ++k) {
      sum += s.coefficients[k] * s.coefficients[k];
      if (k) CHECK(s.coefficients[k] <= s.coefficients[k - 1]);
    }
    CHECK(sum + s.truncation_residual == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(sum - 1.0) <= 1e-6);
    CHECK(s.effective_modes >= 1.0);
    CHECK(s.effective_modes > 2.0);

    const double d = f.grid().step_s();
    const auto r = static_cast<Eigen::Index>(s.rank());
    const Eigen::MatrixXcd gram_s = s.signal_modes.adjoint() * s.signal_modes * d;
    const Eigen::MatrixXcd gram_i = s.idler_modes.adjoint() * s.idler_modes * d;
    CHECK((gram_s - Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((gram_i - Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-6);

    // Reconstruction error equals the discarded weight.
    Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(f.values().rows(), f.values().cols());
    for (Eigen::Index k = 0; k < r; ++k) {
      rebuilt += s.coefficients[static_cast<std::size_t>(k)] * s.signal_modes.col(k) * s.idler_modes.col(k).transpose();
    }
    const double err2 = (f.values() - rebuilt).squaredNorm() * f.grid().cell_area();
    CHECK(err2 <= pdc::kDefaultDiscardedWeight);
    CHECK(err2 == doctest::Approx(s.truncation_residual).epsilon(1e-6).scale(1e-12));
  }

  TEST_CASE("decompose rejects unnormalized input and bad cutoffs") {
    const auto g = FrequencyGrid::square(8, 1.0);
    CHECK(kind_of([&] { pdc::decompose(JointAmplitude(g, Eigen::MatrixXcd::Ones(8, 8), false)); }) ==
          ErrorKind::contract);
    CHECK(kind_of([&] { pdc::decompose(random_complex(8, 1), 1.5); }) == ErrorKind::contract);
  }

  TEST_CASE("effective mode number") {
    CHECK(pdc::effective_mode_number({0.5, 0.5, 0.5, 0.5}) == doctest::Approx(4.0));
    CHECK(pdc::effective_mode_number({2.0, 2.0}) == doctest::Approx(2.0));
    CHECK(kind_of([] { pdc::effective_mode_number({}); }) == ErrorKind::contract);
  }

  TEST_CASE("gain and mean photon number") {
    const std::vector<double> l{std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2)};
    const pdc::GainSpec g{0.01};
    CHECK(g.mean_photon_number(l) == doctest::Approx(1e-4).epsilon(1e-4));
    const pdc::GainSpec big{1.2};
    double expected = 0.0;
    for (double x : l) expected += std::pow(std::sinh(1.2 * x), 2);
    CHECK(big.mean_photon_number(l) == doctest::Approx(expected));
    CHECK(big.squeezing(l)[1] == doctest::Approx(1.2 * std::sqrt(0.3)));
    CHECK(kind_of([&] { pdc::GainSpec{-1.0}.mean_photon_number(l); }) == ErrorKind::contract);
  }

  TEST_CASE("overlap of a swap-symmetric JSA is one") {
    const auto f = pdc::build_jsa(fixtures::symmetric_device(), pdc::PumpSpec{2.0}, FrequencyGrid::square(256, 30.0),
                                  pdc::PmApproximation::gaussian);
    CHECK(std::abs(pdc::spectral_overlap(f) - 1.0) < 1e-9);
  }

  TEST_CASE("overlap matches a direct double sum and is bounded") {
    for (unsigned seed : {1u, 2u, 3u}) {
      const auto f = random_complex(24, seed);
      const cplx o = pdc::spectral_overlap(f);
      CHECK(std::abs(o - brute_overlap(f)) < 1e-12);
      CHECK(std::abs(o) <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("overlap needs a square grid") {
    const JointAmplitude f(FrequencyGrid{4, 5, 1.0, 1.0}, Eigen::MatrixXcd::Ones(4, 5), false);
    CHECK(kind_of([&] { pdc::spectral_overlap(f); }) == ErrorKind::shape);
    CHECK(kind_of([&] { pdc::density_overlap(f); }) == ErrorKind::shape);
    const JointAmplitude g(FrequencyGrid{4, 4, 1.0, 2.0}, Eigen::MatrixXcd::Ones(4, 4), false);
    CHECK(kind_of([&] { pdc::spectral_overlap(g); }) == ErrorKind::shape);
  }

  TEST_CASE("Schmidt-basis overlaps agree with the grid integrals") {
    const auto f = correlated();
    const auto s = pdc::decompose(f, 0.0);
    CHECK(std::abs(pdc::spectral_overlap_schmidt(s) - pdc::spectral_overlap(f)) < 1e-10);
    CHECK(pdc::density_overlap_schmidt(s) == doctest::Approx(pdc::density_overlap(f)).epsilon(1e-9));
    const auto t = pdc::decompose(f);
    CHECK(std::abs(pdc::spectral_overlap_schmidt(t) - pdc::spectral_overlap(f)) < 1e-3);
  }

  TEST_CASE("density overlap matches the defining integrals") {
    for (unsigned seed : {4u, 5u}) {
      const auto f = random_complex(12, seed);
      const double a = pdc::density_overlap(f);
      CHECK(a == doctest::Approx(brute_density_overlap(f)).epsilon(1e-12));
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
    }
    const auto g = FrequencyGrid::square(64, 6.0);
    const Eigen::MatrixXcd v = hermite_gauss(g, 1.1, 0) * hermite_gauss(g, 1.1, 0).transpose();
    CHECK(pdc::density_overlap(JointAmplitude(g, v, false).renormalized()) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("delayed overlap equals the overlap of a phase-shifted JSA") {
    const auto f = correlated(192);
    const double tau = 0.37;
    Eigen::MatrixXcd shifted = f.values();
    for (Eigen::Index r = 0; r < shifted.rows(); ++r) {
      shifted.row(r) *= std::polar(1.0, f.grid().nu_s(static_cast<std::size_t>(r)) * tau);
    }
    const cplx direct = pdc::spectral_overlap(JointAmplitude(f.grid(), shifted, true));
    CHECK(std::abs(pdc::delayed_overlap(f, tau) - direct) < 1e-12);
  }

  TEST_CASE("delay compensation of a symmetric JSA leaves it unchanged") {
    const auto f = pdc::build_jsa(fixtures::symmetric_device(), pdc::PumpSpec{2.0}, FrequencyGrid::square(256, 30.0),
                                  pdc::PmApproximation::gaussian);
    const auto d = pdc::delay_compensated_overlap(f, -1.0, 1.0);
    CHECK(std::abs(d.tau) < 1e-4);
    CHECK(d.overlap == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("delay compensation removes an added linear phase") {
    const auto base = pdc::build_jsa(fixtures::symmetric_device(), pdc::PumpSpec{2.0}, FrequencyGrid::square(256, 30.0),
                                     pdc::PmApproximation::gaussian);
    const double tau0 = 0.23;
    Eigen::MatrixXcd v = base.values();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      v.row(r) *= std::polar(1.0, base.grid().nu_s(static_cast<std::size_t>(r)) * tau0);
    }
    const JointAmplitude f(base.grid(), v, true);
    CHECK(std::abs(pdc::spectral_overlap(f)) < 0.9);
    const auto d = pdc::delay_compensated_overlap(f, -1.0, 1.0);
    CHECK(d.tau == doctest::Approx(-tau0).epsilon(1e-3));
    CHECK(d.overlap == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("delay range must be a valid interval") {
    const auto f = random_complex(8, 9);
    CHECK(kind_of([&] { pdc::delay_compensated_overlap(f, 1.0, 1.0); }) == ErrorKind::range);
    CHECK(kind_of([&] { pdc::delay_compensated_overlap(f, 1.0, -1.0); }) == ErrorKind::range);
    CHECK(kind_of([&] { pdc::delay_compensated_overlap(f, -INFINITY, 1.0); }) == ErrorKind::range);
  }

  TEST_CASE("default delay range covers the device group delay") {
    const auto [lo, hi] = pdc::default_delay_range(fixtures::reference_device());
    CHECK(hi == doctest::Approx(3.0 * 1750.0 * 0.04e-3));
    CHECK(lo == -hi);
    const auto [lo2, hi2] = pdc::default_delay_range(fixtures::symmetric_device());
    CHECK(lo2 == -0.1);
    CHECK(hi2 == 0.1);
  }
}
