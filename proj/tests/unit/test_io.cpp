#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "pdc/io.hpp"

using fixtures::kind_of;
using pdc::ErrorKind;

namespace {

pdc::JointAmplitude random_jsa(std::size_t ns, std::size_t ni) {
  const pdc::FrequencyGrid g{ns, ni, 3.0, 2.5};
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Random(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ni));
  return pdc::JointAmplitude(g, v, false).renormalized();
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("grid dump round trip is exact") {
    const auto jsa = random_jsa(7, 5);
    std::stringstream buf;
    pdc::io::write_grid(buf, jsa, "config line one\nconfig line two");
    const std::string text = buf.str();
    CHECK(text.rfind("# pdcsim grid v1\n", 0) == 0);
    CHECK(text.find("# config line two\n") != std::string::npos);
    const auto back = pdc::io::read_grid(buf);
    CHECK(back.grid().n_s == 7);
    CHECK(back.grid().n_i == 5);
    CHECK(back.grid().span_s == jsa.grid().span_s);
    CHECK(back.grid().span_i == jsa.grid().span_i);
    CHECK(back.normalized());
    CHECK(back.values() == jsa.values());
  }

  TEST_CASE("malformed grid dumps") {
    std::istringstream no_shape("# pdcsim grid v1\n1 2\n");
    CHECK(kind_of([&] { pdc::io::read_grid(no_shape); }) == ErrorKind::config);
    std::istringstream truncated("# n_s 2 span_s 1 n_i 2 span_i 1\n1 0 1 0\n");
    CHECK(kind_of([&] { pdc::io::read_grid(truncated); }) == ErrorKind::config);
    std::istringstream short_row("# n_s 2 span_s 1 n_i 2 span_i 1\n1 0 1 0\n1 0 1\n");
    CHECK(kind_of([&] { pdc::io::read_grid(short_row); }) == ErrorKind::config);
  }

  TEST_CASE("count records round trip") {
    const std::vector<pdc::CountRecord> recs = {{1000000, 5000, 4000, 300, 1190625.0}, {10, 0, 0, 0, 2.5}};
    std::stringstream buf;
    pdc::io::write_count_records(buf, recs, "seed = 1");
    CHECK(buf.str().find("gates,S_s,S_i,C,R\n") != std::string::npos);
    CHECK(pdc::io::read_count_records(buf) == recs);
  }

  TEST_CASE("malformed count records") {
    const auto read = [](const std::string& text) {
      std::istringstream in(text);
      return pdc::io::read_count_records(in);
    };
    CHECK(kind_of([&] { read("gates,S_s,S_i,C,R\n10,5,5,1\n"); }) == ErrorKind::config);
    CHECK(kind_of([&] { read("gates,S_s,S_i,C,R\n10,5,x,1,1\n"); }) == ErrorKind::config);
    CHECK(kind_of([&] { read("gates,S_s,S_i,C,R\n10,5,5.5,1,1\n"); }) == ErrorKind::config);
    CHECK(kind_of([&] { read("gates,S_s,S_i,C,R\n10,5,4,6,1\n"); }) == ErrorKind::config);
    CHECK(kind_of([&] { read("10,5,4,1,1e6x\n"); }) == ErrorKind::config);
    try {
      read("# c\ngates,S_s,S_i,C,R\n10,5,4,1,1\n10,-5,4,1,1\n");
      FAIL("expected an error");
    } catch (const pdc::Error& e) {
      CHECK(std::string(e.what()).find("line 4") == 0);
    }
    CHECK(read("# only comments\n").empty());
  }

  TEST_CASE("visibility points round trip") {
    const std::vector<pdc::VisibilityPoint> pts = {{0.05, 0.9123456789012345, 0.01}, {0.5, 0.61, 0.02}};
    std::stringstream buf;
    pdc::io::write_visibility_points(buf, pts);
    const auto back = pdc::io::read_visibility_points(buf);
    REQUIRE(back.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(back[k].mean_n == pts[k].mean_n);
      CHECK(back[k].visibility == pts[k].visibility);
      CHECK(back[k].sigma == pts[k].sigma);
    }
    std::istringstream headerless("0.1,0.8,0.01\n0.2,0.7,0.01\n");
    CHECK(pdc::io::read_visibility_points(headerless).size() == 2);
    std::istringstream bad("mean_n,V,sigma_V\n0.1,0.8\n");
    CHECK(kind_of([&] { pdc::io::read_visibility_points(bad); }) == ErrorKind::config);
  }

  TEST_CASE("Schmidt spectrum and fit report tables") {
    pdc::SchmidtData s;
    s.coefficients = {0.75, 0.5};
    s.effective_modes = 2.0;
    std::ostringstream spec;
    pdc::io::write_schmidt_spectrum(spec, s);
    CHECK(spec.str().find("k,lambda_k\n0,0.75\n1,0.5\n") != std::string::npos);

    pdc::FitReport r;
    r.overlap = 0.75;
    r.sigma_overlap = 0.0078125;
    r.dof = 1;
    r.residuals = {0.125, -0.25};
    const std::vector<pdc::VisibilityPoint> pts = {{0.5, 0.875, 0.015625}, {0.25, 0.625, 0.015625}};
    std::ostringstream rep;
    pdc::io::write_fit_report(rep, r, pts);
    CHECK(rep.str().find("overlap,0.75,0.0078125\n") != std::string::npos);
    CHECK(rep.str().find("mean_n,V,sigma_V,residual\n0.5,0.875,0.015625,0.125\n0.25,0.625,0.015625,-0.25\n") != std::string::npos);
    CHECK(pdc::io::fit_summary(r).find("statistical") != std::string::npos);
    r.at_boundary = true;
    CHECK(pdc::io::fit_summary(r).find("boundary") != std::string::npos);
  }

  TEST_CASE("marginals and cuts are tabulated per node") {
    const auto jsa = random_jsa(9, 9);
    std::ostringstream m;
    pdc::io::write_marginals(m, jsa, fixtures::kTwoPi * 193.3, fixtures::kTwoPi * 193.3);
    std::istringstream in(m.str());
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0]))) ++rows;
    }
    CHECK(rows == 9);
    std::ostringstream cut;
    pdc::io::write_cut(cut, jsa, pdc::CutAxis::antidiagonal);
    CHECK(cut.str().find("path_rad_per_ps,detuning_s_rad_per_ps,detuning_i_rad_per_ps,jsi") != std::string::npos);
  }

  TEST_CASE("comment block") {
    CHECK(pdc::io::comment_block("a\n# b\nc") == "# a\n# b\n# c\n");
  }
}
