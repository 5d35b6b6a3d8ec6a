#include "pdc/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "pdc/error.hpp"
#include "pdc/units.hpp"

namespace pdc::io {

namespace {

constexpr int kPrecision = 17;

void put_header(std::ostream& out, const std::string& header) {
  if (!header.empty()) out << comment_block(header);
}

// Splits a CSV data line; returns false for comments, blanks and column headers.
bool data_fields(const std::string& line, std::vector<double>& fields, std::size_t expected, int line_no) {
  fields.clear();
  if (line.empty() || line[0] == '#') return false;
  std::stringstream ss(line);
  std::string item;
  bool numeric = true;
  std::vector<std::string> items;
  while (std::getline(ss, item, ',')) items.push_back(item);
  if (items.empty()) return false;
  for (const auto& s : items) {
    std::istringstream is(s);
    double v = 0.0;
    is >> v;
    if (!is.fail() && !is.eof()) is >> std::ws;
    if (is.fail() || !is.eof()) {
      numeric = false;
      break;
    }
    fields.push_back(v);
  }
  if (!numeric) {
    if (fields.empty()) return false;  // column header
    throw Error(ErrorKind::config, "line " + std::to_string(line_no) + ": non-numeric field");
  }
  if (fields.size() != expected) {
    throw Error(ErrorKind::config, "line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                                       " columns, found " + std::to_string(fields.size()));
  }
  return true;
}

}  // namespace

std::string comment_block(const std::string& text) {
  std::ostringstream out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out << (line.rfind("#", 0) == 0 ? "" : "# ") << line << "\n";
  return out.str();
}

void write_grid(std::ostream& out, const JointAmplitude& jsa, const std::string& header) {
  const FrequencyGrid& g = jsa.grid();
  out << "# pdcsim grid v1\n";
  put_header(out, header);
  out << "# rows: signal detuning, columns: idler detuning, nodes at -span + j*2*span/(n-1)\n";
  out << "# units: detuning rad/ps, amplitude (rad/ps)^-1\n";
  out << std::setprecision(kPrecision);
  out << "# n_s " << g.n_s << " span_s " << g.span_s << " n_i " << g.n_i << " span_i " << g.span_i << "\n";
  out << "# normalized " << (jsa.normalized() ? 1 : 0) << " norm " << jsa.norm_squared() << "\n";
  const auto& v = jsa.values();
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      if (c) out << ' ';
      out << v(r, c).real() << ' ' << v(r, c).imag();
    }
    out << '\n';
  }
}

JointAmplitude read_grid(std::istream& in) {
  std::string line;
  FrequencyGrid g;
  int normalized = 0;
  bool have_shape = false;
  int line_no = 0;
  while (in.peek() == '#' && std::getline(in, line)) {
    ++line_no;
    std::istringstream is(line.substr(1));
    std::string tag;
    is >> tag;
    if (tag == "n_s") {
      std::string a, b, c;
      is >> g.n_s >> a >> g.span_s >> b >> g.n_i >> c >> g.span_i;
      have_shape = !is.fail();
    } else if (tag == "normalized") {
      is >> normalized;
    }
  }
  if (!have_shape) throw Error(ErrorKind::config, "grid dump lacks the shape header");
  g.validate();
  Eigen::MatrixXcd values(static_cast<Eigen::Index>(g.n_s), static_cast<Eigen::Index>(g.n_i));
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    if (!std::getline(in, line)) throw Error(ErrorKind::config, "grid dump truncated at row " + std::to_string(r));
    std::istringstream is(line);
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      double re = 0.0;
      double im = 0.0;
      if (!(is >> re >> im)) {
        throw Error(ErrorKind::config, "grid dump row " + std::to_string(r) + " is short");
      }
      values(r, c) = {re, im};
    }
  }
  return JointAmplitude(g, std::move(values), normalized != 0);
}

void write_modes(std::ostream& out, const SchmidtData& data, std::size_t count, const std::string& header) {
  count = std::min(count, data.rank());
  out << "# pdcsim modes v1\n";
  put_header(out, header);
  out << "# per mode: '# mode k lambda', then signal row and idler row of \"re im\" pairs (rad/ps)^-1/2\n";
  out << std::setprecision(kPrecision);
  out << "# n_s " << data.grid.n_s << " span_s " << data.grid.span_s << " n_i " << data.grid.n_i << " span_i "
      << data.grid.span_i << "\n";
  for (std::size_t k = 0; k < count; ++k) {
    out << "# mode " << k << " " << data.coefficients[k] << "\n";
    for (const Eigen::MatrixXcd* m : {&data.signal_modes, &data.idler_modes}) {
      const auto col = m->col(static_cast<Eigen::Index>(k));
      for (Eigen::Index j = 0; j < col.size(); ++j) {
        if (j) out << ' ';
        out << col(j).real() << ' ' << col(j).imag();
      }
      out << '\n';
    }
  }
}

void write_marginals(std::ostream& out, const JointAmplitude& jsa, double signal_center, double idler_center,
                     const std::string& header) {
  const Marginals m = marginals(jsa);
  const FrequencyGrid& g = jsa.grid();
  put_header(out, header);
  out << "# marginal spectra: integral of |f|^2 over the partner axis, per rad/ps\n";
  out << "index,detuning_s_rad_per_ps,wavelength_s_nm,density_s,detuning_i_rad_per_ps,wavelength_i_nm,density_i\n";
  out << std::setprecision(kPrecision);
  const std::size_t n = std::max(g.n_s, g.n_i);
  for (std::size_t j = 0; j < n; ++j) {
    out << j;
    if (j < g.n_s) {
      out << ',' << g.nu_s(j) << ',' << units::wavelength_nm(signal_center + g.nu_s(j)) << ','
          << m.signal[j] / g.step_s();
    } else {
      out << ",,,";
    }
    if (j < g.n_i) {
      out << ',' << g.nu_i(j) << ',' << units::wavelength_nm(idler_center + g.nu_i(j)) << ','
          << m.idler[j] / g.step_i();
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

void write_cut(std::ostream& out, const JointAmplitude& jsa, CutAxis axis, const std::string& header) {
  const FrequencyGrid& g = jsa.grid();
  put_header(out, header);
  const double sign = axis == CutAxis::antidiagonal ? 1.0 : -1.0;
  out << "# JSI cut through the origin along nu_i = " << (sign > 0 ? "" : "-")
      << "nu_s; path coordinate sqrt(2)*nu_s in rad/ps\n";
  out << "path_rad_per_ps,detuning_s_rad_per_ps,detuning_i_rad_per_ps,jsi\n";
  out << std::setprecision(kPrecision);
  for (std::size_t j = 0; j < g.n_s; ++j) {
    const double nu_s = g.nu_s(j);
    const double pos = (sign * nu_s + g.span_i) / g.step_i();
    if (pos < -1e-9 || pos > static_cast<double>(g.n_i - 1) + 1e-9) continue;
    const double clamped = std::clamp(pos, 0.0, static_cast<double>(g.n_i - 1));
    auto lo = static_cast<std::size_t>(std::floor(clamped));
    if (lo == g.n_i - 1) lo = g.n_i - 2;
    const double w = clamped - static_cast<double>(lo);
    const auto r = static_cast<Eigen::Index>(j);
    const double v = (1.0 - w) * std::norm(jsa.values()(r, static_cast<Eigen::Index>(lo))) +
                     w * std::norm(jsa.values()(r, static_cast<Eigen::Index>(lo + 1)));
    out << std::sqrt(2.0) * nu_s << ',' << nu_s << ',' << sign * nu_s << ',' << v << '\n';
  }
}

void write_schmidt_spectrum(std::ostream& out, const SchmidtData& data, const std::string& header) {
  put_header(out, header);
  out << "# Schmidt coefficients lambda_k (dimensionless), sum lambda_k^2 = 1 - discarded weight\n";
  out << std::setprecision(kPrecision);
  out << "# K = " << data.effective_modes << ", discarded weight = " << data.truncation_residual << "\n";
  out << "k,lambda_k\n";
  for (std::size_t k = 0; k < data.rank(); ++k) out << k << ',' << data.coefficients[k] << '\n';
}

void write_count_records(std::ostream& out, const std::vector<CountRecord>& records, const std::string& header) {
  put_header(out, header);
  out << "# counts per run; R is the gate rate in Hz, accidentals A = S_s S_i / gates\n";
  out << "gates,S_s,S_i,C,R\n";
  out << std::setprecision(kPrecision);
  for (const auto& r : records) {
    out << r.gates << ',' << r.singles_s << ',' << r.singles_i << ',' << r.coincidences << ',' << r.gate_rate << '\n';
  }
}

std::vector<CountRecord> read_count_records(std::istream& in) {
  std::vector<CountRecord> out;
  std::string line;
  std::vector<double> f;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!data_fields(line, f, 5, line_no)) continue;
    for (int k = 0; k < 4; ++k) {
      if (f[k] < 0.0 || f[k] != std::floor(f[k])) {
        throw Error(ErrorKind::config, "line " + std::to_string(line_no) + ": counts must be non-negative integers");
      }
    }
    CountRecord r{static_cast<std::uint64_t>(f[0]), static_cast<std::uint64_t>(f[1]),
                  static_cast<std::uint64_t>(f[2]), static_cast<std::uint64_t>(f[3]), f[4]};
    try {
      r.validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::config, "line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(r);
  }
  return out;
}

void write_visibility_points(std::ostream& out, const std::vector<VisibilityPoint>& points,
                             const std::string& header) {
  put_header(out, header);
  out << "# fringe visibility V versus mean photon number per gate\n";
  out << "mean_n,V,sigma_V\n";
  out << std::setprecision(kPrecision);
  for (const auto& p : points) out << p.mean_n << ',' << p.visibility << ',' << p.sigma << '\n';
}

std::vector<VisibilityPoint> read_visibility_points(std::istream& in) {
  std::vector<VisibilityPoint> out;
  std::string line;
  std::vector<double> f;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!data_fields(line, f, 3, line_no)) continue;
    out.push_back({f[0], f[1], f[2]});
  }
  return out;
}

void write_fit_report(std::ostream& out, const FitReport& report, const std::vector<VisibilityPoint>& points,
                      const std::string& header) {
  put_header(out, header);
  out << "# overlap fit; standard errors are statistical only (chi^2 curvature), mean_n taken as exact\n";
  out << std::setprecision(kPrecision);
  out << "parameter,value,sigma\n";
  out << "overlap," << report.overlap << ',' << report.sigma_overlap << '\n';
  if (report.eta_ratio) {
    out << "eta_ratio," << *report.eta_ratio << ',';
    if (report.sigma_eta_ratio) out << *report.sigma_eta_ratio;
    out << '\n';
  }
  out << "chi_square," << report.chi_square << ",\n";
  out << "dof," << report.dof << ",\n";
  out << "at_boundary," << (report.at_boundary ? 1 : 0) << ",\n";
  out << "\nmean_n,V,sigma_V,residual\n";
  for (std::size_t j = 0; j < points.size() && j < report.residuals.size(); ++j) {
    out << points[j].mean_n << ',' << points[j].visibility << ',' << points[j].sigma << ',' << report.residuals[j]
        << '\n';
  }
}

std::string fit_summary(const FitReport& report) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "overlap = " << report.overlap << " +- " << report.sigma_overlap << " (statistical)\n";
  if (report.eta_ratio) {
    os << "eta1/eta2 = " << *report.eta_ratio;
    if (report.sigma_eta_ratio) os << " +- " << *report.sigma_eta_ratio;
    os << (report.sigma_eta_ratio ? " (fitted)" : " (fixed)") << "\n";
  }
  os << "chi^2 = " << report.chi_square << " for " << report.dof << " degrees of freedom";
  if (report.dof > 0) os << " (reduced " << report.chi_square / static_cast<double>(report.dof) << ")";
  os << "\n";
  if (report.at_boundary) os << "warning: estimate sits on the boundary of [0, 1]\n";
  return os.str();
}

}  // namespace pdc::io
