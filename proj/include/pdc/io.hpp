#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pdc/fit.hpp"
#include "pdc/jsa.hpp"
#include "pdc/schmidt.hpp"
#include "pdc/twinstats.hpp"

namespace pdc::io {

/// Grid dump. Header lines start with '#'; then one text line per signal
/// node holding n_i "re im" pairs (row-major).
void write_grid(std::ostream& out, const JointAmplitude& jsa, const std::string& header = {});
JointAmplitude read_grid(std::istream& in);

/// Mode functions of the first `count` Schmidt pairs in the grid format,
/// one block per mode (signal column then idler column as a 2 x n grid).
void write_modes(std::ostream& out, const SchmidtData& data, std::size_t count, const std::string& header = {});

/// Marginals with detuning, wavelength and probability density per rad/ps.
void write_marginals(std::ostream& out, const JointAmplitude& jsa, double signal_center, double idler_center,
                     const std::string& header = {});

/// JSI cut through the origin along the anti-diagonal or diagonal.
void write_cut(std::ostream& out, const JointAmplitude& jsa, CutAxis axis, const std::string& header = {});

void write_schmidt_spectrum(std::ostream& out, const SchmidtData& data, const std::string& header = {});

void write_count_records(std::ostream& out, const std::vector<CountRecord>& records, const std::string& header = {});
std::vector<CountRecord> read_count_records(std::istream& in);

void write_visibility_points(std::ostream& out, const std::vector<VisibilityPoint>& points,
                             const std::string& header = {});
std::vector<VisibilityPoint> read_visibility_points(std::istream& in);

/// Fit report as CSV: parameter block followed by the residual table.
void write_fit_report(std::ostream& out, const FitReport& report, const std::vector<VisibilityPoint>& points,
                      const std::string& header = {});
/// Human-readable summary of a fit.
std::string fit_summary(const FitReport& report);

/// Prefixes every line of `text` with "# ".
std::string comment_block(const std::string& text);

}  // namespace pdc::io
