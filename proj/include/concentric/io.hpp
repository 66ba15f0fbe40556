#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "concentric/spectra.hpp"
#include "concentric/trace.hpp"

// CSV file formats. Header line required, '.' decimal point, no thousands
// separators, '\n' line endings. Numbers are written in shortest round-trip
// form.
//
//   spectrum   freq_mhz,value[,sigma]
//   trace      # bin_width_s=<value>
//              bin_index,counts
//   truth      start_s,end_s
//   survival   tau_ms,survived,trials
namespace concentric::io {

void write_spectrum(std::ostream& out, const Spectrum& spectrum);
Spectrum read_spectrum(std::istream& in);

void write_trace(std::ostream& out, const PhotonTrace& trace);
// truth stays unset; pair with read_truth for the sidecar.
PhotonTrace read_trace(std::istream& in);

void write_truth(std::ostream& out, const std::vector<Interval>& intervals);
std::vector<Interval> read_truth(std::istream& in);

void write_survival(std::ostream& out, const std::vector<SurvivalCount>& rows);
std::vector<SurvivalCount> read_survival(std::istream& in);

// File wrappers; throw DataError when the file cannot be opened.
Spectrum read_spectrum_file(const std::filesystem::path& path);
PhotonTrace read_trace_file(const std::filesystem::path& path);
std::vector<Interval> read_truth_file(const std::filesystem::path& path);
std::vector<SurvivalCount> read_survival_file(const std::filesystem::path& path);

// Shortest representation that parses back to the same double.
std::string format_number(double v);

}  // namespace concentric::io
