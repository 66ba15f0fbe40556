#include "concentric/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "concentric/errors.hpp"
#include "concentric/units.hpp"

namespace concentric::io {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    for (;;) {
        const auto comma = line.find(',', pos);
        fields.push_back(line.substr(pos, comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view field, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw DataError("not a number: '" + std::string(field) + "'", line);
    }
    return v;
}

std::uint64_t parse_count(std::string_view field, std::size_t line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw DataError("not a non-negative integer: '" + std::string(field) + "'", line);
    }
    return v;
}

// Reads lines, stripping a trailing '\r' and tracking line numbers.
class LineReader {
  public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++number_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    std::size_t number() const { return number_; }

  private:
    std::istream& in_;
    std::size_t number_ = 0;
};

std::string expect_header(LineReader& reader, std::initializer_list<std::string_view> allowed) {
    std::string line;
    if (!reader.next(line)) throw DataError("missing header line", 1);
    for (auto h : allowed) {
        if (line == h) return line;
    }
    std::string msg = "unexpected header '" + line + "', expected";
    for (auto h : allowed) msg += " '" + std::string(h) + "'";
    throw DataError(msg, reader.number());
}

template <class T>
T read_file(const std::filesystem::path& path, T (*reader)(std::istream&)) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return reader(in);
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

void write_spectrum(std::ostream& out, const Spectrum& spectrum) {
    const bool with_sigma = !spectrum.empty() && std::all_of(spectrum.points.begin(), spectrum.points.end(),
                                                             [](const auto& p) { return p.sigma.has_value(); });
    out << (with_sigma ? "freq_mhz,value,sigma\n" : "freq_mhz,value\n");
    for (const auto& p : spectrum.points) {
        out << format_number(units::angular_to_mhz(p.frequency)) << ',' << format_number(p.value);
        if (with_sigma) out << ',' << format_number(*p.sigma);
        out << '\n';
    }
}

Spectrum read_spectrum(std::istream& in) {
    LineReader reader(in);
    const auto header = expect_header(reader, {"freq_mhz,value", "freq_mhz,value,sigma"});
    const std::size_t columns = header == "freq_mhz,value" ? 2 : 3;
    Spectrum s;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != columns) {
            throw DataError("expected " + std::to_string(columns) + " fields, got " +
                                std::to_string(f.size()),
                            reader.number());
        }
        SpectrumPoint p;
        p.frequency = units::mhz_to_angular(parse_double(f[0], reader.number()));
        p.value = parse_double(f[1], reader.number());
        if (p.value < 0.0) throw DataError("negative value", reader.number());
        if (columns == 3) {
            p.sigma = parse_double(f[2], reader.number());
            if (!(*p.sigma > 0.0)) throw DataError("sigma must be positive", reader.number());
        }
        if (!s.points.empty() && !(p.frequency > s.points.back().frequency)) {
            throw DataError("frequencies must be strictly increasing", reader.number());
        }
        s.points.push_back(p);
    }
    return s;
}

void write_trace(std::ostream& out, const PhotonTrace& trace) {
    out << "# bin_width_s=" << format_number(trace.bin_width) << '\n';
    out << "bin_index,counts\n";
    for (std::size_t i = 0; i < trace.counts.size(); ++i) {
        out << i << ',' << trace.counts[i] << '\n';
    }
}

PhotonTrace read_trace(std::istream& in) {
    LineReader reader(in);
    std::string line;
    constexpr std::string_view kPrefix = "# bin_width_s=";
    if (!reader.next(line) || line.rfind(kPrefix, 0) != 0) {
        throw DataError("missing '# bin_width_s=<value>' comment header", 1);
    }
    PhotonTrace trace;
    trace.bin_width = parse_double(std::string_view(line).substr(kPrefix.size()), 1);
    if (!(trace.bin_width > 0.0)) throw DataError("bin width must be positive", 1);
    expect_header(reader, {"bin_index,counts"});
    while (reader.next(line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 2) throw DataError("expected 2 fields", reader.number());
        const auto index = parse_count(f[0], reader.number());
        if (index != trace.counts.size()) {
            throw DataError("bin_index out of sequence (expected " +
                                std::to_string(trace.counts.size()) + ")",
                            reader.number());
        }
        trace.counts.push_back(parse_count(f[1], reader.number()));
    }
    return trace;
}

void write_truth(std::ostream& out, const std::vector<Interval>& intervals) {
    out << "start_s,end_s\n";
    for (const auto& iv : intervals) {
        out << format_number(iv.start) << ',' << format_number(iv.end) << '\n';
    }
}

std::vector<Interval> read_truth(std::istream& in) {
    LineReader reader(in);
    expect_header(reader, {"start_s,end_s"});
    std::vector<Interval> out;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 2) throw DataError("expected 2 fields", reader.number());
        Interval iv{parse_double(f[0], reader.number()), parse_double(f[1], reader.number())};
        if (!(iv.end >= iv.start)) throw DataError("interval ends before it starts", reader.number());
        if (!out.empty() && iv.start < out.back().end) {
            throw DataError("intervals overlap or are out of order", reader.number());
        }
        out.push_back(iv);
    }
    return out;
}

void write_survival(std::ostream& out, const std::vector<SurvivalCount>& rows) {
    out << "tau_ms,survived,trials\n";
    for (const auto& r : rows) {
        out << format_number(r.tau * 1e3) << ',' << r.survived << ',' << r.trials << '\n';
    }
}

std::vector<SurvivalCount> read_survival(std::istream& in) {
    LineReader reader(in);
    expect_header(reader, {"tau_ms,survived,trials"});
    std::vector<SurvivalCount> out;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 3) throw DataError("expected 3 fields", reader.number());
        SurvivalCount r;
        r.tau = parse_double(f[0], reader.number()) * 1e-3;
        r.survived = static_cast<int>(parse_count(f[1], reader.number()));
        r.trials = static_cast<int>(parse_count(f[2], reader.number()));
        if (r.trials < 1 || r.survived > r.trials) {
            throw DataError("need 0 <= survived <= trials and trials >= 1", reader.number());
        }
        out.push_back(r);
    }
    return out;
}

Spectrum read_spectrum_file(const std::filesystem::path& path) { return read_file(path, &read_spectrum); }
PhotonTrace read_trace_file(const std::filesystem::path& path) { return read_file(path, &read_trace); }
std::vector<Interval> read_truth_file(const std::filesystem::path& path) {
    return read_file(path, &read_truth);
}
std::vector<SurvivalCount> read_survival_file(const std::filesystem::path& path) {
    return read_file(path, &read_survival);
}

}  // namespace concentric::io
