#include "concentric/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "concentric/errors.hpp"

namespace concentric::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(key + ": not a number: '" + text + "'");
    }
    return v;
}

}  // namespace

const std::map<std::string, KeySpec>& config_schema() {
    static const std::map<std::string, KeySpec> schema = {
        {"geometry.radius_of_curvature_mm", {"5.5", "mirror radius of curvature"}},
        {"geometry.cavity_length_mm", {std::nullopt, "cavity length (overrides distance_to_concentric)"}},
        {"geometry.distance_to_concentric_um", {"1.65", "2 R_C - l_cav"}},
        {"geometry.wavelength_nm", {std::nullopt, "mode wavelength; defaults to atom.wavelength_nm"}},
        {"geometry.measured_spacing_mhz", {std::nullopt, "measured transverse mode spacing"}},
        {"geometry.nu_a_thz", {std::nullopt, "higher of two simultaneously resonant frequencies"}},
        {"geometry.nu_b_thz", {std::nullopt, "lower of two simultaneously resonant frequencies"}},
        {"geometry.delta_n", {std::nullopt, "longitudinal mode number difference"}},
        {"atom.linewidth_mhz", {"6.07", "natural linewidth 2 gamma"}},
        {"atom.wavelength_nm", {"780.241", "transition wavelength"}},
        {"budget.mirror_transmission", {"0.005", "per-mirror transmission T"}},
        {"budget.mirror_transmission_sigma", {"0", "one-sigma uncertainty of T"}},
        {"budget.finesse", {std::nullopt, "cavity finesse F"}},
        {"budget.finesse_sigma", {"0", "one-sigma uncertainty of F"}},
        {"budget.linewidth_mhz", {std::nullopt, "cavity FWHM 2 kappa"}},
        {"budget.linewidth_sigma_mhz", {"0", "one-sigma uncertainty of 2 kappa"}},
        {"budget.absorption_loss", {std::nullopt, "round-trip absorption L"}},
        {"budget.g0_mhz", {std::nullopt, "coupling for the cooperativity row"}},
        {"spectrum.kind", {"transmission", "transmission | reflection"}},
        {"spectrum.g0_mhz", {"5.0", "atom-cavity coupling"}},
        {"spectrum.offset_mhz", {"3.4", "omega_c - omega_a"}},
        {"spectrum.kappa_mhz", {"49.5", "cavity field decay rate"}},
        {"spectrum.kappa_t_mhz", {std::nullopt, "per-mirror decay; defaults to T c / (4 l)"}},
        {"spectrum.start_mhz", {"-150", "first detuning from the cavity resonance"}},
        {"spectrum.stop_mhz", {"150", "last detuning"}},
        {"spectrum.points", {"301", "grid size"}},
        {"spectrum.noise_counts", {"0", "counts at unit value for Poisson noise; 0 = noiseless"}},
        {"spectrum.seed", {"1", "noise seed"}},
        {"spectrum.plot", {"false", "also write spectrum.svg"}},
        {"fit.model", {"lorentzian", "lorentzian | coupled_transmission | coupled_reflection | exp_decay"}},
        {"fit.kappa_mhz", {"49.5", "fixed cavity field decay rate"}},
        {"fit.kappa_t_mhz", {std::nullopt, "fixed per-mirror decay; defaults to T c / (4 l)"}},
        {"fit.resonant_transmission", {std::nullopt, "pinned empty-cavity peak transmission"}},
        {"fit.max_iterations", {"200", "accepted Levenberg-Marquardt steps before giving up"}},
        {"trace.background_rate_hz", {"2000", "detected rate without atom"}},
        {"trace.atom_rate_hz", {"40000", "detected rate with atom"}},
        {"trace.bin_width_ms", {"1", "count bin width"}},
        {"trace.duration_s", {"10", "trace length"}},
        {"trace.loading_rate_hz", {"0.5", "loading rate while the trap is empty"}},
        {"trace.lifetime_ms", {"230", "trap 1/e lifetime"}},
        {"trace.seed", {"1", "simulation seed"}},
        {"simulate.kind", {"trace", "trace | survival"}},
        {"survival.taus_ms", {"50,100,200,300,400,500,650,800", "waiting times"}},
        {"survival.trials", {"100", "trials per waiting time"}},
        {"detect.threshold_sigma", {"5", "entry threshold in background sigmas"}},
        {"detect.min_bins", {"2", "consecutive bins required to switch state"}},
        {"sweep.d_min_nm", {"10", "smallest distance to concentric"}},
        {"sweep.d_max_nm", {"2000", "largest distance to concentric"}},
        {"sweep.points", {"41", "log-spaced rows"}},
        {"sweep.calibration", {"measured", "ideal | measured"}},
        {"sweep.target_ratio", {std::nullopt, "solve for this g0/gamma"}},
        {"sweep.finesse", {"138", "finesse for the cooperativity column"}},
        {"sweep.anchor_g0_mhz", {"5.0", "measured coupling at the anchor distance"}},
        {"sweep.anchor_distance_um", {"1.65", "distance of the measured coupling"}},
        {"sweep.polarization_factor", {"1.4142135623730951", "circular-vs-linear probe factor on the anchor"}},
    };
    return schema;
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    load_text(buf.str(), path.string());
}

void RunConfig::load_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        try {
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!config_schema().contains(key)) throw ConfigError("unknown config key '" + key + "'");
    values_[key] = value;
}

std::optional<std::string> RunConfig::lookup(const std::string& key) const {
    const auto& schema = config_schema();
    const auto spec = schema.find(key);
    if (spec == schema.end()) throw ConfigError("unknown config key '" + key + "'");
    if (const auto it = values_.find(key); it != values_.end()) return it->second;
    return spec->second.default_value;
}

bool RunConfig::has(const std::string& key) const { return lookup(key).has_value(); }

bool RunConfig::is_set(const std::string& key) const {
    lookup(key);
    return values_.contains(key);
}

std::string RunConfig::get_string(const std::string& key) const {
    auto v = lookup(key);
    if (!v) throw ConfigError("missing required config key '" + key + "'");
    return *v;
}

double RunConfig::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

std::optional<double> RunConfig::get_optional_double(const std::string& key) const {
    auto v = lookup(key);
    if (!v) return std::nullopt;
    return parse_double(key, *v);
}

int RunConfig::get_int(const std::string& key) const {
    const auto text = get_string(key);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(key + ": not an integer: '" + text + "'");
    }
    return v;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
    const auto text = get_string(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(key + ": not an unsigned integer: '" + text + "'");
    }
    return v;
}

bool RunConfig::get_bool(const std::string& key) const {
    const auto text = get_string(key);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(key + ": not a boolean: '" + text + "'");
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
    const auto text = get_string(key);
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = trim(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        out.push_back(parse_double(key, item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string RunConfig::resolved_text() const {
    std::string out;
    for (const auto& [key, spec] : config_schema()) {
        if (const auto v = lookup(key)) out += key + " = " + *v + "\n";
    }
    return out;
}

}  // namespace concentric::cli
