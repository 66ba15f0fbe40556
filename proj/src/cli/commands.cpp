#include "concentric/cli/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

#include "concentric/cavity_geometry.hpp"
#include "concentric/cli/config.hpp"
#include "concentric/cli/svg_plot.hpp"
#include "concentric/errors.hpp"
#include "concentric/fitting.hpp"
#include "concentric/io.hpp"
#include "concentric/loss_budget.hpp"
#include "concentric/random.hpp"
#include "concentric/spectra.hpp"
#include "concentric/trace.hpp"
#include "concentric/units.hpp"

namespace concentric::cli {

namespace fs = std::filesystem;
using units::angular_to_mhz;
using units::mhz_to_angular;

namespace {

enum class Format { csv, json_lines };

// Flat report: one quantity per row.
class Report {
  public:
    void add(std::string name, double value, std::string unit = "") {
        rows_.push_back({std::move(name), value, std::move(unit)});
    }
    void add(std::string name, std::string value, std::string unit = "") {
        rows_.push_back({std::move(name), std::move(value), std::move(unit)});
    }
    void add(std::string name, Measured m, const std::string& unit = "") {
        add(name, m.value, unit);
        add(name + "_sigma", m.sigma, unit);
    }

    void print(std::ostream& out, Format format) const {
        if (format == Format::csv) out << "quantity,value,unit\n";
        for (const auto& r : rows_) {
            if (format == Format::csv) {
                out << r.name << ',' << text(r.value) << ',' << r.unit << '\n';
            } else {
                nlohmann::ordered_json j;
                j["quantity"] = r.name;
                if (const auto* d = std::get_if<double>(&r.value)) {
                    j["value"] = *d;
                } else {
                    j["value"] = std::get<std::string>(r.value);
                }
                j["unit"] = r.unit;
                out << j.dump() << '\n';
            }
        }
    }

  private:
    struct Row {
        std::string name;
        std::variant<double, std::string> value;
        std::string unit;
    };
    static std::string text(const std::variant<double, std::string>& v) {
        if (const auto* d = std::get_if<double>(&v)) return io::format_number(*d);
        return std::get<std::string>(v);
    }
    std::vector<Row> rows_;
};

struct Context {
    RunConfig config;
    fs::path out_dir = ".";
    Format format = Format::csv;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << content;
}

AtomModel atom_from(const RunConfig& c) {
    return {mhz_to_angular(c.get_double("atom.linewidth_mhz")) / 2.0,
            units::nm(c.get_double("atom.wavelength_nm"))};
}

CavityGeometry geometry_from(const RunConfig& c) {
    CavityGeometry g;
    g.radius_of_curvature = units::mm(c.get_double("geometry.radius_of_curvature_mm"));
    if (c.has("geometry.cavity_length_mm")) {
        g.cavity_length = units::mm(c.get_double("geometry.cavity_length_mm"));
    } else {
        g.cavity_length = 2.0 * g.radius_of_curvature -
                          units::um(c.get_double("geometry.distance_to_concentric_um"));
    }
    g.wavelength = units::nm(c.has("geometry.wavelength_nm") ? c.get_double("geometry.wavelength_nm")
                                                             : c.get_double("atom.wavelength_nm"));
    g.validate();
    return g;
}

double default_kappa_t(const RunConfig& c) {
    const auto geom = geometry_from(c);
    return decay_rates(c.get_double("budget.mirror_transmission"), 0.0, geom.cavity_length).kappa_t;
}

int cmd_geometry(const Context& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const auto geom = geometry_from(c);
    const auto atom = atom_from(c);
    const auto props = mode_properties(geom);
    const double g0 = ideal_coupling(geom, atom);

    Report r;
    r.add("radius_of_curvature", geom.radius_of_curvature * 1e3, "mm");
    r.add("cavity_length", geom.cavity_length * 1e3, "mm");
    r.add("distance_to_concentric", props.distance_to_concentric * 1e6, "um");
    r.add("stability_g", props.stability_g);
    r.add("free_spectral_range", props.free_spectral_range * 1e-6, "MHz");
    r.add("transverse_mode_spacing", props.transverse_mode_spacing * 1e-6, "MHz");
    r.add("waist", props.waist * 1e6, "um");
    r.add("mode_volume", props.mode_volume, "m^3");
    r.add("ideal_g0", angular_to_mhz(g0), "MHz");
    r.add("ideal_g0_over_gamma", g0 / atom.dipole_decay_rate);

    if (c.has("geometry.measured_spacing_mhz")) {
        const double l = length_from_mode_spacing(c.get_double("geometry.measured_spacing_mhz") * 1e6,
                                                  geom.radius_of_curvature);
        r.add("length_from_spacing", l * 1e3, "mm");
        r.add("distance_from_spacing", (2.0 * geom.radius_of_curvature - l) * 1e6, "um");
        r.add("stability_g_from_spacing", 1.0 - l / geom.radius_of_curvature);
    }
    const bool dual = c.has("geometry.nu_a_thz") || c.has("geometry.nu_b_thz") || c.has("geometry.delta_n");
    if (dual) {
        const double l = length_from_dual_resonance(c.get_double("geometry.nu_a_thz") * 1e12,
                                                    c.get_double("geometry.nu_b_thz") * 1e12,
                                                    c.get_int("geometry.delta_n"));
        r.add("length_from_dual_resonance", l * 1e3, "mm");
        r.add("distance_from_dual_resonance", (2.0 * geom.radius_of_curvature - l) * 1e6, "um");
        r.add("stability_g_from_dual_resonance", 1.0 - l / geom.radius_of_curvature);
    }
    r.print(out, ctx.format);
    return kOk;
}

int cmd_budget(const Context& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const double length = geometry_from(c).cavity_length;
    const Measured t{c.get_double("budget.mirror_transmission"),
                     c.get_double("budget.mirror_transmission_sigma")};
    const int given = int{c.has("budget.finesse")} + int{c.has("budget.linewidth_mhz")} +
                      int{c.has("budget.absorption_loss")};
    if (given != 1) {
        throw ConfigError(
            "budget needs exactly one of budget.finesse, budget.linewidth_mhz, budget.absorption_loss");
    }

    BudgetReport b;
    if (c.has("budget.finesse")) {
        b = budget_from_finesse({c.get_double("budget.finesse"), c.get_double("budget.finesse_sigma")}, t,
                                length);
    } else if (c.has("budget.linewidth_mhz")) {
        b = budget_from_linewidth({mhz_to_angular(c.get_double("budget.linewidth_mhz")),
                                   mhz_to_angular(c.get_double("budget.linewidth_sigma_mhz"))},
                                  t, length);
    } else {
        const auto lb = LossBudget::from_losses(t.value, c.get_double("budget.absorption_loss"), length);
        b.finesse = {lb.finesse, 0.0};
        b.round_trip_absorption = {lb.round_trip_absorption, 0.0};
        b.incoupling_efficiency = {lb.incoupling_efficiency, 0.0};
        b.resonant_transmission = {lb.resonant_transmission, 0.0};
        b.cavity_field_decay = {lb.cavity_field_decay, 0.0};
        b.mirror_field_decay = {lb.mirror_field_decay, 0.0};
    }

    const auto mhz = [](Measured m) { return Measured{angular_to_mhz(m.value), angular_to_mhz(m.sigma)}; };
    Report r;
    r.add("cavity_length", length * 1e3, "mm");
    r.add("mirror_transmission", t);
    r.add("finesse", b.finesse);
    r.add("absorption_loss", b.round_trip_absorption);
    r.add("incoupling_efficiency", b.incoupling_efficiency);
    r.add("resonant_transmission", b.resonant_transmission);
    r.add("kappa", mhz(b.cavity_field_decay), "MHz");
    r.add("kappa_t", mhz(b.mirror_field_decay), "MHz");
    r.add("linewidth", 2.0 * angular_to_mhz(b.cavity_field_decay.value), "MHz");
    if (c.has("budget.g0_mhz")) {
        const auto atom = atom_from(c);
        r.add("cooperativity", cooperativity(mhz_to_angular(c.get_double("budget.g0_mhz")),
                                             b.cavity_field_decay.value, atom.dipole_decay_rate));
    }
    r.print(out, ctx.format);
    return kOk;
}

CoupledSystem spectrum_system(const RunConfig& c) {
    CoupledSystem sys;
    sys.coupling_g0 = mhz_to_angular(c.get_double("spectrum.g0_mhz"));
    sys.cavity_decay_kappa = mhz_to_angular(c.get_double("spectrum.kappa_mhz"));
    sys.mirror_decay_kappa_t = c.has("spectrum.kappa_t_mhz")
                                   ? mhz_to_angular(c.get_double("spectrum.kappa_t_mhz"))
                                   : default_kappa_t(c);
    sys.atom_decay_gamma = atom_from(c).dipole_decay_rate;
    sys.cavity_resonance = 0.0;
    sys.atom_resonance = -mhz_to_angular(c.get_double("spectrum.offset_mhz"));
    sys.validate();
    return sys;
}

int cmd_spectrum(const Context& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const auto sys = spectrum_system(c);
    auto empty = sys;
    empty.coupling_g0 = 0.0;

    const std::string kind_name = c.get_string("spectrum.kind");
    if (kind_name != "transmission" && kind_name != "reflection") {
        throw ConfigError("spectrum.kind must be transmission or reflection");
    }
    const auto kind = kind_name == "transmission" ? SpectrumKind::transmission : SpectrumKind::reflection;
    const int n = c.get_int("spectrum.points");
    const double start = c.get_double("spectrum.start_mhz");
    const double stop = c.get_double("spectrum.stop_mhz");
    if (n < 1 || (n > 1 && !(stop > start))) throw ConfigError("need spectrum.points >= 1 and stop > start");

    std::vector<double> grid;
    for (int i = 0; i < n; ++i) {
        grid.push_back(mhz_to_angular(n == 1 ? start : start + (stop - start) * i / (n - 1)));
    }
    Spectrum spectrum = sample_spectrum(sys, grid, kind);

    const double counts = c.get_double("spectrum.noise_counts");
    if (counts < 0.0) throw ConfigError("spectrum.noise_counts must be >= 0");
    if (counts > 0.0) {
        Rng rng(c.get_u64("spectrum.seed"));
        for (auto& p : spectrum.points) {
            const auto k = static_cast<double>(rng.poisson(counts * p.value));
            p.value = k / counts;
            p.sigma = std::sqrt(std::max(k, 1.0)) / counts;
        }
    }

    std::ostringstream csv;
    io::write_spectrum(csv, spectrum);
    write_file(ctx.out_dir / "spectrum.csv", csv.str());

    if (c.get_bool("spectrum.plot")) {
        PlotSeries bare{{}, {}, "gray", "empty cavity"};
        PlotSeries coupled{{}, {}, "red", "with atom"};
        for (const double w : grid) {
            bare.x.push_back(angular_to_mhz(w));
            bare.y.push_back(evaluate(empty, w, kind));
        }
        for (const auto& p : spectrum.points) {
            coupled.x.push_back(angular_to_mhz(p.frequency));
            coupled.y.push_back(p.value);
        }
        write_file(ctx.out_dir / "spectrum.svg",
                   render_svg({bare, coupled}, "detuning from cavity resonance (MHz)", kind_name));
    }

    const auto modes = normal_mode_frequencies(sys);
    Report r;
    r.add("kind", kind_name);
    r.add("points", static_cast<double>(n));
    r.add("kappa", angular_to_mhz(sys.cavity_decay_kappa), "MHz");
    r.add("kappa_t", angular_to_mhz(sys.mirror_decay_kappa_t), "MHz");
    r.add("gamma", angular_to_mhz(sys.atom_decay_gamma), "MHz");
    r.add("cooperativity", cooperativity(sys.coupling_g0, sys.cavity_decay_kappa, sys.atom_decay_gamma));
    r.add("value_at_cavity_resonance", evaluate(sys, 0.0, kind));
    r.add("empty_value_at_cavity_resonance", evaluate(empty, 0.0, kind));
    r.add("value_at_atom_resonance", evaluate(sys, sys.atom_resonance, kind));
    r.add("empty_value_at_atom_resonance", evaluate(empty, sys.atom_resonance, kind));
    r.add("normal_mode_splitting", angular_to_mhz(modes.splitting), "MHz");
    r.add("normal_modes_resolved", modes.resolved ? "true" : "false");
    r.add("output", (ctx.out_dir / "spectrum.csv").string());
    r.print(out, ctx.format);
    return kOk;
}

int cmd_fit(const Context& ctx, const std::string& input, std::ostream& out) {
    const auto& c = ctx.config;
    const std::string model = c.get_string("fit.model");
    LevenbergMarquardtSettings lm;
    lm.max_iterations = c.get_int("fit.max_iterations");
    if (lm.max_iterations < 1) throw ConfigError("fit.max_iterations must be >= 1");
    FitResult result;
    Report r;
    r.add("model", model);

    const auto calibration = [&] {
        CavityCalibration cal;
        cal.kappa = mhz_to_angular(c.get_double("fit.kappa_mhz"));
        cal.kappa_t = c.has("fit.kappa_t_mhz") ? mhz_to_angular(c.get_double("fit.kappa_t_mhz"))
                                               : default_kappa_t(c);
        cal.gamma = atom_from(c).dipole_decay_rate;
        if (c.has("fit.resonant_transmission")) cal.resonant_transmission = c.get_double("fit.resonant_transmission");
        return cal;
    };
    const auto add_mhz = [&](const std::string& name) {
        r.add(name, angular_to_mhz(result.value(name)), "MHz");
        if (result.converged) r.add(name + "_sigma", angular_to_mhz(result.uncertainty(name)), "MHz");
    };
    const auto add_plain = [&](const std::string& name) {
        r.add(name, result.value(name));
        if (result.converged) r.add(name + "_sigma", result.uncertainty(name));
    };

    if (model == "lorentzian") {
        result = fit_lorentzian(io::read_spectrum_file(input), lm);
        add_plain("amplitude");
        add_mhz("center");
        add_mhz("fwhm");
        add_plain("offset");
    } else if (model == "coupled_transmission") {
        result = fit_coupled_transmission(io::read_spectrum_file(input), calibration(), lm);
        add_mhz("g0");
        add_mhz("offset");
    } else if (model == "coupled_reflection") {
        result = fit_coupled_reflection(io::read_spectrum_file(input), calibration(), lm);
        add_mhz("g0");
        add_mhz("offset");
        add_plain("far_reflection");
    } else if (model == "exp_decay") {
        std::vector<SurvivalPoint> points;
        for (const auto& row : io::read_survival_file(input)) {
            points.push_back({row.tau, static_cast<double>(row.survived) / row.trials, row.trials});
        }
        result = fit_exponential_decay(points, lm);
        r.add("t0", result.value("t0") * 1e3, "ms");
        if (result.converged) r.add("t0_sigma", result.uncertainty("t0") * 1e3, "ms");
        add_plain("p0");
    } else {
        throw ConfigError("unknown fit.model '" + model + "'");
    }
    r.add("residual_norm", result.residual_norm);
    r.add("chi_square", result.chi_square);
    r.add("degrees_of_freedom", static_cast<double>(result.degrees_of_freedom));
    r.add("iterations", static_cast<double>(result.iterations));
    r.add("converged", result.converged ? "true" : "false");
    r.print(out, ctx.format);
    return result.converged ? kOk : kNotConverged;
}

TraceConfig trace_config(const RunConfig& c) {
    TraceConfig t;
    t.background_rate = c.get_double("trace.background_rate_hz");
    t.atom_rate = c.get_double("trace.atom_rate_hz");
    t.bin_width = units::ms(c.get_double("trace.bin_width_ms"));
    t.duration = c.get_double("trace.duration_s");
    t.loading_rate = c.get_double("trace.loading_rate_hz");
    t.lifetime_t0 = units::ms(c.get_double("trace.lifetime_ms"));
    t.seed = c.get_u64("trace.seed");
    t.validate();
    return t;
}

int cmd_simulate(const Context& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const auto cfg = trace_config(c);
    const std::string kind = c.get_string("simulate.kind");
    Report r;
    r.add("kind", kind);
    r.add("seed", std::to_string(cfg.seed));
    if (kind == "trace") {
        const auto trace = simulate_trace(cfg);
        std::ostringstream data;
        io::write_trace(data, trace);
        write_file(ctx.out_dir / "trace.csv", data.str());
        std::ostringstream truth;
        io::write_truth(truth, *trace.truth);
        write_file(ctx.out_dir / "trace.truth.csv", truth.str());

        double total = 0.0;
        for (auto k : trace.counts) total += static_cast<double>(k);
        double occupied = 0.0;
        for (const auto& iv : *trace.truth) occupied += iv.end - iv.start;
        r.add("bins", static_cast<double>(trace.counts.size()));
        r.add("total_counts", total);
        r.add("true_events", static_cast<double>(trace.truth->size()));
        r.add("occupancy_fraction", occupied / trace.duration());
        r.add("output", (ctx.out_dir / "trace.csv").string());
    } else if (kind == "survival") {
        std::vector<double> taus;
        for (double ms : c.get_double_list("survival.taus_ms")) taus.push_back(units::ms(ms));
        const auto rows = survival_experiment(cfg, taus, c.get_int("survival.trials"));
        std::ostringstream data;
        io::write_survival(data, rows);
        write_file(ctx.out_dir / "survival.csv", data.str());
        r.add("waiting_times", static_cast<double>(rows.size()));
        r.add("trials_per_time", static_cast<double>(c.get_int("survival.trials")));
        r.add("output", (ctx.out_dir / "survival.csv").string());
    } else {
        throw ConfigError("simulate.kind must be trace or survival");
    }
    r.print(out, ctx.format);
    return kOk;
}

fs::path truth_sidecar(const fs::path& trace_path) {
    fs::path p = trace_path;
    if (p.extension() == ".csv") p.replace_extension();
    p += ".truth.csv";
    return p;
}

int cmd_detect(const Context& ctx, const std::string& input, std::ostream& out) {
    const auto& c = ctx.config;
    const auto trace = io::read_trace_file(input);
    DetectorSettings settings;
    settings.threshold_sigma = c.get_double("detect.threshold_sigma");
    settings.min_bins = c.get_int("detect.min_bins");
    const auto events = detect_events(trace, settings);
    const double mu = estimate_background(trace.counts, settings.threshold_sigma);

    std::ostringstream data;
    io::write_truth(data, events);
    write_file(ctx.out_dir / "events.csv", data.str());

    Report r;
    r.add("bins", static_cast<double>(trace.counts.size()));
    r.add("background_mean", mu, "counts/bin");
    r.add("enter_threshold", mu + settings.threshold_sigma * std::sqrt(mu), "counts/bin");
    r.add("leave_threshold", mu + 0.5 * settings.threshold_sigma * std::sqrt(mu), "counts/bin");
    r.add("events", static_cast<double>(events.size()));
    const auto sidecar = truth_sidecar(input);
    if (fs::exists(sidecar)) {
        const auto truth = io::read_truth_file(sidecar);
        const auto score = score_detection(truth, events);
        r.add("true_events", static_cast<double>(truth.size()));
        r.add("precision", score.precision);
        r.add("recall", score.recall);
    }
    r.add("output", (ctx.out_dir / "events.csv").string());
    r.print(out, ctx.format);
    return kOk;
}

int cmd_sweep(const Context& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const auto atom = atom_from(c);
    const auto geom = geometry_from(c);
    const double radius = geom.radius_of_curvature;

    CouplingCalibration calib;
    const std::string kind = c.get_string("sweep.calibration");
    if (kind == "ideal") {
        calib = CouplingCalibration::ideal();
    } else if (kind == "measured") {
        calib.kind = CouplingCalibration::Kind::measured;
        calib.anchor_coupling = mhz_to_angular(c.get_double("sweep.anchor_g0_mhz")) *
                                c.get_double("sweep.polarization_factor");
        calib.anchor_distance = units::um(c.get_double("sweep.anchor_distance_um"));
    } else {
        throw ConfigError("sweep.calibration must be ideal or measured");
    }

    const double d_min = units::nm(c.get_double("sweep.d_min_nm"));
    const double d_max = units::nm(c.get_double("sweep.d_max_nm"));
    const auto rows = concentric_sweep(radius, geom.wavelength, atom, d_min, d_max,
                                       c.get_int("sweep.points"), calib);
    const double finesse = c.get_double("sweep.finesse");

    std::optional<double> target_d;
    if (c.has("sweep.target_ratio")) {
        target_d = distance_for_coupling_ratio(radius, geom.wavelength, atom, d_min, d_max,
                                               c.get_double("sweep.target_ratio"), calib);
    }
    std::size_t nearest = rows.size();
    if (target_d) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double dist = std::fabs(std::log(rows[i].distance / *target_d));
            if (dist < best) best = dist, nearest = i;
        }
    }

    std::ostringstream table;
    table << "d_nm,g0_mhz,g0_over_gamma,w0_um,c0_at_finesse,at_target\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const double length = 2.0 * radius - row.distance;
        const double kappa = units::kPi * units::kSpeedOfLight / (2.0 * finesse * length);
        table << io::format_number(row.distance * 1e9) << ',' << io::format_number(angular_to_mhz(row.coupling))
              << ',' << io::format_number(row.coupling_over_gamma) << ',' << io::format_number(row.waist * 1e6)
              << ',' << io::format_number(cooperativity(row.coupling, kappa, atom.dipole_decay_rate)) << ','
              << (i == nearest ? 1 : 0) << '\n';
    }
    write_file(ctx.out_dir / "sweep.csv", table.str());

    Report r;
    r.add("calibration", kind);
    r.add("rows", static_cast<double>(rows.size()));
    r.add("finesse", finesse);
    if (target_d) {
        r.add("target_ratio", c.get_double("sweep.target_ratio"));
        r.add("target_distance", *target_d * 1e9, "nm");
    }
    r.add("output", (ctx.out_dir / "sweep.csv").string());
    r.print(out, ctx.format);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Near-concentric cavity QED toolkit", "cqed"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    std::string emit_config;
    std::vector<std::string> assignments;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "config file (key = value lines)");
    app.add_option("--out", out_dir, "directory for data files");
    app.add_option("--seed", seed, "seed for every stochastic step (overrides *.seed keys)");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json-lines"}));
    app.add_option("--set", assignments, "override a config key: --set key=value");
    app.add_option("--emit-config", emit_config, "write the fully resolved config to this file");

    std::string input;
    auto* geometry = app.add_subcommand("geometry", "resonator geometry report");
    auto* budget = app.add_subcommand("budget", "finesse and loss budget");
    auto* spectrum = app.add_subcommand("spectrum", "transmission / reflection spectrum");
    auto* fit = app.add_subcommand("fit", "fit a spectrum or survival file");
    fit->add_option("input", input, "input CSV")->required();
    auto* simulate = app.add_subcommand("simulate", "photon-counting trace or survival experiment");
    auto* detect = app.add_subcommand("detect", "detect atom-loading events in a trace");
    detect->add_option("input", input, "trace CSV")->required();
    auto* sweep = app.add_subcommand("sweep", "coupling versus distance to concentricity");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        Context ctx;
        if (!config_path.empty()) ctx.config.load_file(config_path);
        for (const auto& a : assignments) {
            const auto eq = a.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + a + "'");
            ctx.config.set(a.substr(0, eq), a.substr(eq + 1));
        }
        if (seed) {
            ctx.config.set("trace.seed", std::to_string(*seed));
            ctx.config.set("spectrum.seed", std::to_string(*seed));
        }
        ctx.format = format == "csv" ? Format::csv : Format::json_lines;
        ctx.out_dir = out_dir;
        fs::create_directories(ctx.out_dir);
        if (!emit_config.empty()) write_file(emit_config, ctx.config.resolved_text());

        if (*geometry) return cmd_geometry(ctx, out);
        if (*budget) return cmd_budget(ctx, out);
        if (*spectrum) return cmd_spectrum(ctx, out);
        if (*fit) return cmd_fit(ctx, input, out);
        if (*simulate) return cmd_simulate(ctx, out);
        if (*detect) return cmd_detect(ctx, input, out);
        if (*sweep) return cmd_sweep(ctx, out);
        return kConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const DegenerateData& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const UnidentifiableLifetime& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const SingularJacobian& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kModelError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kModelError;
    } catch (const fs::filesystem_error& e) {
        err << "file error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace concentric::cli
