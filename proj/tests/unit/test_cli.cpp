#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "concentric/cli/commands.hpp"

namespace fs = std::filesystem;
using concentric::cli::run;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation cqed(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("cqed_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string value_of(const std::string& report, const std::string& quantity) {
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(quantity + ",", 0) == 0) {
            const auto a = line.find(',');
            return line.substr(a + 1, line.find(',', a + 1) - a - 1);
        }
    }
    return {};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("geometry report") {
    const auto r = cqed({"geometry"});
    CHECK(r.code == 0);
    CHECK(std::stod(value_of(r.out, "transverse_mode_spacing")) == doctest::Approx(106.26733).epsilon(1e-7));
    const auto j = cqed({"geometry", "--format", "json-lines"});
    CHECK(j.out.find("{\"quantity\":\"waist\"") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(cqed({}).code == 2);
    CHECK(cqed({"geometry", "--set", "geometry.bogus=1"}).code == 2);
    CHECK(cqed({"geometry", "--set", "geometry.distance_to_concentric_um=-3"}).code == 5);
    CHECK(cqed({"budget"}).code == 2);
    CHECK(cqed({"budget", "--set", "budget.finesse=1000"}).code == 5);
    const auto dir = scratch("codes");
    CHECK(cqed({"fit", (dir / "missing.csv").string()}).code == 3);
    std::ofstream(dir / "bad.csv") << "freq_mhz,value\n1,2\nx,3\n";
    const auto bad = cqed({"fit", (dir / "bad.csv").string()});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("line 3") != std::string::npos);
    std::ofstream(dir / "flat.csv") << "tau_ms,survived,trials\n50,100,100\n100,100,100\n200,100,100\n";
    CHECK(cqed({"fit", (dir / "flat.csv").string(), "--set", "fit.model=exp_decay"}).code == 3);
    CHECK(cqed({"sweep", "--set", "sweep.target_ratio=1000", "--out", dir.string()}).code == 5);

    CHECK(cqed({"spectrum", "--out", dir.string(), "--set", "spectrum.noise_counts=100000"}).code == 0);
    const auto spectrum = (dir / "spectrum.csv").string();
    CHECK(cqed({"fit", spectrum, "--set", "fit.model=coupled_transmission"}).code == 0);
    CHECK(cqed({"fit", spectrum, "--set", "fit.model=coupled_transmission", "--set", "fit.max_iterations=1"}).code ==
          4);
}

TEST_CASE("seeded commands are byte-identical") {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    for (const auto& dir : {a, b}) {
        const auto d = dir.string();
        REQUIRE(cqed({"spectrum", "--out", d, "--seed", "5", "--set", "spectrum.noise_counts=5000"}).code == 0);
        REQUIRE(cqed({"simulate", "--out", d, "--seed", "5"}).code == 0);
        REQUIRE(cqed({"detect", (dir / "trace.csv").string(), "--out", d}).code == 0);
    }
    for (const char* f : {"spectrum.csv", "trace.csv", "trace.truth.csv", "events.csv"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const auto c = scratch("det_c");
    REQUIRE(cqed({"simulate", "--out", c.string(), "--seed", "6"}).code == 0);
    CHECK(slurp(c / "trace.csv") != slurp(a / "trace.csv"));
}

TEST_CASE("emitted config reproduces the run") {
    const auto dir = scratch("emit");
    const auto cfg = (dir / "run.cfg").string();
    const auto first = cqed({"budget", "--set", "budget.linewidth_mhz=99", "--set", "geometry.cavity_length_mm=10.998",
                             "--emit-config", cfg});
    REQUIRE(first.code == 0);
    const auto second = cqed({"budget", "--config", cfg});
    CHECK(second.code == 0);
    CHECK(second.out == first.out);
    CHECK(std::stod(value_of(first.out, "finesse")) == doctest::Approx(137.6708).epsilon(1e-7));
}

TEST_CASE("flags override the config file") {
    const auto dir = scratch("override");
    std::ofstream(dir / "a.cfg") << "geometry.distance_to_concentric_um = 1.7\n";
    const auto r = cqed({"geometry", "--config", (dir / "a.cfg").string(), "--set",
                         "geometry.distance_to_concentric_um=1.65"});
    CHECK(std::stod(value_of(r.out, "transverse_mode_spacing")) == doctest::Approx(106.26733).epsilon(1e-7));
}

TEST_CASE("plot and sweep files") {
    const auto dir = scratch("files");
    REQUIRE(cqed({"spectrum", "--out", dir.string(), "--set", "spectrum.plot=true"}).code == 0);
    CHECK(slurp(dir / "spectrum.svg").rfind("<svg", 0) == 0);
    REQUIRE(cqed({"sweep", "--out", dir.string(), "--set", "sweep.target_ratio=4"}).code == 0);
    const auto table = slurp(dir / "sweep.csv");
    CHECK(table.rfind("d_nm,g0_mhz,g0_over_gamma,w0_um,c0_at_finesse,at_target\n", 0) == 0);
    CHECK(table.find(",1\n") != std::string::npos);
}

}
