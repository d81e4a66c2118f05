#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "rspec/errors.hpp"
#include "rspec/experiments.hpp"
#include "rspec/io.hpp"
#include "rspec/spectra.hpp"
#include "rspec/toml_lite.hpp"

using namespace rspec;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const fs::path p = fs::temp_directory_path() /
                       ("rspec_test_" + std::to_string(::getpid()) + "_" + tag + "_" +
                        std::to_string(counter++));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

json small_breaking_config(const fs::path& out_dir) {
    json cfg;
    cfg["experiment"] = "breaking";
    cfg["output_dir"] = out_dir.string();
    cfg["profile"] = {{"kind", "gaussian"}, {"amplitude", 1.0}, {"width", 1.0}};
    cfg["grid"] = {{"n", 64}};
    cfg["times"] = {{"outputs", {0.0, 0.5}}};
    return cfg;
}

int run_cli(const std::string& args) {
    ::unsetenv("RIEMANN_SPECTRA_OUT");
    const std::string cmd = std::string(RSPEC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

} // namespace

TEST_CASE("toml parsing covers tables, dotted keys, arrays, and comments") {
    const json j = parse_toml("top = 3 # trailing comment\n"
                              "a.b = 1.5\n"
                              "[section]\n"
                              "name = \"wave # not a comment\"\n"
                              "flag = true\n"
                              "band = [2.0, 30.0]\n"
                              "[nested.inner]\n"
                              "count = 7\n");
    CHECK(j["top"] == 3);
    CHECK(j["a"]["b"] == 1.5);
    CHECK(j["section"]["name"] == "wave # not a comment");
    CHECK(j["section"]["flag"] == true);
    CHECK(j["section"]["band"][1] == 30.0);
    CHECK(j["nested"]["inner"]["count"] == 7);

    CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_toml("a = \n"), ConfigError);
    CHECK_THROWS_AS(parse_toml("= 3\n"), ConfigError);
}

TEST_CASE("config loading accepts both formats and sniffs extensionless files") {
    const fs::path dir = fresh_dir("load");
    spit(dir / "c.json", R"({"experiment":"slope","input":"s.csv","fit":{"band":[1,2]}})");
    spit(dir / "c.toml", "experiment = \"slope\"\ninput = \"s.csv\"\n[fit]\nband = [1, 2]\n");
    spit(dir / "noext", R"({"experiment":"slope"})");

    const json a = load_config(dir / "c.json");
    const json b = load_config(dir / "c.toml");
    CHECK(a["experiment"] == b["experiment"]);
    CHECK(a["fit"]["band"] == b["fit"]["band"]);
    CHECK(load_config(dir / "noext")["experiment"] == "slope");

    spit(dir / "bad.toml", "this is not toml\n");
    CHECK_THROWS_AS(load_config(dir / "bad.toml"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "absent.json"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("equivalent json and toml configs produce byte-identical artifacts") {
    const fs::path d1 = fresh_dir("eqj");
    const fs::path d2 = fresh_dir("eqt");
    const fs::path d3 = fresh_dir("eqr");

    const json from_json = small_breaking_config(d1);
    const std::string toml_text = "experiment = \"breaking\"\n"
                                  "output_dir = \"" +
                                  d2.string() +
                                  "\"\n"
                                  "[profile]\n"
                                  "kind = \"gaussian\"\n"
                                  "amplitude = 1.0\n"
                                  "width = 1.0\n"
                                  "[grid]\n"
                                  "n = 64\n"
                                  "[times]\n"
                                  "outputs = [0.0, 0.5]\n";
    const fs::path toml_file = d2 / "cfg.toml";
    spit(toml_file, toml_text);

    run_experiment(from_json);
    run_experiment(load_config(toml_file));
    run_experiment(small_breaking_config(d3)); // determinism: same config again

    for (const char* name : {"snapshot_0.csv", "snapshot_1.csv", "breaking.json"}) {
        const std::string ref = slurp(d1 / name);
        CHECK(!ref.empty());
        CHECK(slurp(d2 / name) == ref);
        CHECK(slurp(d3 / name) == ref);
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
    fs::remove_all(d3);
}

TEST_CASE("reported slope is recomputable from the emitted spectrum") {
    const fs::path dir = fresh_dir("integrity");
    json cfg;
    cfg["experiment"] = "riemann-spectrum";
    cfg["output_dir"] = dir.string();
    cfg["grid"] = {{"n", 1024}, {"x_lo", -20.0}, {"length", 40.0}};
    const RunReport rep = run_experiment(cfg);

    const SpectrumResult spec = io::read_spectrum_csv(dir / "spectrum.csv");
    const double dk = 2.0 * std::numbers::pi / 40.0;
    const SlopeFit refit = fit_slope(spec, 8.0 * dk, 128.0 * dk, false);
    CHECK(std::abs(refit.slope - rep.scalars["slope_amplitude"].get<double>()) < 1e-10);

    const SlopeFit energy_refit = fit_slope(spec, 8.0 * dk, 128.0 * dk, true);
    CHECK(std::abs(energy_refit.slope - rep.scalars["slope_energy"].get<double>()) < 1e-10);
    fs::remove_all(dir);
}

TEST_CASE("plot recipe lists artifacts and reference slopes, and the report is complete") {
    const fs::path dir = fresh_dir("recipe");
    json cfg;
    cfg["experiment"] = "riemann-spectrum";
    cfg["output_dir"] = dir.string();
    cfg["grid"] = {{"n", 1024}, {"x_lo", -20.0}, {"length", 40.0}};
    RunReport rep = run_experiment(cfg);
    emit_plot_data(rep);
    write_report(rep);

    const std::string recipe = slurp(dir / "recipe.txt");
    CHECK(recipe.find("spectrum.csv") != std::string::npos);
    CHECK(recipe.find("-8/3") != std::string::npos);
    CHECK(recipe.find("log-log") != std::string::npos);

    const json report = json::parse(slurp(dir / "report.json"));
    for (const char* key : {"experiment", "config", "files", "scalars", "versions",
                            "wall_clock_seconds"})
        CHECK(report.contains(key));
    CHECK(report["experiment"] == "riemann-spectrum");
    CHECK(report["versions"].contains("riemann-spectra"));
    bool has_recipe = false;
    for (const auto& f : report["files"])
        if (f == "recipe.txt") has_recipe = true;
    CHECK(has_recipe);
    fs::remove_all(dir);
}

TEST_CASE("an empty or lying report cannot emit plot data") {
    RunReport rep;
    rep.experiment = "breaking";
    rep.out_dir = fresh_dir("empty");
    rep.scalars = json::object();
    CHECK_THROWS_AS(emit_plot_data(rep), MissingArtifact);
    rep.files.push_back("ghost.csv");
    CHECK_THROWS_AS(emit_plot_data(rep), MissingArtifact);
    fs::remove_all(rep.out_dir);
}

TEST_CASE("schema violations are config errors") {
    const fs::path dir = fresh_dir("schema");
    json cfg = small_breaking_config(dir);

    json no_experiment = cfg;
    no_experiment.erase("experiment");
    CHECK_THROWS_AS(run_experiment(no_experiment), ConfigError);

    json unknown_exp = cfg;
    unknown_exp["experiment"] = "explode";
    CHECK_THROWS_AS(run_experiment(unknown_exp), ConfigError);

    json typo = cfg;
    typo["profle"] = json::object();
    CHECK_THROWS_AS(run_experiment(typo), ConfigError);

    json typo_nested = cfg;
    typo_nested["grid"]["points"] = 64;
    CHECK_THROWS_AS(run_experiment(typo_nested), ConfigError);

    json bad_band;
    bad_band["experiment"] = "slope";
    bad_band["input"] = "nowhere.csv";
    bad_band["output_dir"] = dir.string();
    CHECK_THROWS_AS(run_experiment(bad_band), ConfigError); // band missing

    json bad_type = cfg;
    bad_type["grid"]["n"] = "many";
    CHECK_THROWS_AS(run_experiment(bad_type), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("environment variable redirects the output directory") {
    const fs::path dir = fresh_dir("envdir");
    ::setenv("RIEMANN_SPECTRA_OUT", dir.c_str(), 1);
    json cfg;
    cfg["experiment"] = "bessel-fubini";
    cfg["output_dir"] = (dir / "ignored").string();
    cfg["bessel_fubini"] = {{"t", 0.5}, {"n_harmonics", 64}};
    cfg["fit"] = {{"band", {2.0, 40.0}}};
    const RunReport rep = run_experiment(cfg);
    ::unsetenv("RIEMANN_SPECTRA_OUT");

    CHECK(rep.out_dir == dir);
    CHECK(fs::exists(dir / "harmonics.csv"));
    CHECK(!fs::exists(dir / "ignored"));
    fs::remove_all(dir);
}

TEST_CASE("command line runs end to end with the documented exit codes") {
    const fs::path dir = fresh_dir("cli");

    CHECK(run_cli("breaking --grid-n 64 --out " + (dir / "ok").string()) == 0);
    CHECK(fs::exists(dir / "ok" / "report.json"));
    CHECK(fs::exists(dir / "ok" / "recipe.txt"));

    CHECK(run_cli("explode --out " + (dir / "bad").string()) == 2);
    CHECK(run_cli("breaking --config " + (dir / "absent.toml").string()) == 2);

    // Runtime failure: a slope experiment whose input spectrum does not exist.
    json cfg;
    cfg["experiment"] = "slope";
    cfg["input"] = (dir / "no_such.csv").string();
    cfg["output_dir"] = (dir / "rt").string();
    cfg["fit"] = {{"band", {1.0, 10.0}}};
    spit(dir / "rt.json", cfg.dump());
    CHECK(run_cli("--config " + (dir / "rt.json").string()) == 1);

    // Flag overrides reach the config: an impossible band makes the fit fail.
    CHECK(run_cli("bessel-fubini --band 1e6,2e6 --out " + (dir / "band").string()) == 1);
    fs::remove_all(dir);
}
