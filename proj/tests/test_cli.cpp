#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hjbflow/config.hpp"
#include "hjbflow/hjb.hpp"

namespace fs = std::filesystem;
using namespace hjbflow;

namespace {

std::string cli_path() {
    const char* p = std::getenv("HJBFLOW_CLI_PATH");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string out, err;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
    fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
    std::string cmd = cli_path() + " " + args + " > " + out.string() + " 2> " +
                      err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string slurp_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("hjbflow_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* kMinimalConfig =
    "[grid]\n"
    "n_points = 32\n"
    "[time]\n"
    "T = 0.25\n"
    "M = 20\n"
    "[hamiltonian]\n"
    "kind = none\n"
    "[run]\n"
    "tol = 1e-9\n";

fs::path write_config(const fs::path& dir, const std::string& text) {
    fs::path cfg = dir / "scenario.ini";
    std::ofstream(cfg) << text;
    return cfg;
}

}  // namespace

TEST_CASE("solve-hjb writes artifacts whose values match an in-process solve") {
    fs::path dir = fresh_dir("solve");
    fs::path cfg = write_config(dir, kMinimalConfig);
    fs::path out = dir / "run1";

    RunResult r = run_cli("solve-hjb --config " + cfg.string() + " --out " + out.string(), dir);
    CAPTURE(r.err);
    CHECK(r.exit_code == 0);
    for (const char* f : {"value.csv", "control.csv", "solve.json", "manifest.json"})
        CHECK(fs::exists(out / f));

    // with no Hamiltonian the value path is the propagated terminal data
    ScenarioConfig c = load_config(cfg.string());
    HjbProblem p = build_problem(c);
    MildSolution sol = solve_mild(p, c.tol, c.max_iters);

    std::istringstream csv(slurp_file(out / "value.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,x,value");
    int count = 0;
    double worst = 0.0;
    while (std::getline(csv, line)) {
        std::istringstream row(line);
        std::string tf, xf, vf;
        std::getline(row, tf, ',');
        std::getline(row, xf, ',');
        std::getline(row, vf, ',');
        int ti = count / p.grid.n, xi = count % p.grid.n;
        worst = std::max(worst,
                         std::abs(std::stod(vf) - sol.value.fields[ti].values[xi]));
        ++count;
    }
    CHECK(count == p.grid.n * static_cast<int>(p.time_grid.size()));
    CHECK(worst == 0.0);  // same code path, round-tripped through %.17g
}

TEST_CASE("identical inputs produce byte-identical artifacts") {
    fs::path dir = fresh_dir("repro");
    fs::path cfg = write_config(dir, kMinimalConfig);
    fs::path o1 = dir / "a", o2 = dir / "b";
    CHECK(run_cli("solve-hjb --config " + cfg.string() + " --out " + o1.string(), dir)
              .exit_code == 0);
    CHECK(run_cli("solve-hjb --config " + cfg.string() + " --out " + o2.string(), dir)
              .exit_code == 0);
    for (const char* f : {"value.csv", "control.csv", "solve.json", "manifest.json"})
        CHECK(slurp_file(o1 / f) == slurp_file(o2 / f));
}

TEST_CASE("the manifest reproduces the run it records") {
    fs::path dir = fresh_dir("manifest");
    fs::path cfg = write_config(dir, kMinimalConfig);
    fs::path o1 = dir / "orig";
    REQUIRE(run_cli("solve-hjb --config " + cfg.string() + " --out " + o1.string(), dir)
                .exit_code == 0);

    // the manifest holds every resolved parameter; round-trip it into a
    // fresh config file and check the rerun is byte-identical
    Json manifest = Json::parse(slurp_file(o1 / "manifest.json"));
    ScenarioConfig c = from_manifest(manifest);
    std::ostringstream regen;
    regen << "[grid]\nn_points = " << c.n_points << "\nhalf_width = "
          << format_double(c.half_width) << "\n[time]\nT = " << format_double(c.horizon)
          << "\nM = " << c.steps << "\n[hamiltonian]\nkind = " << c.hamiltonian
          << "\n[run]\ntol = " << format_double(c.tol) << "\n";
    fs::path cfg2 = write_config(dir, regen.str());
    fs::path o2 = dir / "rerun";
    REQUIRE(run_cli("solve-hjb --config " + cfg2.string() + " --out " + o2.string(), dir)
                .exit_code == 0);
    CHECK(slurp_file(o1 / "value.csv") == slurp_file(o2 / "value.csv"));
    CHECK(slurp_file(o1 / "manifest.json") == slurp_file(o2 / "manifest.json"));
}

TEST_CASE("config errors exit with code 2 and name the offending field") {
    fs::path dir = fresh_dir("badcfg");
    fs::path cfg = write_config(dir, "[generator]\nname = levy\n");
    RunResult r = run_cli("solve-hjb --config " + cfg.string() + " --out " +
                              (dir / "o").string(),
                          dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("generator") != std::string::npos);

    RunResult missing = run_cli("solve-hjb --config " + (dir / "nope.ini").string() +
                                    " --out " + (dir / "o").string(),
                                dir);
    CHECK(missing.exit_code == 2);

    fs::path unknown = write_config(dir, "[grid]\npoints = 32\n");
    RunResult u = run_cli("solve-hjb --config " + unknown.string() + " --out " +
                              (dir / "o").string(),
                          dir);
    CHECK(u.exit_code == 2);
    CHECK(u.err.find("grid.points") != std::string::npos);
}

TEST_CASE("sensitivity and mfg subcommands emit their artifact sets") {
    fs::path dir = fresh_dir("subcmds");
    fs::path cfg = write_config(dir,
                                "[grid]\n"
                                "n_points = 32\n"
                                "[time]\n"
                                "T = 0.25\n"
                                "M = 20\n"
                                "[terminal]\n"
                                "mu_coupling = mean-shift\n"
                                "[flows]\n"
                                "flow1 = bump\n"
                                "flow2 = bump\n"
                                "center2 = 0.7\n"
                                "[run]\n"
                                "tol = 1e-7\n");
    fs::path so = dir / "sens";
    RunResult rs = run_cli("sensitivity --config " + cfg.string() + " --out " + so.string(), dir);
    CAPTURE(rs.err);
    CHECK(rs.exit_code == 0);
    for (const char* f : {"diff_table.csv", "sensitivity.json", "manifest.json"})
        CHECK(fs::exists(so / f));
    Json sj = Json::parse(slurp_file(so / "sensitivity.json"));
    CHECK(sj["ratios_defined"].get<bool>());
    CHECK(sj["flow_dist"].get<double>() > 0.0);
    CHECK(sj["k1"].get<double>() > 0.0);

    fs::path mo = dir / "mfg";
    RunResult rm = run_cli("mfg --config " + cfg.string() + " --out " + mo.string(), dir);
    CAPTURE(rm.err);
    CHECK(rm.exit_code == 0);
    for (const char* f :
         {"equilibrium_flow.csv", "value.csv", "control.csv", "mfg.json", "manifest.json"})
        CHECK(fs::exists(mo / f));
    Json mj = Json::parse(slurp_file(mo / "mfg.json"));
    CHECK(mj["converged"].get<bool>());
    CHECK(mj["equilibrium_residual"].get<double>() < 1e-5);
}

TEST_CASE("verify runs a suite, reports per-criterion lines, exits by outcome") {
    fs::path dir = fresh_dir("verify");
    fs::path out = dir / "v";
    RunResult r = run_cli("verify --suite hjb --out " + out.string(), dir);
    CAPTURE(r.err);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out / "criteria.csv"));
    CHECK(fs::exists(out / "verify.json"));
    CHECK(r.out.find("PASS") != std::string::npos);

    RunResult bad = run_cli("verify --suite bogus --out " + (dir / "w").string(), dir);
    CHECK(bad.exit_code == 2);
}
