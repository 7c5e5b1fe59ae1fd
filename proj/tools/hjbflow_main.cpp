#include <CLI11.hpp>
#include <Eigen/Core>
#include <iostream>

#include "hjbflow/config.hpp"
#include "hjbflow/mfg.hpp"
#include "hjbflow/sensitivity.hpp"
#include "hjbflow/verify.hpp"

namespace {

using namespace hjbflow;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::string suite = "all";
    unsigned long long seed = 0;
    bool seed_set = false;
    int threads = 0;
};

ScenarioConfig resolve_config(const CliOverrides& o, const std::string& command) {
    ScenarioConfig c;
    if (!o.config_path.empty()) c = load_config(o.config_path);
    c.command = command;
    if (!o.out_dir.empty()) c.out_dir = o.out_dir;
    if (o.seed_set) c.seed = o.seed;
    if (o.threads > 0) c.threads = o.threads;
    validate_config(c);
    Eigen::setNbThreads(c.threads);
    return c;
}

void write_manifest(const ScenarioConfig& c) {
    // The manifest records the scenario, not the output location: reruns of
    // the same scenario into different directories must be byte-identical.
    ScenarioConfig recorded = c;
    recorded.out_dir = ScenarioConfig{}.out_dir;
    write_json(c.out_dir + "/manifest.json", to_manifest(recorded));
}

int run_solve_hjb(const ScenarioConfig& c) {
    HjbProblem p = build_problem(c);
    MildSolution sol = solve_mild(p, c.tol, c.max_iters);
    bool tie = false;
    FieldPath u = extract_control(p, sol.value, &tie);
    write_csv(c.out_dir + "/value.csv", path_table(sol.value, "value"));
    write_csv(c.out_dir + "/control.csv", path_table(u, "control"));
    Json diag = {{"iterations", sol.diagnostics.iterations},
                 {"diffs", sol.diagnostics.diffs},
                 {"contraction_factor", sol.diagnostics.contraction_factor},
                 {"split_depth", sol.diagnostics.split_depth},
                 {"converged", sol.diagnostics.converged},
                 {"duhamel_residual", duhamel_residual(p, sol.value)},
                 {"control_argmax_tie", tie}};
    write_json(c.out_dir + "/solve.json", diag);
    write_manifest(c);
    return kExitOk;
}

int run_sensitivity(const ScenarioConfig& c) {
    HjbProblem p = build_problem(c);
    FlowPair pair{build_flow(c, 1), build_flow(c, 2)};
    SensitivityReport rep = lipschitz_report(p, pair, c.tol, c.max_iters);
    FeedbackRegularityResult fb = feedback_regularity(p, {pair}, c.tol, c.max_iters);

    CsvTable table;
    table.columns = {"alpha_i", "alpha_j", "ratio"};
    for (int i = 0; i < int(rep.alpha_grid.size()); ++i)
        for (int j = i + 1; j < int(rep.alpha_grid.size()); ++j)
            table.add_row({rep.alpha_grid[i], rep.alpha_grid[j], rep.diff_table(i, j)});
    write_csv(c.out_dir + "/diff_table.csv", table);

    Json j = {{"flow_dist", rep.flow_dist},
              {"lipschitz_V", rep.lipschitz_V},
              {"lipschitz_gradV", rep.lipschitz_gradV},
              {"ratios_defined", rep.ratios_defined},
              {"k1", fb.k1}};
    write_json(c.out_dir + "/sensitivity.json", j);
    write_manifest(c);
    return kExitOk;
}

int run_mfg(const ScenarioConfig& c) {
    HjbProblem p = build_problem(c);
    ScalarField mu0 = p.flow.densities.front();
    MfgSolution sol = solve_mfg(p, mu0, c.damping, c.tol, c.max_iters);
    write_csv(c.out_dir + "/equilibrium_flow.csv", flow_table(sol.equilibrium_flow));
    write_csv(c.out_dir + "/value.csv", path_table(sol.value, "value"));
    write_csv(c.out_dir + "/control.csv", path_table(sol.control, "control"));
    Json j = {{"iterations", sol.iterations},
              {"residual_history", sol.residual_history},
              {"positivity_defect", sol.positivity_defect},
              {"converged", sol.converged},
              {"equilibrium_residual", equilibrium_residual(sol, p)}};
    write_json(c.out_dir + "/mfg.json", j);
    write_manifest(c);
    return kExitOk;
}

int run_verify(const ScenarioConfig& c, const std::string& suite) {
    auto results = run_verify_suite(suite, c.seed);
    write_verify_artifacts(c.out_dir, results);
    write_manifest(c);
    std::cout << render_verify_table(results);
    bool ok = std::all_of(results.begin(), results.end(),
                          [](const CriterionResult& r) { return r.pass(); });
    return ok ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hjbflow: backward propagators, HJB mild solutions, measure-flow "
                 "sensitivity, and coupled backward-forward equilibria"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOverrides o;
    app.add_option("--config", o.config_path, "scenario config file")
        ->envname("HJBFLOW_CONFIG");
    app.add_option("--out", o.out_dir, "output directory (overrides run.out_dir)")
        ->envname("HJBFLOW_OUT");
    auto* seed_opt =
        app.add_option("--seed", o.seed, "seed override")->envname("HJBFLOW_SEED");
    app.add_option("--threads", o.threads, "thread count override")
        ->envname("HJBFLOW_THREADS");

    CLI::App* cmd_solve = app.add_subcommand("solve-hjb", "solve one backward problem");
    CLI::App* cmd_sens = app.add_subcommand("sensitivity", "measure-flow sensitivity study");
    CLI::App* cmd_mfg = app.add_subcommand("mfg", "coupled backward-forward fixed point");
    CLI::App* cmd_verify = app.add_subcommand("verify", "run acceptance suites");
    cmd_verify->add_option("--suite", o.suite,
                           "propagator | hjb | sensitivity | mfg | all");

    CLI11_PARSE(app, argc, argv);
    o.seed_set = seed_opt->count() > 0 || std::getenv("HJBFLOW_SEED") != nullptr;

    try {
        if (cmd_verify->parsed()) return run_verify(resolve_config(o, "verify"), o.suite);
        if (o.config_path.empty())
            throw ConfigError("--config is required for this subcommand");
        if (cmd_solve->parsed()) return run_solve_hjb(resolve_config(o, "solve-hjb"));
        if (cmd_sens->parsed()) return run_sensitivity(resolve_config(o, "sensitivity"));
        if (cmd_mfg->parsed()) return run_mfg(resolve_config(o, "mfg"));
    } catch (const hjbflow::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
