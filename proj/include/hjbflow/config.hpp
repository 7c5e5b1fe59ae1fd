#ifndef HJBFLOW_CONFIG_HPP
#define HJBFLOW_CONFIG_HPP

#include <string>

#include "hjbflow/catalog.hpp"
#include "hjbflow/io.hpp"

namespace hjbflow {

/// Config/usage problems; mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * One scenario, covering every parameter that affects numerics. The text
 * form is sectioned key=value ([grid], [time], [generator], [hamiltonian],
 * [terminal], [flows], [run]); unknown sections or keys are hard errors
 * reported as section.key paths. See README.md for the full schema.
 */
struct ScenarioConfig {
    // [grid]
    int n_points = 64;
    double half_width = 3.14159265358979323846;
    // [time]
    double horizon = 0.5;
    int steps = 50;
    int substeps = 1;
    // [generator]
    std::string generator = "heat";
    double leading_coef = 2.0;
    double kernel_amplitude = 0.0;
    double base_drift = 0.0;
    // [hamiltonian]
    std::string hamiltonian = "quadratic";
    double alpha = 0.0;
    double beta = 1.0;
    double theta = 1.0;
    // [terminal]
    std::string terminal = "cos";
    std::string mu_coupling = "none";
    double coupling_strength = 0.5;
    // [flows]
    std::string flow1 = "uniform";
    std::string flow2 = "bump";
    double kappa1 = 2.0, kappa2 = 2.0;
    double center1 = 0.0, center2 = 0.0;
    // [run]
    std::string command = "solve-hjb";
    std::string scheme = "cn";  // cn | spectral
    double tol = 1e-8;
    int max_iters = 50;
    double damping = 0.5;
    unsigned long long seed = 0;
    int threads = 1;
    std::string out_dir = "out";
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
void validate_config(const ScenarioConfig& c);

/// Full resolved-parameter record; from_manifest(to_manifest(c)) == c.
Json to_manifest(const ScenarioConfig& c);
ScenarioConfig from_manifest(const Json& manifest);

/// Assembles the catalog pieces into a runnable problem (flow = flow1).
HjbProblem build_problem(const ScenarioConfig& c);
MeasureFlow build_flow(const ScenarioConfig& c, int which);

extern const char* const kLibraryVersion;

}  // namespace hjbflow

#endif
