#include "hjbflow/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hjbflow {

const char* const kLibraryVersion = "1.0.0";

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Setter {
    std::function<void(ScenarioConfig&, const std::string&)> set;
};

template <typename T>
T parse_value(const std::string& path, const std::string& raw);

template <>
double parse_value<double>(const std::string& path, const std::string& raw) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(raw, &pos);
    } catch (const std::exception&) {
        throw ConfigError(path + ": not a number: '" + raw + "'");
    }
    if (pos != raw.size()) throw ConfigError(path + ": trailing characters in '" + raw + "'");
    return v;
}

template <>
int parse_value<int>(const std::string& path, const std::string& raw) {
    std::size_t pos = 0;
    long v;
    try {
        v = std::stol(raw, &pos);
    } catch (const std::exception&) {
        throw ConfigError(path + ": not an integer: '" + raw + "'");
    }
    if (pos != raw.size()) throw ConfigError(path + ": trailing characters in '" + raw + "'");
    return static_cast<int>(v);
}

template <>
unsigned long long parse_value<unsigned long long>(const std::string& path,
                                                   const std::string& raw) {
    std::size_t pos = 0;
    unsigned long long v;
    try {
        v = std::stoull(raw, &pos);
    } catch (const std::exception&) {
        throw ConfigError(path + ": not an unsigned integer: '" + raw + "'");
    }
    if (pos != raw.size()) throw ConfigError(path + ": trailing characters in '" + raw + "'");
    return v;
}

template <>
std::string parse_value<std::string>(const std::string&, const std::string& raw) {
    return raw;
}

using Schema = std::map<std::string, Setter>;

template <typename T>
Setter field(T ScenarioConfig::* member) {
    return {[member](ScenarioConfig& c, const std::string& raw) {
        // path is re-filled by the caller's error context
        c.*member = parse_value<T>("", raw);
    }};
}

const Schema& schema() {
    static const Schema s = {
        {"grid.n_points", field(&ScenarioConfig::n_points)},
        {"grid.half_width", field(&ScenarioConfig::half_width)},
        {"time.T", field(&ScenarioConfig::horizon)},
        {"time.M", field(&ScenarioConfig::steps)},
        {"time.substeps", field(&ScenarioConfig::substeps)},
        {"generator.name", field(&ScenarioConfig::generator)},
        {"generator.leading_coef", field(&ScenarioConfig::leading_coef)},
        {"generator.kernel_amplitude", field(&ScenarioConfig::kernel_amplitude)},
        {"generator.base_drift", field(&ScenarioConfig::base_drift)},
        {"hamiltonian.kind", field(&ScenarioConfig::hamiltonian)},
        {"hamiltonian.alpha", field(&ScenarioConfig::alpha)},
        {"hamiltonian.beta", field(&ScenarioConfig::beta)},
        {"hamiltonian.theta", field(&ScenarioConfig::theta)},
        {"terminal.name", field(&ScenarioConfig::terminal)},
        {"terminal.mu_coupling", field(&ScenarioConfig::mu_coupling)},
        {"terminal.coupling_strength", field(&ScenarioConfig::coupling_strength)},
        {"flows.flow1", field(&ScenarioConfig::flow1)},
        {"flows.flow2", field(&ScenarioConfig::flow2)},
        {"flows.kappa1", field(&ScenarioConfig::kappa1)},
        {"flows.kappa2", field(&ScenarioConfig::kappa2)},
        {"flows.center1", field(&ScenarioConfig::center1)},
        {"flows.center2", field(&ScenarioConfig::center2)},
        {"run.command", field(&ScenarioConfig::command)},
        {"run.scheme", field(&ScenarioConfig::scheme)},
        {"run.tol", field(&ScenarioConfig::tol)},
        {"run.max_iters", field(&ScenarioConfig::max_iters)},
        {"run.damping", field(&ScenarioConfig::damping)},
        {"run.seed", field(&ScenarioConfig::seed)},
        {"run.threads", field(&ScenarioConfig::threads)},
        {"run.out_dir", field(&ScenarioConfig::out_dir)},
    };
    return s;
}

void apply_key(ScenarioConfig& c, const std::string& path, const std::string& raw) {
    auto it = schema().find(path);
    if (it == schema().end()) throw ConfigError("unknown config key: " + path);
    try {
        it->second.set(c, raw);
    } catch (const ConfigError& e) {
        // re-attach the field path lost inside the generic setter
        std::string msg = e.what();
        throw ConfigError(path + msg);
    }
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig c;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                              "' outside any [section]");
        apply_key(c, section + "." + key, val);
    }
    validate_config(c);
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const ScenarioConfig& c) {
    auto check = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    check(c.n_points >= 8 && c.n_points % 2 == 0, "grid.n_points: must be even and >= 8");
    check(c.half_width > 0, "grid.half_width: must be > 0");
    check(c.horizon > 0, "time.T: must be > 0");
    check(c.steps >= 1, "time.M: must be >= 1");
    check(c.substeps >= 1, "time.substeps: must be >= 1");
    check(c.tol > 0, "run.tol: must be > 0");
    check(c.max_iters >= 1, "run.max_iters: must be >= 1");
    check(c.damping > 0 && c.damping <= 1, "run.damping: must be in (0, 1]");
    check(c.threads >= 1, "run.threads: must be >= 1");
    static const std::vector<std::string> gens = {"heat", "var-diffusion", "stable-1.5",
                                                  "stable-var", "drift-only"};
    check(std::find(gens.begin(), gens.end(), c.generator) != gens.end(),
          "generator.name: unknown generator '" + c.generator + "'");
    static const std::vector<std::string> hams = {"quadratic", "legendre", "finite", "none"};
    check(std::find(hams.begin(), hams.end(), c.hamiltonian) != hams.end(),
          "hamiltonian.kind: unknown hamiltonian '" + c.hamiltonian + "'");
    static const std::vector<std::string> terms = {"cos", "gaussian-bump", "zero"};
    check(std::find(terms.begin(), terms.end(), c.terminal) != terms.end(),
          "terminal.name: unknown terminal '" + c.terminal + "'");
    static const std::vector<std::string> cpl = {"none", "mean-shift"};
    check(std::find(cpl.begin(), cpl.end(), c.mu_coupling) != cpl.end(),
          "terminal.mu_coupling: unknown coupling '" + c.mu_coupling + "'");
    static const std::vector<std::string> fls = {"uniform", "bump", "two-bump", "moving-bump"};
    for (const auto& [key, name] :
         {std::pair{"flows.flow1", c.flow1}, std::pair{"flows.flow2", c.flow2}})
        check(std::find(fls.begin(), fls.end(), name) != fls.end(),
              std::string(key) + ": unknown flow '" + name + "'");
    static const std::vector<std::string> cmds = {"solve-hjb", "sensitivity", "mfg", "verify"};
    check(std::find(cmds.begin(), cmds.end(), c.command) != cmds.end(),
          "run.command: unknown command '" + c.command + "'");
    check(c.scheme == "cn" || c.scheme == "spectral",
          "run.scheme: must be 'cn' or 'spectral'");
    if (c.scheme == "spectral")
        check(c.kernel_amplitude == 0.0 &&
                  (c.generator == "heat" || c.generator == "stable-1.5" ||
                   c.generator == "drift-only"),
              "run.scheme: spectral requires a constant-coefficient kernel-free generator");
}

Json to_manifest(const ScenarioConfig& c) {
    Json j;
    j["version"] = kLibraryVersion;
    j["grid"] = {{"n_points", c.n_points}, {"half_width", c.half_width}};
    j["time"] = {{"T", c.horizon}, {"M", c.steps}, {"substeps", c.substeps}};
    j["generator"] = {{"name", c.generator},
                      {"leading_coef", c.leading_coef},
                      {"kernel_amplitude", c.kernel_amplitude},
                      {"base_drift", c.base_drift}};
    j["hamiltonian"] = {
        {"kind", c.hamiltonian}, {"alpha", c.alpha}, {"beta", c.beta}, {"theta", c.theta}};
    j["terminal"] = {{"name", c.terminal},
                     {"mu_coupling", c.mu_coupling},
                     {"coupling_strength", c.coupling_strength}};
    j["flows"] = {{"flow1", c.flow1},   {"flow2", c.flow2},     {"kappa1", c.kappa1},
                  {"kappa2", c.kappa2}, {"center1", c.center1}, {"center2", c.center2}};
    j["run"] = {{"command", c.command}, {"scheme", c.scheme},   {"tol", c.tol},
                {"max_iters", c.max_iters}, {"damping", c.damping}, {"seed", c.seed},
                {"threads", c.threads}, {"out_dir", c.out_dir}};
    return j;
}

ScenarioConfig from_manifest(const Json& m) {
    ScenarioConfig c;
    try {
        c.n_points = m.at("grid").at("n_points").get<int>();
        c.half_width = m.at("grid").at("half_width").get<double>();
        c.horizon = m.at("time").at("T").get<double>();
        c.steps = m.at("time").at("M").get<int>();
        c.substeps = m.at("time").at("substeps").get<int>();
        c.generator = m.at("generator").at("name").get<std::string>();
        c.leading_coef = m.at("generator").at("leading_coef").get<double>();
        c.kernel_amplitude = m.at("generator").at("kernel_amplitude").get<double>();
        c.base_drift = m.at("generator").at("base_drift").get<double>();
        c.hamiltonian = m.at("hamiltonian").at("kind").get<std::string>();
        c.alpha = m.at("hamiltonian").at("alpha").get<double>();
        c.beta = m.at("hamiltonian").at("beta").get<double>();
        c.theta = m.at("hamiltonian").at("theta").get<double>();
        c.terminal = m.at("terminal").at("name").get<std::string>();
        c.mu_coupling = m.at("terminal").at("mu_coupling").get<std::string>();
        c.coupling_strength = m.at("terminal").at("coupling_strength").get<double>();
        c.flow1 = m.at("flows").at("flow1").get<std::string>();
        c.flow2 = m.at("flows").at("flow2").get<std::string>();
        c.kappa1 = m.at("flows").at("kappa1").get<double>();
        c.kappa2 = m.at("flows").at("kappa2").get<double>();
        c.center1 = m.at("flows").at("center1").get<double>();
        c.center2 = m.at("flows").at("center2").get<double>();
        c.command = m.at("run").at("command").get<std::string>();
        c.scheme = m.at("run").at("scheme").get<std::string>();
        c.tol = m.at("run").at("tol").get<double>();
        c.max_iters = m.at("run").at("max_iters").get<int>();
        c.damping = m.at("run").at("damping").get<double>();
        c.seed = m.at("run").at("seed").get<unsigned long long>();
        c.threads = m.at("run").at("threads").get<int>();
        c.out_dir = m.at("run").at("out_dir").get<std::string>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    validate_config(c);
    return c;
}

MeasureFlow build_flow(const ScenarioConfig& c, int which) {
    Grid1D g = make_grid(c.n_points, c.half_width);
    auto t = make_time_grid(c.horizon, c.steps);
    if (which == 1) return make_flow(c.flow1, g, t, c.kappa1, c.center1);
    if (which == 2) return make_flow(c.flow2, g, t, c.kappa2, c.center2);
    throw std::invalid_argument("build_flow: which must be 1 or 2");
}

HjbProblem build_problem(const ScenarioConfig& c) {
    HjbProblem p;
    p.grid = make_grid(c.n_points, c.half_width);
    p.time_grid = make_time_grid(c.horizon, c.steps);
    p.generator = make_generator(c.generator, c.leading_coef, c.kernel_amplitude,
                                 c.base_drift);
    p.hamiltonian = make_hamiltonian(c.hamiltonian, c.alpha, c.beta, c.theta);
    p.terminal = make_terminal(c.terminal, p.grid, c.mu_coupling, c.coupling_strength);
    p.flow = build_flow(c, 1);
    p.substeps = c.substeps;
    p.scheme = c.scheme == "spectral" ? Scheme::SpectralExact : Scheme::CrankNicolson;
    return p;
}

}  // namespace hjbflow
