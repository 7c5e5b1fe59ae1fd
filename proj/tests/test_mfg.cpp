#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hjbflow/catalog.hpp"
#include "hjbflow/mfg.hpp"
#include "hjbflow/norms.hpp"

using namespace hjbflow;

namespace {
constexpr double kPi = 3.14159265358979323846;

FieldPath zero_drift(const Grid1D& g, const std::vector<double>& tg) {
    std::vector<ScalarField> f(tg.size(), ScalarField::zero(g));
    return FieldPath{tg, std::move(f)};
}

HjbProblem uncoupled_problem(int n, int steps) {
    HjbProblem p;
    p.grid = make_grid(n, kPi);
    p.time_grid = make_time_grid(0.5, steps);
    p.generator = make_generator("heat", 2.0);
    p.hamiltonian = make_hamiltonian("quadratic", 0.0, 1.0, 0.5);
    p.terminal = make_terminal("cos", p.grid);
    p.flow = make_flow("uniform", p.grid, p.time_grid);
    return p;
}
}  // namespace

TEST_CASE("pure diffusion preserves the uniform density exactly") {
    Grid1D g = make_grid(64, kPi);
    auto tg = make_time_grid(0.5, 25);
    GeneratorSpec gen = make_generator("heat", 2.0);
    ScalarField mu0 = make_flow("uniform", g, {0.0}).densities[0];

    MeasureFlow flow = solve_forward(gen, zero_drift(g, tg), mu0, tg);
    for (int i = 0; i <= 25; ++i)
        CHECK((flow.densities[i].values - mu0.values).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(flow.negativity_defect == 0.0);
}

TEST_CASE("single-mode density relaxes at the analytic heat rate") {
    Grid1D g = make_grid(128, kPi);
    auto tg = make_time_grid(0.25, 400);
    GeneratorSpec gen = make_generator("heat", 2.0);
    double c = 1.0 / (2.0 * kPi);
    ScalarField mu0 =
        ScalarField::sample(g, [&](double x) { return c * (1.0 + 0.5 * std::cos(x)); });

    MeasureFlow flow = solve_forward(gen, zero_drift(g, tg), mu0, tg, 2);
    double worst = 0.0;
    for (int i = 0; i <= 400; i += 80) {
        double t = tg[i];
        ScalarField exact = ScalarField::sample(g, [&](double x) {
            return c * (1.0 + 0.5 * std::exp(-t) * std::cos(x));
        });
        worst = std::max(worst,
                         (flow.densities[i].values - exact.values).cwiseAbs().maxCoeff());
    }
    // semigroup eigenvalue error: discrete Laplacian symbol vs -1, O(h^2)
    CHECK(worst < 5e-4);

    // exact mass conservation at every node
    for (int i = 0; i <= 400; i += 40)
        CHECK(std::abs(integrate(flow.densities[i]) - 1.0) < 1e-13);
}

TEST_CASE("discrete duality holds to roundoff for coupled generators") {
    Grid1D g = make_grid(48, kPi);
    GeneratorSpec gen = make_generator("stable-1.5", 1.0, /*kernel_amplitude=*/0.4,
                                       /*base_drift=*/0.3);
    ScalarField mu = make_flow("bump", g, {0.0}).densities[0];
    ScalarField drift = ScalarField::sample(g, [](double x) { return std::sin(2 * x); });
    ScalarField f = ScalarField::sample(g, [](double x) { return std::cos(3 * x) + x / 9; });
    CHECK(duality_defect(gen, 0.1, mu, drift, f) < 1e-12);
}

TEST_CASE("input validation and the positivity-defect guard") {
    Grid1D g = make_grid(64, kPi);
    auto tg = make_time_grid(0.5, 20);
    GeneratorSpec gen = make_generator("heat", 2.0);
    ScalarField mu0 = make_flow("uniform", g, {0.0}).densities[0];

    FieldPath bad_grid = zero_drift(make_grid(32, kPi), tg);
    CHECK_THROWS_AS(solve_forward(gen, bad_grid, mu0, tg), std::invalid_argument);
    CHECK_THROWS_AS(solve_forward(gen, zero_drift(g, tg), mu0, tg, 0),
                    std::invalid_argument);

    // advection far stronger than diffusion on a coarse, long-step grid
    // drives slices negative past the 1% budget
    Grid1D coarse = make_grid(16, kPi);
    auto long_tg = make_time_grid(1.0, 4);
    GeneratorSpec weak = make_generator("heat", 0.01);
    ScalarField peaked = make_flow("bump", coarse, {0.0}, /*kappa=*/3.0).densities[0];
    std::vector<ScalarField> strong(long_tg.size(),
                                    ScalarField::sample(coarse, [](double x) {
                                        return 25.0 * std::sin(x);
                                    }));
    FieldPath drift{long_tg, std::move(strong)};
    CHECK_THROWS_WITH_AS(solve_forward(weak, drift, peaked, long_tg),
                         doctest::Contains("positivity defect"), std::runtime_error);
}

TEST_CASE("uncoupled system: one sweep reaches the fixed point") {
    HjbProblem p = uncoupled_problem(64, 50);
    ScalarField mu0 = make_flow("bump", p.grid, {0.0}).densities[0];

    MfgSolution sol = solve_mfg(p, mu0, /*damping=*/1.0, 1e-8, 20);
    CHECK(sol.converged);
    CHECK(sol.iterations == 1);
    REQUIRE(sol.residual_history.size() >= 2);
    CHECK(sol.residual_history.back() <= 1e-8);
    CHECK(equilibrium_residual(sol, p) <= 2e-8 + 10.0 * 1e-9);

    // the value path solves the HJB under the equilibrium flow
    HjbProblem fixed = p;
    fixed.flow = sol.equilibrium_flow;
    CHECK(duhamel_residual(fixed, sol.value) <= 1e-7);
}

TEST_CASE("solver argument validation and the max_iters escape hatch") {
    HjbProblem p = uncoupled_problem(32, 10);
    ScalarField mu0 = make_flow("uniform", p.grid, {0.0}).densities[0];
    CHECK_THROWS_AS(solve_mfg(p, mu0, 0.0, 1e-8, 5), std::invalid_argument);
    CHECK_THROWS_AS(solve_mfg(p, mu0, 1.5, 1e-8, 5), std::invalid_argument);
    CHECK_THROWS_AS(solve_mfg(p, mu0, 0.5, -1.0, 5), std::invalid_argument);

    // a genuinely coupled system cannot finish in one update
    HjbProblem c = p;
    c.generator = make_generator("heat", 2.0, /*kernel_amplitude=*/0.3);
    ScalarField bump = make_flow("bump", c.grid, {0.0}).densities[0];
    MfgSolution cut = solve_mfg(c, bump, 0.5, 1e-12, 1);
    CHECK_FALSE(cut.converged);
    CHECK(cut.iterations == 1);
    CHECK(cut.residual_history.size() == 1);
}

TEST_CASE("weak coupling: converged equilibrium and a calibrated residual") {
    HjbProblem p = uncoupled_problem(64, 50);
    p.generator = make_generator("heat", 2.0, /*kernel_amplitude=*/0.1);
    p.terminal = make_terminal("cos", p.grid, "mean-shift", 0.3);
    ScalarField mu0 = make_flow("bump", p.grid, {0.0}).densities[0];

    MfgSolution sol = solve_mfg(p, mu0, 0.5, 1e-8, 60);
    CHECK(sol.converged);
    CHECK(sol.positivity_defect < 1e-3);
    double res = equilibrium_residual(sol, p);
    CHECK(res < 1e-6);

    // residual decreases monotonically over the damped tail
    const auto& hist = sol.residual_history;
    REQUIRE(hist.size() >= 3);
    for (std::size_t k = 2; k < hist.size(); ++k) CHECK(hist[k] < hist[k - 1]);

    // a hand-perturbed flow is detected: its residual sits well above the
    // converged one but below the trivially-wrong scale
    MfgSolution bad = sol;
    for (auto& d : bad.equilibrium_flow.densities) {
        Vec v = d.values;
        for (int i = 0; i < v.size(); ++i)
            v[i] *= 1.0 + 0.02 * std::cos(d.grid.x(i));
        double mass = 0.0;
        for (int i = 0; i < v.size(); ++i) mass += v[i] * d.grid.h;
        d = ScalarField{d.grid, v / mass};
    }
    double bad_res = equilibrium_residual(bad, p);
    CHECK(bad_res > 10.0 * res);
    CHECK(bad_res > 1e-5);
    CHECK(bad_res < 1e-1);
}
