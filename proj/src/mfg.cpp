#include "hjbflow/mfg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjbflow {

namespace {

ScalarField interp_path(const FieldPath& p, double t) {
    const auto& ts = p.times;
    if (t <= ts.front()) return p.fields.front();
    if (t >= ts.back()) return p.fields.back();
    auto hi = std::upper_bound(ts.begin(), ts.end(), t);
    int j = static_cast<int>(hi - ts.begin());
    double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
    return (1.0 - w) * p.fields[j - 1] + w * p.fields[j];
}

// Clip negative density values and renormalize to exact unit mass;
// returns the clipped mass (the positivity defect of this slice).
double clip_and_renormalize(Vec& mu, double h) {
    double defect = 0.0;
    for (int i = 0; i < mu.size(); ++i)
        if (mu[i] < 0.0) {
            defect -= mu[i] * h;
            mu[i] = 0.0;
        }
    double mass = mu.sum() * h;
    if (mass <= 0.0) throw std::runtime_error("forward solve: density collapsed to zero");
    mu /= mass;
    return defect;
}

}  // namespace

MeasureFlow solve_forward(const GeneratorSpec& spec, const FieldPath& drift,
                          const ScalarField& mu0, const std::vector<double>& time_grid,
                          int substeps) {
    if (substeps < 1) throw std::invalid_argument("solve_forward: substeps must be >= 1");
    if (drift.grid() != mu0.grid)
        throw std::invalid_argument("solve_forward: drift and mu0 grids differ");
    const Grid1D& g = mu0.grid;
    const int n = g.n;
    const Mat identity = Mat::Identity(n, n);

    Vec mu = mu0.values;
    double defect = 0.0;
    defect += clip_and_renormalize(mu, g.h);

    std::vector<ScalarField> slices;
    slices.reserve(time_grid.size());
    slices.emplace_back(g, mu);

    for (std::size_t i = 0; i + 1 < time_grid.size(); ++i) {
        double dt = (time_grid[i + 1] - time_grid[i]) / substeps;
        for (int s = 0; s < substeps; ++s) {
            double t_mid = time_grid[i] + (s + 0.5) * dt;
            ScalarField drift_mid = interp_path(drift, t_mid);

            // Predictor freezes the K*mu drift at the step's start value,
            // one corrector sweep re-freezes it at the CN midpoint.
            ScalarField mu_field{g, mu};
            Mat At = assemble_A(spec, t_mid, mu_field, drift_mid).matrix.transpose();
            Vec rhs = mu + (0.5 * dt) * (At * mu);
            Vec pred = (identity - (0.5 * dt) * At).partialPivLu().solve(rhs);

            if (spec.has_kernel()) {
                Vec half = 0.5 * (mu + pred);
                double mass = half.sum() * g.h;
                if (mass <= 0.0)
                    throw std::runtime_error("forward solve: density collapsed to zero");
                half /= mass;
                At = assemble_A(spec, t_mid, ScalarField{g, half}, drift_mid)
                         .matrix.transpose();
                rhs = mu + (0.5 * dt) * (At * mu);
                pred = (identity - (0.5 * dt) * At).partialPivLu().solve(rhs);
            }
            mu = pred;
            defect += clip_and_renormalize(mu, g.h);
            if (defect > 0.01)
                throw std::runtime_error(
                    "forward solve: positivity defect exceeds 0.01 "
                    "(grid too coarse for this drift strength)");
        }
        slices.emplace_back(g, mu);
    }

    MeasureFlow out{time_grid, std::move(slices)};
    out.negativity_defect = defect;
    return out;
}

double duality_defect(const GeneratorSpec& spec, double t, const ScalarField& mu,
                      const ScalarField& drift, const ScalarField& f) {
    Mat A = assemble_A(spec, t, mu, drift).matrix;
    double h = mu.grid.h;
    double forward = (A * f.values).dot(mu.values) * h;
    double adjoint = f.values.dot(A.transpose() * mu.values) * h;
    return std::abs(forward - adjoint);
}

namespace {

FieldPath drift_along_control(const HjbProblem& problem, const FieldPath& u,
                              const MeasureFlow& flow) {
    std::vector<ScalarField> fields;
    fields.reserve(u.num_nodes());
    for (int i = 0; i < u.num_nodes(); ++i)
        fields.push_back(controlled_drift(problem.hamiltonian, u.times[i], u.fields[i],
                                          flow.densities[i]));
    return {u.times, std::move(fields)};
}

double flow_surrogate_gap(const MeasureFlow& a, const MeasureFlow& b) {
    double d = 0.0;
    for (int i = 0; i < a.num_nodes(); ++i)
        d = std::max(d, dual_norm_surrogate(a.densities[i] - b.densities[i]));
    return d;
}

}  // namespace

MfgSolution solve_mfg(const HjbProblem& problem, const ScalarField& mu0, double damping,
                      double tol, int max_iters, double picard_tol, int picard_iters) {
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("solve_mfg: damping must be in (0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_mfg: tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("solve_mfg: max_iters must be >= 1");
    if (max_iters < 1) throw std::invalid_argument("solve_mfg: max_iters must be >= 1");

    // Seed: mu0 frozen in time.
    std::vector<ScalarField> frozen(problem.time_grid.size(), mu0);
    MeasureFlow flow{problem.time_grid, std::move(frozen)};

    MfgSolution out;
    for (int k = 1; k <= max_iters; ++k) {
        HjbProblem p = problem;
        p.flow = flow;
        MildSolution backward = solve_mild(p, picard_tol, picard_iters);
        bool tie = false;
        FieldPath u = extract_control(p, backward.value, &tie);
        if (tie) throw std::runtime_error("solve_mfg: Hamiltonian argmax tie");

        MeasureFlow nu = solve_forward(problem.generator, drift_along_control(p, u, flow),
                                       mu0, problem.time_grid, problem.substeps);
        out.positivity_defect = std::max(out.positivity_defect, nu.negativity_defect);

        double r = flow_surrogate_gap(nu, flow);
        out.residual_history.push_back(r);
        if (r <= tol) {
            out.equilibrium_flow = flow;
            out.value = backward.value;
            out.control = u;
            out.iterations = k - 1;
            out.converged = true;
            return out;
        }

        std::vector<ScalarField> mixed;
        mixed.reserve(flow.num_nodes());
        for (int i = 0; i < flow.num_nodes(); ++i)
            mixed.push_back((1.0 - damping) * flow.densities[i] +
                            damping * nu.densities[i]);
        flow = MeasureFlow{problem.time_grid, std::move(mixed)};

        out.equilibrium_flow = flow;
        out.value = backward.value;
        out.control = u;
        out.iterations = k;
    }
    out.converged = false;
    return out;
}

double equilibrium_residual(const MfgSolution& solution, const HjbProblem& problem,
                            double picard_tol, int picard_iters) {
    HjbProblem p = problem;
    p.flow = solution.equilibrium_flow;
    MildSolution backward = solve_mild(p, picard_tol, picard_iters);
    bool tie = false;
    FieldPath u = extract_control(p, backward.value, &tie);
    if (tie) throw std::runtime_error("equilibrium_residual: Hamiltonian argmax tie");

    MeasureFlow nu =
        solve_forward(problem.generator, drift_along_control(p, u, p.flow),
                      p.flow.densities.front(), problem.time_grid, problem.substeps);
    return flow_surrogate_gap(nu, p.flow) + duhamel_residual(p, backward.value);
}

}  // namespace hjbflow
