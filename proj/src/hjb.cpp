#include "hjbflow/hjb.hpp"

#include <cmath>
#include <sstream>

namespace hjbflow {

PropagatorEngine::Family generator_family(const GeneratorSpec& spec,
                                          const MeasureFlow& flow) {
    return [spec, flow](double t) { return assemble_L(spec, t, flow.at(t)); };
}

PropagatorEngine make_engine(const HjbProblem& problem) {
    return PropagatorEngine(problem.grid, problem.time_grid, problem.substeps,
                            problem.scheme, generator_family(problem.generator, problem.flow),
                            problem.generator.symbol);
}

namespace {

// H_s(., grad phi(s), mu_s) at every time node.
std::vector<ScalarField> hamiltonian_terms(const HjbProblem& problem, const FieldPath& phi) {
    std::vector<ScalarField> G;
    G.reserve(phi.num_nodes());
    for (int i = 0; i < phi.num_nodes(); ++i) {
        ScalarField p = derivative(phi.fields[i], 1, DerivMethod::Central);
        G.push_back(eval_H(problem.hamiltonian, phi.times[i], p,
                           problem.flow.at(phi.times[i])));
    }
    return G;
}

ScalarField terminal_field(const HjbProblem& problem) {
    return problem.terminal.eval(problem.flow.densities.back());
}

}  // namespace

FieldPath apply_psi(const HjbProblem& problem, const FieldPath& phi,
                    const PropagatorEngine& engine) {
    const auto& t = problem.time_grid;
    int M = static_cast<int>(t.size()) - 1;
    std::vector<ScalarField> G = hamiltonian_terms(problem, phi);

    std::vector<ScalarField> out(M + 1, ScalarField::zero(problem.grid));
    out[M] = terminal_field(problem);
    for (int i = M - 1; i >= 0; --i) {
        double half = 0.5 * (t[i + 1] - t[i]);
        ScalarField carry = out[i + 1] + half * G[i + 1];
        out[i] = engine.apply(t[i], t[i + 1], carry) + half * G[i];
    }
    return {t, std::move(out)};
}

FieldPath apply_psi_direct(const HjbProblem& problem, const FieldPath& phi,
                           const PropagatorEngine& engine) {
    const auto& t = problem.time_grid;
    int M = static_cast<int>(t.size()) - 1;
    std::vector<ScalarField> G = hamiltonian_terms(problem, phi);
    ScalarField vT = terminal_field(problem);

    std::vector<ScalarField> out;
    out.reserve(M + 1);
    for (int i = 0; i <= M; ++i) {
        ScalarField acc = engine.apply(t[i], t[M], vT);
        for (int j = i; j <= M; ++j) {
            double w;
            if (j == i)
                w = (i == M) ? 0.0 : 0.5 * (t[i + 1] - t[i]);
            else if (j == M)
                w = 0.5 * (t[M] - t[M - 1]);
            else
                w = 0.5 * (t[j + 1] - t[j - 1]);
            if (w != 0.0) acc = acc + w * engine.apply(t[i], t[j], G[j]);
        }
        out.push_back(acc);
    }
    return {t, std::move(out)};
}

namespace {

double path_diff_c1(const FieldPath& a, const FieldPath& b) {
    double d = 0.0;
    for (int i = 0; i < a.num_nodes(); ++i)
        d = std::max(d, norm(a.fields[i] - b.fields[i], Space::C1));
    return d;
}

HjbProblem slice_problem(const HjbProblem& problem, int lo, int hi,
                         const ScalarField* terminal_override) {
    HjbProblem sub = problem;
    sub.time_grid = std::vector<double>(problem.time_grid.begin() + lo,
                                        problem.time_grid.begin() + hi + 1);
    std::vector<ScalarField> dens(problem.flow.densities.begin() + lo,
                                  problem.flow.densities.begin() + hi + 1);
    sub.flow = MeasureFlow(sub.time_grid, std::move(dens));
    if (terminal_override) {
        ScalarField fixed = *terminal_override;
        sub.terminal.eval = [fixed](const ScalarField&) { return fixed; };
        sub.terminal.gateaux = {};
    }
    return sub;
}

MildSolution solve_mild_impl(const HjbProblem& problem, double tol, int max_iters,
                             int depth) {
    PropagatorEngine engine = make_engine(problem);
    const auto& t = problem.time_grid;
    int M = static_cast<int>(t.size()) - 1;

    // V0(t_i) = U^{t_i,T} V^T, the exact solution when H vanishes
    std::vector<ScalarField> init(M + 1, ScalarField::zero(problem.grid));
    init[M] = problem.terminal.eval(problem.flow.densities.back());
    for (int i = M - 1; i >= 0; --i) init[i] = engine.apply(t[i], t[i + 1], init[i + 1]);
    FieldPath V{t, std::move(init)};

    MildDiagnostics diag;
    for (int k = 0; k < max_iters; ++k) {
        FieldPath next = apply_psi(problem, V, engine);
        double d = path_diff_c1(next, V);
        diag.diffs.push_back(d);
        V = std::move(next);
        diag.iterations = k + 1;
        if (d <= tol) {
            diag.converged = true;
            break;
        }
    }
    for (std::size_t k = 1; k < diag.diffs.size(); ++k)
        if (diag.diffs[k - 1] > 0.0)
            diag.contraction_factor =
                std::max(diag.contraction_factor, diag.diffs[k] / diag.diffs[k - 1]);
    if (diag.converged) {
        diag.split_depth = depth;
        return {std::move(V), std::move(diag)};
    }

    // No contraction on this horizon: bisect and chain backward.
    if (depth >= 6 || M < 2) {
        std::ostringstream msg;
        msg << "solve_mild: no contraction at split depth " << depth << "; diffs:";
        for (double d : diag.diffs) msg << " " << d;
        throw std::runtime_error(msg.str());
    }
    int mid = M / 2;
    MildSolution upper = solve_mild_impl(slice_problem(problem, mid, M, nullptr), tol,
                                         max_iters, depth + 1);
    ScalarField glue = upper.value.fields.front();
    MildSolution lower = solve_mild_impl(slice_problem(problem, 0, mid, &glue), tol,
                                         max_iters, depth + 1);

    std::vector<ScalarField> joined(lower.value.fields.begin(), lower.value.fields.end());
    joined.insert(joined.end(), upper.value.fields.begin() + 1, upper.value.fields.end());
    MildDiagnostics merged;
    merged.iterations = diag.iterations + lower.diagnostics.iterations +
                        upper.diagnostics.iterations;
    merged.diffs = lower.diagnostics.diffs;
    merged.diffs.insert(merged.diffs.end(), upper.diagnostics.diffs.begin(),
                        upper.diagnostics.diffs.end());
    merged.contraction_factor = std::max(lower.diagnostics.contraction_factor,
                                         upper.diagnostics.contraction_factor);
    merged.split_depth = std::max(lower.diagnostics.split_depth,
                                  upper.diagnostics.split_depth);
    merged.converged = lower.diagnostics.converged && upper.diagnostics.converged;
    return {FieldPath{problem.time_grid, std::move(joined)}, std::move(merged)};
}

}  // namespace

MildSolution solve_mild(const HjbProblem& problem, double tol, int max_iters) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_mild: tol must be positive");
    problem.hamiltonian.validate();
    return solve_mild_impl(problem, tol, max_iters, 0);
}

double duhamel_residual(const HjbProblem& problem, const FieldPath& V) {
    PropagatorEngine engine = make_engine(problem);
    FieldPath psi = apply_psi(problem, V, engine);
    return path_diff_c1(psi, V);
}

FieldPath extract_control(const HjbProblem& problem, const FieldPath& V, bool* tie_flag) {
    std::vector<ScalarField> u;
    bool tie = false;
    u.reserve(V.num_nodes());
    for (int i = 0; i < V.num_nodes(); ++i) {
        ScalarField p = derivative(V.fields[i], 1, DerivMethod::Central);
        ControlField cf = optimal_control(problem.hamiltonian, V.times[i], p,
                                          problem.flow.at(V.times[i]));
        tie = tie || cf.tie;
        u.push_back(std::move(cf.u));
    }
    if (tie_flag) *tie_flag = tie;
    return {V.times, std::move(u)};
}

}  // namespace hjbflow
