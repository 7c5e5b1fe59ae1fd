#include "hjbflow/sensitivity.hpp"

#include <algorithm>
#include <cmath>

namespace hjbflow {

MeasureFlow interpolate_flow(const FlowPair& pair, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("interpolate_flow: alpha must be in [0,1]");
    if (alpha == 0.0) return pair.mu1;
    if (alpha == 1.0) return pair.mu2;
    if (pair.mu1.times != pair.mu2.times || pair.mu1.grid() != pair.mu2.grid())
        throw std::invalid_argument("FlowPair: flows must share grids");
    std::vector<ScalarField> dens;
    dens.reserve(pair.mu1.num_nodes());
    for (int i = 0; i < pair.mu1.num_nodes(); ++i)
        dens.emplace_back(pair.mu1.grid(),
                          (1.0 - alpha) * pair.mu1.densities[i].values +
                              alpha * pair.mu2.densities[i].values);
    return {pair.mu1.times, std::move(dens)};
}

double flow_distance(const MeasureFlow& a, const MeasureFlow& b, bool use_lp) {
    if (a.times != b.times || a.grid() != b.grid())
        throw std::invalid_argument("flow_distance: flows must share grids");
    int M = a.num_nodes();
    std::vector<double> screen(M);
    double best_screen = 0.0;
    for (int i = 0; i < M; ++i) {
        screen[i] = dual_norm_surrogate(a.densities[i] - b.densities[i]);
        best_screen = std::max(best_screen, screen[i]);
    }
    if (!use_lp) return best_screen;
    if (best_screen == 0.0) return 0.0;

    // LP on a bounded deterministic node subsample (every node if few).
    const int max_lp_nodes = 33;
    int stride = std::max(1, (M - 1) / (max_lp_nodes - 1) + ((M - 1) % (max_lp_nodes - 1) ? 1 : 0));
    double best = 0.0;
    int argmax_screen = 0;
    for (int i = 0; i < M; ++i)
        if (screen[i] > screen[argmax_screen]) argmax_screen = i;
    for (int i = 0; i < M; i += stride)
        best = std::max(best, dual_norm_c2(a.densities[i] - b.densities[i]));
    best = std::max(best, dual_norm_c2(a.densities[M - 1] - b.densities[M - 1]));
    best = std::max(best,
                    dual_norm_c2(a.densities[argmax_screen] - b.densities[argmax_screen]));
    return best;
}

namespace {

// Propagated alpha-terminal under the alpha-generator at every node.
FieldPath propagate_terminal(const HjbProblem& problem, const MeasureFlow& flow) {
    HjbProblem sub = problem;
    sub.flow = flow;
    PropagatorEngine engine = make_engine(sub);
    const auto& t = sub.time_grid;
    int M = static_cast<int>(t.size()) - 1;
    std::vector<ScalarField> out(M + 1, ScalarField::zero(sub.grid));
    out[M] = sub.terminal.eval(flow.densities.back());
    for (int i = M - 1; i >= 0; --i) out[i] = engine.apply(t[i], t[i + 1], out[i + 1]);
    return {t, std::move(out)};
}

}  // namespace

FieldPath w_alpha(const HjbProblem& problem, const FlowPair& pair, double alpha) {
    return propagate_terminal(problem, interpolate_flow(pair, alpha));
}

WAlphaDerivative w_alpha_derivative(const HjbProblem& problem, const FlowPair& pair,
                                    double alpha, double fd_step) {
    const auto& t = problem.time_grid;
    int M = static_cast<int>(t.size()) - 1;
    MeasureFlow flow_a = interpolate_flow(pair, alpha);
    HjbProblem sub = problem;
    sub.flow = flow_a;
    PropagatorEngine engine = make_engine(sub);

    // psi(r) = U^{r,T}_alpha V^T_alpha
    std::vector<ScalarField> psi(M + 1, ScalarField::zero(problem.grid));
    psi[M] = problem.terminal.eval(flow_a.densities.back());
    for (int i = M - 1; i >= 0; --i) psi[i] = engine.apply(t[i], t[i + 1], psi[i + 1]);

    // y(r) = (dL/dalpha)[r] psi(r); exact via the convolution Gateaux model
    std::vector<ScalarField> y;
    y.reserve(M + 1);
    for (int i = 0; i <= M; ++i) {
        ScalarField chi = pair.mu2.densities[i] - pair.mu1.densities[i];
        y.push_back(gateaux_L(problem.generator, t[i], flow_a.densities[i], chi).apply(psi[i]));
    }

    // dV^T/dalpha: closed form if supplied, else a central alpha-difference
    ScalarField chi_T = pair.mu2.densities.back() - pair.mu1.densities.back();
    ScalarField dVT = ScalarField::zero(problem.grid);
    if (problem.terminal.gateaux) {
        dVT = problem.terminal.gateaux(flow_a.densities.back(), chi_T);
    } else {
        const double e = 1e-4;
        double lo = std::max(0.0, alpha - e), hi = std::min(1.0, alpha + e);
        ScalarField a = problem.terminal.eval(interpolate_flow(pair, hi).densities.back());
        ScalarField b = problem.terminal.eval(interpolate_flow(pair, lo).densities.back());
        dVT = (1.0 / (hi - lo)) * (a - b);
    }

    // representation: Z_i = U^{t_i,T} dVT + trapezoid of U^{t_i,r} y(r)
    std::vector<ScalarField> rep(M + 1, ScalarField::zero(problem.grid));
    rep[M] = dVT;
    for (int i = M - 1; i >= 0; --i) {
        double half = 0.5 * (t[i + 1] - t[i]);
        rep[i] = engine.apply(t[i], t[i + 1], rep[i + 1] + half * y[i + 1]) + half * y[i];
    }

    // independent check: central difference of W_alpha itself
    double e = fd_step;
    double lo = alpha - e, hi = alpha + e;
    if (lo < 0.0) { lo = alpha; }    // one-sided near the ends
    if (hi > 1.0) { hi = alpha; }
    FieldPath W_hi = w_alpha(problem, pair, hi);
    FieldPath W_lo = w_alpha(problem, pair, lo);
    std::vector<ScalarField> fd(M + 1, ScalarField::zero(problem.grid));
    for (int i = 0; i <= M; ++i)
        fd[i] = (1.0 / (hi - lo)) * (W_hi.fields[i] - W_lo.fields[i]);

    WAlphaDerivative out;
    out.representation = {t, std::move(rep)};
    out.fd_check = {t, std::move(fd)};
    return out;
}

SensitivityReport lipschitz_report(const HjbProblem& problem, const FlowPair& pair,
                                   double tol, int max_iters, bool use_lp) {
    if (pair.alpha_grid.size() < 5)
        throw std::invalid_argument("lipschitz_report: alpha_grid needs >= 5 nodes");

    SensitivityReport report;
    report.alpha_grid = pair.alpha_grid;
    int K = static_cast<int>(pair.alpha_grid.size());

    std::vector<FieldPath> paths;
    paths.reserve(K);
    for (double alpha : pair.alpha_grid) {
        HjbProblem sub = problem;
        sub.flow = interpolate_flow(pair, alpha);
        paths.push_back(solve_mild(sub, tol, max_iters).value);
    }

    report.diff_table = Mat::Zero(K, K);
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            double d = 0.0;
            for (int m = 0; m < paths[i].num_nodes(); ++m)
                d = std::max(d, norm(paths[i].fields[m] - paths[j].fields[m], Space::C1));
            double r = d / std::abs(pair.alpha_grid[i] - pair.alpha_grid[j]);
            report.diff_table(i, j) = report.diff_table(j, i) = r;
        }

    report.flow_dist = flow_distance(pair.mu1, pair.mu2, use_lp);
    const FieldPath& V0 = paths.front();
    const FieldPath& V1 = paths.back();
    double dv = 0.0, dg = 0.0;
    for (int m = 0; m < V0.num_nodes(); ++m) {
        dv = std::max(dv, norm(V0.fields[m] - V1.fields[m], Space::C1));
        dg = std::max(dg, norm(derivative(V0.fields[m] - V1.fields[m], 1), Space::C));
    }
    if (report.flow_dist > 0.0) {
        report.lipschitz_V = dv / report.flow_dist;
        report.lipschitz_gradV = dg / report.flow_dist;
    } else {
        report.ratios_defined = false;
    }
    return report;
}

FeedbackRegularityResult feedback_regularity(const HjbProblem& problem,
                                             const std::vector<FlowPair>& pairs,
                                             double tol, int max_iters, bool use_lp) {
    if (pairs.empty()) throw std::invalid_argument("feedback_regularity: needs >= 1 pair");
    FeedbackRegularityResult result;
    for (const FlowPair& pair : pairs) {
        FeedbackRegularityRow row;
        row.flow_dist = flow_distance(pair.mu1, pair.mu2, use_lp);
        if (row.flow_dist == 0.0) {
            row.skipped = true;
            result.table.push_back(row);
            continue;
        }
        bool tie1 = false, tie2 = false;
        HjbProblem p1 = problem;
        p1.flow = pair.mu1;
        FieldPath u1 = extract_control(p1, solve_mild(p1, tol, max_iters).value, &tie1);
        HjbProblem p2 = problem;
        p2.flow = pair.mu2;
        FieldPath u2 = extract_control(p2, solve_mild(p2, tol, max_iters).value, &tie2);
        if (tie1 || tie2)
            throw std::runtime_error("feedback_regularity: argmax uniqueness violated");
        double d = 0.0;
        for (int m = 0; m < u1.num_nodes(); ++m)
            d = std::max(d, norm(u1.fields[m] - u2.fields[m], Space::C));
        row.control_diff = d;
        row.ratio = d / row.flow_dist;
        result.k1 = std::max(result.k1, row.ratio);
        result.table.push_back(row);
    }
    return result;
}

}  // namespace hjbflow
