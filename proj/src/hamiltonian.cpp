#include "hjbflow/hamiltonian.hpp"

#include <cmath>
#include <limits>

namespace hjbflow {

namespace {

// Golden-section maximization of a unimodal function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Coarse scan then golden polish; concavity keeps the bracket valid.
double concave_argmax(const std::function<double(double)>& f, double lo, double hi) {
    const int scan = 64;
    int best = 0;
    double best_val = f(lo);
    for (int i = 1; i <= scan; ++i) {
        double u = lo + (hi - lo) * i / scan;
        double v = f(u);
        if (v > best_val) { best_val = v; best = i; }
    }
    double du = (hi - lo) / scan;
    double a = std::max(lo, lo + (best - 1) * du);
    double b = std::min(hi, lo + (best + 1) * du);
    return golden_max(f, a, b, 1e-10);
}

}  // namespace

void HamiltonianSpec::validate() const {
    switch (kind) {
        case HamiltonianKind::QuadraticHinf:
            if (!alpha || !beta || !theta)
                throw std::invalid_argument("QuadraticHinf needs alpha, beta, theta");
            break;
        case HamiltonianKind::LegendreConcave:
            if (!running_cost) throw std::invalid_argument("LegendreConcave needs J");
            if (!(control_hi > control_lo))
                throw std::invalid_argument("empty control bracket");
            break;
        case HamiltonianKind::FiniteControls:
            if (controls.empty())
                throw std::invalid_argument("FiniteControls set must be nonempty");
            if (!running_cost || !drift)
                throw std::invalid_argument("FiniteControls needs h and J");
            break;
    }
}

ScalarField eval_H(const HamiltonianSpec& spec, double t, const ScalarField& p,
                   const ScalarField& mu) {
    const Grid1D& g = p.grid;
    Vec out(g.n);
    switch (spec.kind) {
        case HamiltonianKind::QuadraticHinf:
            for (int i = 0; i < g.n; ++i) {
                double x = g.x(i);
                double th = spec.theta(t, x, mu);
                if (!(th >= spec.theta_min))
                    throw std::invalid_argument("QuadraticHinf requires theta > 0");
                double be = spec.beta(t, x, mu);
                out[i] = spec.alpha(t, x, mu) +
                         be * be * p.values[i] * p.values[i] / (4.0 * th);
            }
            break;
        case HamiltonianKind::LegendreConcave:
            for (int i = 0; i < g.n; ++i) {
                double x = g.x(i), pv = p.values[i];
                auto obj = [&](double u) { return u * pv + spec.running_cost(t, x, u, mu); };
                out[i] = obj(concave_argmax(obj, spec.control_lo, spec.control_hi));
            }
            break;
        case HamiltonianKind::FiniteControls:
            for (int i = 0; i < g.n; ++i) {
                double x = g.x(i), pv = p.values[i];
                double best = -std::numeric_limits<double>::infinity();
                for (double u : spec.controls)
                    best = std::max(best,
                                    spec.drift(t, x, u, mu) * pv +
                                        spec.running_cost(t, x, u, mu));
                out[i] = best;
            }
            break;
    }
    return {g, std::move(out)};
}

ControlField optimal_control(const HamiltonianSpec& spec, double t, const ScalarField& p,
                             const ScalarField& mu) {
    const Grid1D& g = p.grid;
    ControlField cf{ScalarField::zero(g), false};
    switch (spec.kind) {
        case HamiltonianKind::QuadraticHinf:
            for (int i = 0; i < g.n; ++i) {
                double x = g.x(i);
                cf.u.values[i] =
                    spec.beta(t, x, mu) * p.values[i] / (2.0 * spec.theta(t, x, mu));
            }
            break;
        case HamiltonianKind::LegendreConcave:
            for (int i = 0; i < g.n; ++i) {
                double x = g.x(i), pv = p.values[i];
                auto obj = [&](double u) { return u * pv + spec.running_cost(t, x, u, mu); };
                cf.u.values[i] = concave_argmax(obj, spec.control_lo, spec.control_hi);
            }
            break;
        case HamiltonianKind::FiniteControls:
            for (int i = 0; i < g.n; ++i) {
                double x = g.x(i), pv = p.values[i];
                double best = -std::numeric_limits<double>::infinity();
                double arg = spec.controls.front();
                bool tie = false;
                for (double u : spec.controls) {
                    double v = spec.drift(t, x, u, mu) * pv + spec.running_cost(t, x, u, mu);
                    if (v > best + 1e-14) {
                        best = v; arg = u; tie = false;
                    } else if (std::abs(v - best) <= 1e-14) {
                        tie = true;  // lowest index kept
                    }
                }
                cf.u.values[i] = arg;
                cf.tie = cf.tie || tie;
            }
            break;
    }
    return cf;
}

ScalarField controlled_drift(const HamiltonianSpec& spec, double t, const ScalarField& u,
                             const ScalarField& mu) {
    const Grid1D& g = u.grid;
    Vec out(g.n);
    switch (spec.kind) {
        case HamiltonianKind::QuadraticHinf:
            for (int i = 0; i < g.n; ++i)
                out[i] = spec.beta(t, g.x(i), mu) * u.values[i];
            break;
        case HamiltonianKind::LegendreConcave:
            out = u.values;
            break;
        case HamiltonianKind::FiniteControls:
            for (int i = 0; i < g.n; ++i)
                out[i] = spec.drift(t, g.x(i), u.values[i], mu);
            break;
    }
    return {g, std::move(out)};
}

}  // namespace hjbflow
