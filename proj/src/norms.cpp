#include "hjbflow/norms.hpp"

#include <cmath>

#include "hjbflow/simplex.hpp"
#include "hjbflow/spectral.hpp"

namespace hjbflow {

Mat d1_matrix(const Grid1D& g) {
    Mat D = Mat::Zero(g.n, g.n);
    double w = 1.0 / (2.0 * g.h);
    for (int i = 0; i < g.n; ++i) {
        D(i, (i + 1) % g.n) = w;
        D(i, (i - 1 + g.n) % g.n) = -w;
    }
    return D;
}

Mat d2_matrix(const Grid1D& g) {
    Mat D = Mat::Zero(g.n, g.n);
    double w = 1.0 / (g.h * g.h);
    for (int i = 0; i < g.n; ++i) {
        D(i, (i + 1) % g.n) = w;
        D(i, i) = -2.0 * w;
        D(i, (i - 1 + g.n) % g.n) = w;
    }
    return D;
}

ScalarField derivative(const ScalarField& f, int order, DerivMethod method) {
    if (order != 1 && order != 2) throw std::invalid_argument("derivative: order must be 1 or 2");
    const Grid1D& g = f.grid;
    if (method == DerivMethod::Spectral) {
        return apply_multiplier(f, [order](double k) {
            Cplx ik(0.0, k);
            return order == 1 ? ik : ik * ik;
        });
    }
    Vec out(g.n);
    if (order == 1) {
        double w = 1.0 / (2.0 * g.h);
        for (int i = 0; i < g.n; ++i)
            out[i] = w * (f.values[(i + 1) % g.n] - f.values[(i - 1 + g.n) % g.n]);
    } else {
        double w = 1.0 / (g.h * g.h);
        for (int i = 0; i < g.n; ++i)
            out[i] = w * (f.values[(i + 1) % g.n] - 2.0 * f.values[i] +
                          f.values[(i - 1 + g.n) % g.n]);
    }
    return {g, std::move(out)};
}

double norm(const ScalarField& f, Space space) {
    double sup = f.values.cwiseAbs().maxCoeff();
    switch (space) {
        case Space::C:
            return sup;
        case Space::C1:
            return sup + derivative(f, 1).values.cwiseAbs().maxCoeff();
        case Space::C2:
            return sup + derivative(f, 1).values.cwiseAbs().maxCoeff() +
                   derivative(f, 2).values.cwiseAbs().maxCoeff();
        case Space::Lip: {
            const Grid1D& g = f.grid;
            double slope = 0.0;
            for (int i = 0; i < g.n; ++i)
                slope = std::max(slope,
                                 std::abs(f.values[(i + 1) % g.n] - f.values[i]) / g.h);
            return sup + slope;
        }
    }
    throw std::logic_error("unreachable");
}

DualNormResult dual_norm_c2_full(const ScalarField& delta) {
    const Grid1D& g = delta.grid;
    double mass = integrate(delta);
    if (std::abs(mass) > 1e-8)
        throw std::invalid_argument("dual_norm_c2: delta must integrate to ~0");

    // Shift g = u - 1 so that u >= 0 and the slack basis is feasible:
    //   max  h*delta'u  s.t.  u <= 2, |D1 u| <= 1, |D2 u| <= 1.
    // The stencil rows annihilate constants, so the derivative bounds are
    // unchanged by the shift.
    Mat D1 = d1_matrix(g), D2 = d2_matrix(g);
    int n = g.n;
    Mat A(5 * n, n);
    A.block(0, 0, n, n) = Mat::Identity(n, n);
    A.block(n, 0, n, n) = D1;
    A.block(2 * n, 0, n, n) = -D1;
    A.block(3 * n, 0, n, n) = D2;
    A.block(4 * n, 0, n, n) = -D2;
    Vec b(5 * n);
    b.head(n).setConstant(2.0);
    b.tail(4 * n).setConstant(1.0);
    Vec c = g.h * delta.values;

    LpSolution lp = simplex_max(c, A, b);
    DualNormResult res;
    res.maximizer = {g, lp.x.array() - 1.0};
    res.value = lp.value - g.h * delta.values.sum();
    res.lp_iterations = lp.iterations;
    return res;
}

double dual_norm_c2(const ScalarField& delta) { return dual_norm_c2_full(delta).value; }

double dual_norm_surrogate(const ScalarField& delta) {
    Vec k = wavenumbers(delta.grid);
    CVec c = fft(delta.values);
    double best = 0.0;
    for (int i = 0; i < c.size(); ++i) {
        // F[delta](k) as an integral approximation: h * sum_j delta_j e^{-ikx_j}
        double amp = std::abs(c[i]) * delta.grid.h;
        best = std::max(best, amp / (1.0 + k[i] * k[i]));
    }
    return best;
}

}  // namespace hjbflow
