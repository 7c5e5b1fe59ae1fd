#include "hjbflow/generator.hpp"

#include <cmath>

#include "hjbflow/norms.hpp"
#include "hjbflow/spectral.hpp"

namespace hjbflow {

ScalarField DiscreteOperator::apply(const ScalarField& f) const {
    if (f.grid != grid) throw std::invalid_argument("operator/field grid mismatch");
    return {grid, matrix * f.values};
}

namespace {

double wrap_displacement(double r, double L) {
    while (r >= L) r -= 2.0 * L;
    while (r < -L) r += 2.0 * L;
    return r;
}

void enforce_row_sums(DiscreteOperator& op) {
    double worst = 0.0;
    for (int i = 0; i < op.grid.n; ++i) {
        double s = op.matrix.row(i).sum();
        op.matrix(i, i) -= s;
        worst = std::max(worst, std::abs(s));
    }
    op.row_sum_correction = worst;
}

// Dense rows of the fractional operator: row i applies the Fourier
// multiplier -|k|^{alpha(x_i)}. Each row is a circulant slice obtained
// from one inverse transform of the multiplier vector.
Mat fractional_matrix(const Grid1D& g, const std::function<double(double)>& alpha_order,
                      const std::function<double(double, double)>& amplitude, double t) {
    Vec k = wavenumbers(g);
    Mat M(g.n, g.n);
    for (int i = 0; i < g.n; ++i) {
        double alpha = alpha_order(g.x(i));
        if (!(alpha > 1.0 && alpha < 2.0))
            throw std::invalid_argument("stable-like order alpha must lie in (1,2)");
        CVec mult(g.n);
        for (int m = 0; m < g.n; ++m)
            mult[m] = Cplx(-std::pow(std::abs(k[m]), alpha), 0.0);
        Vec v = ifft_real(mult);
        double a = amplitude(t, g.x(i));
        for (int j = 0; j < g.n; ++j) M(i, j) = a * v[(i - j + g.n) % g.n];
    }
    return M;
}

}  // namespace

Vec kernel_convolution(const GeneratorSpec& spec, const ScalarField& density) {
    const Grid1D& g = density.grid;
    Vec out = Vec::Zero(g.n);
    if (!spec.has_kernel()) return out;
    for (int i = 0; i < g.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < g.n; ++j)
            s += spec.kernel(wrap_displacement(g.x(i) - g.x(j), g.half_width)) *
                 density.values[j];
        out[i] = s * g.h;
    }
    return out;
}

DiscreteOperator assemble_L(const GeneratorSpec& spec, double t, const ScalarField& mu) {
    const Grid1D& g = mu.grid;
    DiscreteOperator op{Mat::Zero(g.n, g.n), g};

    switch (spec.kind) {
        case GeneratorKind::Diffusion: {
            Mat D2 = d2_matrix(g);
            for (int i = 0; i < g.n; ++i) {
                double s2 = spec.sigma2(t, g.x(i));
                if (s2 < spec.sigma2_min)
                    throw std::invalid_argument("diffusion sigma^2 below sigma_min^2");
                op.matrix.row(i) = 0.5 * s2 * D2.row(i);
            }
            break;
        }
        case GeneratorKind::StableLike:
            op.matrix = fractional_matrix(g, spec.alpha_order, spec.amplitude, t);
            break;
        case GeneratorKind::DriftOnly:
            break;
    }

    Vec drift = kernel_convolution(spec, mu);
    if (spec.base_drift)
        for (int i = 0; i < g.n; ++i) drift[i] += spec.base_drift(t, g.x(i));
    Mat D1 = d1_matrix(g);
    for (int i = 0; i < g.n; ++i) op.matrix.row(i) += drift[i] * D1.row(i);

    enforce_row_sums(op);
    return op;
}

DiscreteOperator assemble_A(const GeneratorSpec& spec, double t, const ScalarField& mu,
                            const ScalarField& h_drift) {
    DiscreteOperator op = assemble_L(spec, t, mu);
    Mat D1 = d1_matrix(op.grid);
    for (int i = 0; i < op.grid.n; ++i) op.matrix.row(i) += h_drift.values[i] * D1.row(i);
    enforce_row_sums(op);
    return op;
}

DiscreteOperator gateaux_L(const GeneratorSpec& spec, double t, const ScalarField& mu,
                           const ScalarField& chi) {
    (void)t;
    (void)mu;  // the convolution-drift model is linear in mu
    if (std::abs(integrate(chi)) > 1e-8)
        throw std::invalid_argument("gateaux_L: direction chi must have zero mass");
    const Grid1D& g = chi.grid;
    DiscreteOperator op{Mat::Zero(g.n, g.n), g};
    if (!spec.has_kernel()) return op;
    Vec conv = kernel_convolution(spec, chi);
    Mat D1 = d1_matrix(g);
    for (int i = 0; i < g.n; ++i) op.matrix.row(i) = conv[i] * D1.row(i);
    return op;
}

double kernel_c2_bound(const GeneratorSpec& spec, double half_width) {
    if (!spec.has_kernel()) return 0.0;
    const int n = 4096;
    const double dr = 2.0 * half_width / n;
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = -half_width + i * dr;
        double km = spec.kernel(wrap_displacement(r - dr, half_width));
        double k0 = spec.kernel(r);
        double kp = spec.kernel(wrap_displacement(r + dr, half_width));
        m0 = std::max(m0, std::abs(k0));
        m1 = std::max(m1, std::abs((kp - km) / (2.0 * dr)));
        m2 = std::max(m2, std::abs((kp - 2.0 * k0 + km) / (dr * dr)));
    }
    return m0 + m1 + m2;
}

GeneratorSpec make_generator(const std::string& name, double leading_coef,
                             double kernel_amplitude, double base_drift) {
    GeneratorSpec spec;
    spec.name = name;
    if (base_drift != 0.0)
        spec.base_drift = [base_drift](double, double) { return base_drift; };
    if (kernel_amplitude != 0.0)
        spec.kernel = [kernel_amplitude](double r) { return kernel_amplitude * std::sin(r); };

    bool constant = (kernel_amplitude == 0.0);
    if (name == "heat") {
        spec.kind = GeneratorKind::Diffusion;
        spec.sigma2 = [leading_coef](double, double) { return leading_coef; };
        if (constant)
            spec.symbol = [leading_coef, base_drift](double k) {
                return Cplx(-0.5 * leading_coef * k * k, base_drift * k);
            };
    } else if (name == "var-diffusion") {
        spec.kind = GeneratorKind::Diffusion;
        spec.sigma2 = [leading_coef](double t, double x) {
            return leading_coef * (1.0 + 0.3 * std::sin(x)) * (1.0 + 0.2 * t);
        };
    } else if (name == "stable-1.5") {
        spec.kind = GeneratorKind::StableLike;
        spec.amplitude = [leading_coef](double, double) { return leading_coef; };
        spec.alpha_order = [](double) { return 1.5; };
        if (constant)
            spec.symbol = [leading_coef, base_drift](double k) {
                return Cplx(-leading_coef * std::pow(std::abs(k), 1.5), base_drift * k);
            };
    } else if (name == "stable-var") {
        spec.kind = GeneratorKind::StableLike;
        spec.amplitude = [leading_coef](double, double) { return leading_coef; };
        spec.alpha_order = [](double x) { return 1.5 + 0.3 * std::sin(x); };
    } else if (name == "drift-only") {
        spec.kind = GeneratorKind::DriftOnly;
        if (constant)
            spec.symbol = [base_drift](double k) { return Cplx(0.0, base_drift * k); };
    } else {
        throw std::invalid_argument("unknown generator name: " + name);
    }
    return spec;
}

}  // namespace hjbflow
