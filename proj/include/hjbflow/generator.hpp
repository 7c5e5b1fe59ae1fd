#ifndef HJBFLOW_GENERATOR_HPP
#define HJBFLOW_GENERATOR_HPP

#include <complex>
#include <functional>
#include <string>

#include "hjbflow/grid.hpp"

namespace hjbflow {

enum class GeneratorKind { Diffusion, StableLike, DriftOnly };

/**
 * Coefficient family for L[t,mu]. The measure enters only through the
 * convolution drift b(t,x,mu) = b0(t,x) + (K*mu)(x), which makes the
 * Gateaux derivative in mu exact and linear in the direction.
 */
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Diffusion;
    std::function<double(double t, double x)> sigma2;       // diffusion sigma^2
    std::function<double(double t, double x)> amplitude;    // stable-like a(t,x)
    std::function<double(double x)> alpha_order;            // alpha(x) in (1,2)
    std::function<double(double t, double x)> base_drift;   // b0(t,x)
    std::function<double(double r)> kernel;                 // K(r) or empty
    double sigma2_min = 1e-6;  // sigma_min = 1e-3

    // Set by the catalog for constant-coefficient families; enables the
    // SpectralExact propagation scheme.
    std::function<std::complex<double>(double k)> symbol;
    std::string name = "custom";

    bool has_kernel() const { return static_cast<bool>(kernel); }
};

/** Dense matrix form of a generator on the grid; rows sum to 0. */
struct DiscreteOperator {
    Mat matrix;
    Grid1D grid;
    double row_sum_correction = 0.0;  // max diagonal fixup, a discretization diagnostic

    ScalarField apply(const ScalarField& f) const;
};

/// Convolution (K*mu)(x_i) = sum_j K(wrap(x_i-x_j)) mu_j h with the
/// displacement wrapped to [-L, L).
Vec kernel_convolution(const GeneratorSpec& spec, const ScalarField& density);

DiscreteOperator assemble_L(const GeneratorSpec& spec, double t, const ScalarField& mu);

/// Full controlled generator A = h_drift * D + L.
DiscreteOperator assemble_A(const GeneratorSpec& spec, double t, const ScalarField& mu,
                            const ScalarField& h_drift);

/// Directional derivative of mu -> L[t,mu] along a zero-mass direction chi.
/// Exact for the convolution-drift model: D_chi L = (K*chi) * D.
DiscreteOperator gateaux_L(const GeneratorSpec& spec, double t, const ScalarField& mu,
                           const ScalarField& chi);

/// C2 bound max|K| + max|K'| + max|K''| of the interaction kernel, sampled
/// numerically; usable as the constant c7 in the Gateaux bound.
double kernel_c2_bound(const GeneratorSpec& spec, double half_width);

/// Named built-ins: "heat", "var-diffusion", "stable-1.5", "stable-var",
/// "drift-only". sigma2/amplitude scale the leading coefficient.
GeneratorSpec make_generator(const std::string& name, double leading_coef = 2.0,
                             double kernel_amplitude = 0.0, double base_drift = 0.0);

}  // namespace hjbflow

#endif
