#ifndef HJBFLOW_HAMILTONIAN_HPP
#define HJBFLOW_HAMILTONIAN_HPP

#include <vector>

#include "hjbflow/grid.hpp"

namespace hjbflow {

enum class HamiltonianKind { QuadraticHinf, LegendreConcave, FiniteControls };

/// Pointwise coefficient, possibly coupled to the current measure slice.
using CoefFn = std::function<double(double t, double x, const ScalarField& mu)>;
/// Control-dependent term (drift h or running cost J).
using ControlFn = std::function<double(double t, double x, double u, const ScalarField& mu)>;

/**
 * H_t(x,p,mu) = max_u ( h(t,x,mu,u) p + J(t,x,mu,u) ).
 *
 * QuadraticHinf: J = alpha - theta u^2, h = beta u, so the max is closed
 * form: H = alpha + beta^2 p^2 / (4 theta) and u* = beta p / (2 theta).
 * LegendreConcave: h = u and J strictly concave in u; numeric max with a
 * golden-section polish (concavity makes the scan unimodal).
 * FiniteControls: plain enumeration over the control set.
 */
struct HamiltonianSpec {
    HamiltonianKind kind = HamiltonianKind::QuadraticHinf;

    CoefFn alpha, beta, theta;  // QuadraticHinf
    ControlFn running_cost;     // J for LegendreConcave / FiniteControls
    ControlFn drift;            // h for FiniteControls (LegendreConcave uses h = u)
    std::vector<double> controls;
    double control_lo = -10.0, control_hi = 10.0;  // Legendre search bracket
    double theta_min = 1e-10;

    void validate() const;
};

ScalarField eval_H(const HamiltonianSpec& spec, double t, const ScalarField& p,
                   const ScalarField& mu);

struct ControlField {
    ScalarField u;
    bool tie = false;  // FiniteControls argmax tie encountered (warning surface)
};

ControlField optimal_control(const HamiltonianSpec& spec, double t, const ScalarField& p,
                             const ScalarField& mu);

/// Controlled drift h(t,x,mu,u(x)) evaluated along a control field.
ScalarField controlled_drift(const HamiltonianSpec& spec, double t, const ScalarField& u,
                             const ScalarField& mu);

}  // namespace hjbflow

#endif
