#ifndef HJBFLOW_HJB_HPP
#define HJBFLOW_HJB_HPP

#include "hjbflow/hamiltonian.hpp"
#include "hjbflow/propagator.hpp"

namespace hjbflow {

/** Terminal cost V^T(x; mu_T) as a function of the terminal measure. */
struct TerminalSpec {
    std::function<ScalarField(const ScalarField& mu_T)> eval;
    // Optional closed-form Gateaux derivative along a terminal direction;
    // callers fall back to finite differences in alpha when absent.
    std::function<ScalarField(const ScalarField& mu_T, const ScalarField& chi_T)> gateaux;
};

struct HjbProblem {
    Grid1D grid;
    std::vector<double> time_grid;
    GeneratorSpec generator;
    HamiltonianSpec hamiltonian;
    TerminalSpec terminal;
    MeasureFlow flow;
    int substeps = 1;
    Scheme scheme = Scheme::CrankNicolson;

    double horizon() const { return time_grid.back(); }
};

/// Backward propagator for L[t, mu_t] along the problem's measure flow.
PropagatorEngine make_engine(const HjbProblem& problem);

/// Generator family with the measure flow bound in (for external reuse).
PropagatorEngine::Family generator_family(const GeneratorSpec& spec, const MeasureFlow& flow);

/**
 * Picard map: Psi(phi)(t) = U^{t,T} V^T + int_t^T U^{t,s} H_s(., grad phi(s)) ds,
 * evaluated by backward recursion over the time nodes with trapezoid
 * weights (equals the direct double-loop quadrature; the recursion just
 * reuses each one-node propagation).
 */
FieldPath apply_psi(const HjbProblem& problem, const FieldPath& phi,
                    const PropagatorEngine& engine);

/// Direct double-loop evaluation of the same quadrature; cross-check only.
FieldPath apply_psi_direct(const HjbProblem& problem, const FieldPath& phi,
                           const PropagatorEngine& engine);

struct MildDiagnostics {
    int iterations = 0;
    std::vector<double> diffs;       // sup_t C1 distance per Picard sweep
    double contraction_factor = 0.0; // max successive-diff ratio after sweep 1
    int split_depth = 0;             // horizon bisections used
    bool converged = false;
};

struct MildSolution {
    FieldPath value;
    MildDiagnostics diagnostics;
};

/**
 * Mild solution by Picard iteration V <- Psi(V), started from the
 * propagated terminal data. If the iteration fails to contract within
 * max_iters the horizon is bisected and the halves chained backward
 * (up to depth 6).
 */
MildSolution solve_mild(const HjbProblem& problem, double tol, int max_iters);

/// sup_t || V(t) - Psi(V)(t) ||_{C1}; <= 10 tol for a converged solve.
double duhamel_residual(const HjbProblem& problem, const FieldPath& V);

/// Feedback control along the solution gradient, one field per time node.
FieldPath extract_control(const HjbProblem& problem, const FieldPath& V, bool* tie_flag);

}  // namespace hjbflow

#endif
