#ifndef HJBFLOW_MFG_HPP
#define HJBFLOW_MFG_HPP

#include "hjbflow/hjb.hpp"

namespace hjbflow {

/**
 * Forward kinetic evolution d/dt mu = A^T mu, where A is the SAME
 * discrete controlled generator assembled for the backward equation, so
 * discrete duality (A f, mu) = (f, A^T mu) and mass conservation (column
 * sums of A^T vanish) hold exactly, not up to discretization.
 *
 * `drift` is the control-induced drift field h(t, x, u(t,x)) at the flow's
 * time nodes, interpolated linearly inside steps. Crank-Nicolson in time
 * with the mu-nonlinearity (K * mu in the drift) handled by one
 * predictor-corrector sweep per substep. Negative values are clipped and
 * the slice renormalized; the cumulative clipped mass is reported on the
 * returned flow and a defect above 0.01 is an error.
 */
MeasureFlow solve_forward(const GeneratorSpec& spec, const FieldPath& drift,
                          const ScalarField& mu0, const std::vector<double>& time_grid,
                          int substeps = 1);

/// |(A f, mu) - (f, A^T mu)| for given f, mu; zero up to roundoff since the
/// forward matrix is the literal transpose.
double duality_defect(const GeneratorSpec& spec, double t, const ScalarField& mu,
                      const ScalarField& drift, const ScalarField& f);

struct MfgSolution {
    MeasureFlow equilibrium_flow;
    FieldPath value;
    FieldPath control;
    int iterations = 0;
    std::vector<double> residual_history;  // one entry per backward+forward sweep
    double positivity_defect = 0.0;        // worst forward-solve defect seen
    bool converged = false;
};

/**
 * Damped fixed-point iteration for the coupled backward-forward system:
 * solve the HJB backward under the current flow, substitute the feedback
 * control into the kinetic equation, evolve forward, then mix
 * mu <- (1 - damping) mu + damping nu. The sweep residual is
 * sup_t surrogate(nu_t - mu_t), checked before mixing, so a flow that the
 * sweep maps to itself counts as converged without a further update;
 * `iterations` is the number of updates actually applied. mu0 frozen in
 * time seeds the loop. Hitting max_iters returns converged = false rather
 * than throwing; a Hamiltonian argmax tie is an error.
 */
MfgSolution solve_mfg(const HjbProblem& problem, const ScalarField& mu0, double damping,
                      double tol, int max_iters, double picard_tol = 1e-9,
                      int picard_iters = 50);

/// One full backward+forward pass from the solution's own flow: the sup_t
/// surrogate distance between input and output flows plus the Duhamel
/// residual of the value path. Defines "solved" for the coupled system.
double equilibrium_residual(const MfgSolution& solution, const HjbProblem& problem,
                            double picard_tol = 1e-9, int picard_iters = 50);

}  // namespace hjbflow

#endif
