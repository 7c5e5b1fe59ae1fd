#ifndef HJBFLOW_SENSITIVITY_HPP
#define HJBFLOW_SENSITIVITY_HPP

#include "hjbflow/hjb.hpp"

namespace hjbflow {

/** Two measure flows plus the alpha interpolation grid between them. */
struct FlowPair {
    MeasureFlow mu1;
    MeasureFlow mu2;
    std::vector<double> alpha_grid{0.0, 0.25, 0.5, 0.75, 1.0};
};

/// mu1 + alpha (mu2 - mu1) per time node; exact at the endpoints.
MeasureFlow interpolate_flow(const FlowPair& pair, double alpha);

/**
 * sup_t of the (C2)* distance between two flows. The spectral surrogate
 * is evaluated at every node; the LP norm is then taken over a bounded,
 * deterministic subsample of nodes (all nodes when the grid is small)
 * because the LP is too slow for dense sweeps.
 */
double flow_distance(const MeasureFlow& a, const MeasureFlow& b, bool use_lp = true);

/// W_alpha(t) = U^{t,T}_alpha V^T_alpha: the alpha-interpolated propagation
/// of the alpha-interpolated terminal data, no Hamiltonian term.
FieldPath w_alpha(const HjbProblem& problem, const FlowPair& pair, double alpha);

struct WAlphaDerivative {
    FieldPath representation;  // U^{t,T} dV^T/dalpha + (dU^{t,T}/dalpha) V^T
    FieldPath fd_check;        // central alpha-difference, the independent check
};

WAlphaDerivative w_alpha_derivative(const HjbProblem& problem, const FlowPair& pair,
                                    double alpha, double fd_step = 1e-3);

struct SensitivityReport {
    std::vector<double> alpha_grid;
    Mat diff_table;           // ||V_ai - V_aj||_{C1} / |ai - aj|, path sup
    double flow_dist = 0.0;   // sup_t dual norm of mu1_t - mu2_t
    double lipschitz_V = 0.0;
    double lipschitz_gradV = 0.0;
    bool ratios_defined = true;  // false when the flows coincide
};

SensitivityReport lipschitz_report(const HjbProblem& problem, const FlowPair& pair,
                                   double tol = 1e-8, int max_iters = 50,
                                   bool use_lp = true);

struct FeedbackRegularityRow {
    double control_diff = 0.0;
    double flow_dist = 0.0;
    double ratio = 0.0;
    bool skipped = false;  // identical flows contribute nothing
};

struct FeedbackRegularityResult {
    double k1 = 0.0;
    std::vector<FeedbackRegularityRow> table;
};

/// k1 = max over pairs of sup_{t,x}|u1 - u2| / sup_t ||mu1_t - mu2_t||_{(C2)*}.
FeedbackRegularityResult feedback_regularity(const HjbProblem& problem,
                                             const std::vector<FlowPair>& pairs,
                                             double tol = 1e-8, int max_iters = 50,
                                             bool use_lp = true);

}  // namespace hjbflow

#endif
