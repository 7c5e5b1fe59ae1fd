#ifndef HJBFLOW_SIMPLEX_HPP
#define HJBFLOW_SIMPLEX_HPP

#include <Eigen/Dense>

namespace hjbflow {

struct LpSolution {
    Eigen::VectorXd x;     // primal solution
    Eigen::VectorXd dual;  // dual multipliers of the row constraints
    double value = 0.0;
    int iterations = 0;
    bool optimal = false;
};

/**
 * Solves  max c'x  s.t.  A x <= b, x >= 0  with b >= 0 by the primal
 * simplex method (full tableau, Dantzig rule with a Bland fallback for
 * anti-cycling). The slack basis is feasible since b >= 0, so no phase 1
 * is needed. Sized for dense desk-scale problems (a few thousand rows).
 */
LpSolution simplex_max(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                       const Eigen::VectorXd& b);

}  // namespace hjbflow

#endif
