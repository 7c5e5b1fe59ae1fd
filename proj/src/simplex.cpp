#include "hjbflow/simplex.hpp"

#include <stdexcept>
#include <vector>

namespace hjbflow {

LpSolution simplex_max(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                       const Eigen::VectorXd& b) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (b.size() != m || c.size() != n) throw std::invalid_argument("simplex: size mismatch");
    if (b.minCoeff() < 0.0) throw std::invalid_argument("simplex: requires b >= 0");

    // Tableau columns: n structural, m slack, 1 rhs. Bottom row holds the
    // reduced costs z_j - c_j; optimality when all entries are >= -tol.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
    T.block(0, 0, m, n) = A;
    T.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
    T.block(0, n + m, m, 1) = b;
    T.block(m, 0, 1, n) = -c.transpose();

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    const double tol = 1e-11;
    const int max_iters = 50 * (n + m);
    const int bland_after = 10 * (n + m);

    LpSolution sol;
    for (int iter = 0; iter < max_iters; ++iter) {
        // entering column
        int enter = -1;
        if (iter < bland_after) {
            double best = -tol;
            for (int j = 0; j < n + m; ++j)
                if (T(m, j) < best) { best = T(m, j); enter = j; }
        } else {
            for (int j = 0; j < n + m; ++j)
                if (T(m, j) < -tol) { enter = j; break; }
        }
        if (enter < 0) {
            sol.optimal = true;
            sol.iterations = iter;
            break;
        }
        // ratio test (Bland ties on smallest basis index)
        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            double a = T(i, enter);
            if (a > tol) {
                double ratio = T(i, n + m) / a;
                if (leave < 0 || ratio < best_ratio - tol ||
                    (ratio < best_ratio + tol && basis[i] < basis[leave]))
                    { leave = i; best_ratio = ratio; }
            }
        }
        if (leave < 0) throw std::runtime_error("simplex: unbounded LP");

        double piv = T(leave, enter);
        T.row(leave) /= piv;
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double f = T(i, enter);
            if (f != 0.0) T.row(i) -= f * T.row(leave);
        }
        basis[leave] = enter;
    }
    if (!sol.optimal) throw std::runtime_error("simplex: iteration limit reached");

    sol.x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) sol.x[basis[i]] = T(i, n + m);
    sol.dual = T.block(m, n, 1, m).transpose();
    sol.value = T(m, n + m);
    return sol;
}

}  // namespace hjbflow
