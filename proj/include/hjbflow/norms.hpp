#ifndef HJBFLOW_NORMS_HPP
#define HJBFLOW_NORMS_HPP

#include "hjbflow/grid.hpp"

namespace hjbflow {

enum class Space { C, C1, C2, Lip };
enum class DerivMethod { Central, Spectral };

/// Periodic second-order central difference matrices; these stencils are
/// the norm-defining derivative operators throughout the library.
Mat d1_matrix(const Grid1D& g);
Mat d2_matrix(const Grid1D& g);

ScalarField derivative(const ScalarField& f, int order,
                       DerivMethod method = DerivMethod::Central);

/// C: max|f|; C1: max|f| + max|Df|; C2: C1 + max|D2 f|;
/// Lip: max|f| + max over adjacent pairs of |f_{i+1}-f_i|/h.
double norm(const ScalarField& f, Space space);

struct DualNormResult {
    double value = 0.0;
    ScalarField maximizer;  // optimal test function g
    int lp_iterations = 0;
};

/**
 * (C2)* norm of a signed density delta (must integrate to ~0):
 * max of sum_i g_i * delta_i * h over test functions with max|g| <= 1,
 * max|D g| <= 1, max|D2 g| <= 1, solved as a linear program.
 */
DualNormResult dual_norm_c2_full(const ScalarField& delta);
double dual_norm_c2(const ScalarField& delta);

/// Cheap screen sup_k |F[delta](k)| / (1 + |k|^2), equivalent to the LP
/// norm up to grid-level constants; used in solver inner loops.
double dual_norm_surrogate(const ScalarField& delta);

}  // namespace hjbflow

#endif
