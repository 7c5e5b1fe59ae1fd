#ifndef HJBFLOW_CATALOG_HPP
#define HJBFLOW_CATALOG_HPP

#include <string>

#include "hjbflow/hjb.hpp"

namespace hjbflow {

/// Normalizes a positive sample to an exact-mass-1 density on the grid.
ScalarField normalize_density(const Grid1D& g, const std::function<double(double)>& f);

/**
 * Named measure-flow catalog (fixed parameters, reproducible):
 *   "uniform"      flat density for all t
 *   "bump"         von-Mises-style bump exp(kappa cos(x - center))
 *   "two-bump"     mixture of two bumps half a period apart
 *   "moving-bump"  bump whose center translates at unit speed
 */
MeasureFlow make_flow(const std::string& name, const Grid1D& g,
                      const std::vector<double>& time_grid, double kappa = 2.0,
                      double center = 0.0);

/// Seeded random bump flow (for sensitivity pair sampling).
MeasureFlow make_random_bump_flow(const Grid1D& g, const std::vector<double>& time_grid,
                                  unsigned long long seed);

/// Named terminal data: "cos", "gaussian-bump", "zero". With
/// mu_coupling = "mean-shift" the profile is translated by the measure's
/// sine moment, giving a smooth mu-dependence with a closed-form
/// Gateaux derivative.
TerminalSpec make_terminal(const std::string& name, const Grid1D& g,
                           const std::string& mu_coupling = "none",
                           double coupling_strength = 0.5);

/// Named Hamiltonians: "quadratic" (alpha/beta/theta constants),
/// "legendre" (J = -u^2/2, h = u), "finite" (u in {-1,0,1}, h = u,
/// J = -u^2/2), "none" (H == 0 via a degenerate quadratic).
HamiltonianSpec make_hamiltonian(const std::string& kind, double alpha = 0.0,
                                 double beta = 1.0, double theta = 1.0);

}  // namespace hjbflow

#endif
