#ifndef HJBFLOW_PROPAGATOR_HPP
#define HJBFLOW_PROPAGATOR_HPP

#include <memory>
#include <mutex>

#include "hjbflow/generator.hpp"
#include "hjbflow/norms.hpp"
#include "hjbflow/spectral.hpp"

namespace hjbflow {

enum class Scheme { CrankNicolson, SpectralExact };

/**
 * Backward propagator U^{t,s} generated by a time-dependent family {L_t}.
 *
 * CrankNicolson: per substep of size dt, solve
 *   (I - dt/2 L_mid) g_new = (I + dt/2 L_mid) g_old
 * with L frozen at the substep midpoint. Substep operators and their LU
 * factorizations are cached lazily; population is idempotent and guarded,
 * so concurrent apply() calls are safe.
 *
 * SpectralExact: multiplies Fourier coefficients by exp((s-t) symbol(k));
 * only valid for constant-coefficient families and rejected otherwise.
 */
class PropagatorEngine {
public:
    using Family = std::function<DiscreteOperator(double t)>;

    PropagatorEngine(Grid1D grid, std::vector<double> time_grid, int substeps_per_interval,
                     Scheme scheme, Family family,
                     std::function<Cplx(double)> symbol = {});

    /// U^{t,s} f for t <= s. t and s snap to substep lattice nodes when
    /// within 1e-9; off-lattice times get an ad-hoc uniform partition of
    /// comparable step size.
    ScalarField apply(double t, double s, const ScalarField& f) const;

    /// Same propagation applied to each column (batched probes).
    Mat apply_columns(double t, double s, const Mat& cols) const;

    DiscreteOperator generator_at(double t) const;

    const std::vector<double>& lattice() const { return lattice_; }
    double nominal_dt() const { return nominal_dt_; }
    const Grid1D& grid() const { return grid_; }
    Scheme scheme() const { return scheme_; }

private:
    struct Step {
        Mat rhs;  // I + dt/2 L
        Eigen::PartialPivLU<Mat> lu;  // factors I - dt/2 L
    };

    const Step& cached_step(int k) const;
    static Step build_step(const DiscreteOperator& L, double dt);
    Mat run_steps(double t, double s, Mat g) const;
    int locate(double t) const;  // lattice index or -1

    Grid1D grid_;
    std::vector<double> lattice_;
    double nominal_dt_ = 0.0;
    Scheme scheme_;
    Family family_;
    std::function<Cplx(double)> symbol_;
    mutable std::vector<std::unique_ptr<Step>> cache_;
    mutable std::mutex cache_mutex_;
};

ScalarField propagate(const PropagatorEngine& engine, double t, double s,
                      const ScalarField& f);

/// || U^{t,s}(U^{s,r} f) - U^{t,r} f ||_C ; zero on aligned partitions.
double chain_rule_residual(const PropagatorEngine& engine, double t, double s, double r,
                           const ScalarField& f);

struct PropagatorDifference {
    ScalarField integral;  // trapezoid evaluation of int_t^r U2^{t,s}(L2-L1)U1^{s,r} f ds
    double residual = 0.0; // sup-norm gap to the direct difference (U2-U1)f
};

PropagatorDifference propagator_difference(const PropagatorEngine& engine1,
                                           const PropagatorEngine& engine2, double t,
                                           double r, const ScalarField& f);

struct SmoothingFit {
    double beta_hat = 0.0;
    double c5_hat = 0.0;
    double r_squared = 0.0;
    std::vector<double> gaps;
    std::vector<double> ratios;  // max_probe ||U phi||_{C1} / ||phi||_C per gap
};

/// Fits log R(gap) = log c5 - beta log(gap) over the probe set.
SmoothingFit estimate_smoothing_exponent(const PropagatorEngine& engine,
                                         const std::vector<double>& gap_samples,
                                         const Mat& probes, Space probe_norm = Space::C,
                                         Space image_norm = Space::C1);

/// Probe columns: single-node hats, periodic two-sided step functions
/// (the extremizers of the gradient row sums), and seeded random +-1 fields.
Mat make_smoothing_probes(const Grid1D& g, int num_random = 16,
                          unsigned long long seed = 0x5eed5eedULL);

}  // namespace hjbflow

#endif
