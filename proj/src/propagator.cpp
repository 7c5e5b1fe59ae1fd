#include "hjbflow/propagator.hpp"

#include <cmath>
#include <random>

namespace hjbflow {

PropagatorEngine::PropagatorEngine(Grid1D grid, std::vector<double> time_grid,
                                   int substeps_per_interval, Scheme scheme, Family family,
                                   std::function<Cplx(double)> symbol)
    : grid_(grid), scheme_(scheme), family_(std::move(family)), symbol_(std::move(symbol)) {
    if (time_grid.size() < 2) throw std::invalid_argument("engine needs a time interval");
    if (substeps_per_interval < 1) throw std::invalid_argument("substeps must be >= 1");
    if (scheme_ == Scheme::SpectralExact && !symbol_)
        throw std::invalid_argument(
            "SpectralExact requires a constant-coefficient symbol");
    if (scheme_ == Scheme::CrankNicolson && !family_)
        throw std::invalid_argument("CrankNicolson requires a generator family");

    lattice_.push_back(time_grid.front());
    for (std::size_t i = 1; i < time_grid.size(); ++i) {
        double a = time_grid[i - 1], b = time_grid[i];
        if (!(b > a)) throw std::invalid_argument("time grid must increase");
        for (int k = 1; k <= substeps_per_interval; ++k)
            lattice_.push_back(a + (b - a) * k / substeps_per_interval);
    }
    nominal_dt_ = (lattice_.back() - lattice_.front()) /
                  static_cast<double>(lattice_.size() - 1);
    cache_.resize(lattice_.size() - 1);
}

PropagatorEngine::Step PropagatorEngine::build_step(const DiscreteOperator& L, double dt) {
    int n = L.grid.n;
    Mat lhs = Mat::Identity(n, n) - 0.5 * dt * L.matrix;
    Step step;
    step.rhs = Mat::Identity(n, n) + 0.5 * dt * L.matrix;
    step.lu = Eigen::PartialPivLU<Mat>(lhs);
    // a singular substep solve surfaces as a wildly conditioned factor
    double rc = step.lu.rcond();
    if (!(rc > 1e-14))
        throw std::runtime_error("singular substep solve, rcond=" + std::to_string(rc));
    return step;
}

const PropagatorEngine::Step& PropagatorEngine::cached_step(int k) const {
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        if (cache_[k]) return *cache_[k];
    }
    double dt = lattice_[k + 1] - lattice_[k];
    double mid = 0.5 * (lattice_[k] + lattice_[k + 1]);
    auto step = std::make_unique<Step>(build_step(family_(mid), dt));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (!cache_[k]) cache_[k] = std::move(step);
    return *cache_[k];
}

int PropagatorEngine::locate(double t) const {
    double tol = 1e-9 * std::max(1.0, std::abs(lattice_.back()));
    auto it = std::lower_bound(lattice_.begin(), lattice_.end(), t - tol);
    if (it != lattice_.end() && std::abs(*it - t) <= tol)
        return static_cast<int>(it - lattice_.begin());
    return -1;
}

Mat PropagatorEngine::run_steps(double t, double s, Mat g) const {
    if (scheme_ == Scheme::SpectralExact) {
        double gap = s - t;
        Vec k = wavenumbers(grid_);
        for (int c = 0; c < g.cols(); ++c) {
            CVec coeffs = fft(Vec(g.col(c)));
            for (int m = 0; m < coeffs.size(); ++m)
                coeffs[m] *= std::exp(gap * symbol_(k[m]));
            g.col(c) = ifft_real(coeffs);
        }
        return g;
    }
    int it = locate(t), is = locate(s);
    if (it >= 0 && is >= 0) {
        for (int k = is - 1; k >= it; --k) {
            const Step& step = cached_step(k);
            g = step.lu.solve(step.rhs * g);
        }
        return g;
    }
    // off-lattice interval: ad-hoc uniform partition of comparable step size
    int nsteps = std::max(1, static_cast<int>(std::lround((s - t) / nominal_dt_)));
    double dt = (s - t) / nsteps;
    for (int k = nsteps - 1; k >= 0; --k) {
        double mid = t + (k + 0.5) * dt;
        Step step = build_step(family_(mid), dt);
        g = step.lu.solve(step.rhs * g);
    }
    return g;
}

ScalarField PropagatorEngine::apply(double t, double s, const ScalarField& f) const {
    if (t > s) throw std::invalid_argument("propagate: requires t <= s");
    if (f.grid != grid_) throw std::invalid_argument("propagate: grid mismatch");
    if (t == s) return f;
    return {grid_, run_steps(t, s, f.values)};
}

Mat PropagatorEngine::apply_columns(double t, double s, const Mat& cols) const {
    if (t > s) throw std::invalid_argument("propagate: requires t <= s");
    if (t == s) return cols;
    return run_steps(t, s, cols);
}

DiscreteOperator PropagatorEngine::generator_at(double t) const {
    if (family_) return family_(t);
    // constant-coefficient spectral engine: densify the symbol
    Vec k = wavenumbers(grid_);
    Mat M(grid_.n, grid_.n);
    CVec mult(grid_.n);
    for (int m = 0; m < grid_.n; ++m) mult[m] = symbol_(k[m]);
    Vec v = ifft_real(mult);
    for (int i = 0; i < grid_.n; ++i)
        for (int j = 0; j < grid_.n; ++j) M(i, j) = v[(i - j + grid_.n) % grid_.n];
    return {M, grid_};
}

ScalarField propagate(const PropagatorEngine& engine, double t, double s,
                      const ScalarField& f) {
    return engine.apply(t, s, f);
}

double chain_rule_residual(const PropagatorEngine& engine, double t, double s, double r,
                           const ScalarField& f) {
    if (!(t <= s && s <= r)) throw std::invalid_argument("need t <= s <= r");
    ScalarField two_hop = engine.apply(t, s, engine.apply(s, r, f));
    ScalarField direct = engine.apply(t, r, f);
    return norm(two_hop - direct, Space::C);
}

PropagatorDifference propagator_difference(const PropagatorEngine& engine1,
                                           const PropagatorEngine& engine2, double t,
                                           double r, const ScalarField& f) {
    const auto& lat = engine1.lattice();
    std::vector<double> nodes;
    double tol = 1e-9 * std::max(1.0, std::abs(lat.back()));
    for (double s : lat)
        if (s >= t - tol && s <= r + tol) nodes.push_back(s);
    if (nodes.size() < 2) throw std::invalid_argument("interval holds no substep nodes");

    // J_k = sum_{j>=k} w_j U2^{s_k,s_j} (L2-L1)(s_j) U1^{s_j,r} f accumulated
    // backward so every propagator application is a single substep.
    int K = static_cast<int>(nodes.size()) - 1;
    std::vector<ScalarField> w(K + 1);
    w[K] = f;
    for (int k = K - 1; k >= 0; --k) w[k] = engine1.apply(nodes[k], nodes[k + 1], w[k + 1]);

    ScalarField J = ScalarField::zero(f.grid);
    for (int k = K; k >= 0; --k) {
        if (k < K) J = engine2.apply(nodes[k], nodes[k + 1], J);
        double weight;
        if (k == 0)
            weight = 0.5 * (nodes[1] - nodes[0]);
        else if (k == K)
            weight = 0.5 * (nodes[K] - nodes[K - 1]);
        else
            weight = 0.5 * (nodes[k + 1] - nodes[k - 1]);
        DiscreteOperator dL{engine2.generator_at(nodes[k]).matrix -
                                engine1.generator_at(nodes[k]).matrix,
                            f.grid};
        J = J + weight * dL.apply(w[k]);
    }

    ScalarField direct = engine2.apply(t, r, f) - engine1.apply(t, r, f);
    PropagatorDifference out;
    out.integral = J;
    out.residual = norm(J - direct, Space::C);
    return out;
}

SmoothingFit estimate_smoothing_exponent(const PropagatorEngine& engine,
                                         const std::vector<double>& gap_samples,
                                         const Mat& probes, Space probe_norm,
                                         Space image_norm) {
    if (gap_samples.size() < 4)
        throw std::invalid_argument("smoothing fit needs at least 4 gap samples");

    SmoothingFit fit;
    const Grid1D& g = engine.grid();
    for (double gap : gap_samples) {
        Mat images = engine.apply_columns(0.0, gap, probes);
        double best = 0.0;
        for (int c = 0; c < probes.cols(); ++c) {
            ScalarField phi{g, probes.col(c)};
            ScalarField img{g, images.col(c)};
            best = std::max(best, norm(img, image_norm) / norm(phi, probe_norm));
        }
        fit.gaps.push_back(gap);
        fit.ratios.push_back(best);
    }

    // least-squares fit of log R against log gap
    int n = static_cast<int>(fit.gaps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        double x = std::log(fit.gaps[i]), y = std::log(fit.ratios[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        double e = std::log(fit.ratios[i]) - (intercept + slope * std::log(fit.gaps[i]));
        ss_res += e * e;
    }
    fit.beta_hat = -slope;
    fit.c5_hat = std::exp(intercept);
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (fit.beta_hat < 0.05)
        throw std::runtime_error("no smoothing detected (flat gap response)");
    return fit;
}

Mat make_smoothing_probes(const Grid1D& g, int num_random, unsigned long long seed) {
    int num_hats = std::min(8, g.n);
    int num_steps = 8;
    Mat probes(g.n, num_hats + num_steps + num_random);
    probes.setZero();
    int col = 0;
    for (int k = 0; k < num_hats; ++k, ++col)
        probes(k * (g.n / num_hats), col) = 1.0;
    // periodic square waves: sign extremizers of the smoothed-gradient rows
    for (int k = 0; k < num_steps; ++k, ++col) {
        int shift = k * (g.n / num_steps) / 2;
        for (int i = 0; i < g.n; ++i)
            probes((i + shift) % g.n, col) = (i < g.n / 2) ? 1.0 : -1.0;
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    for (int k = 0; k < num_random; ++k, ++col)
        for (int i = 0; i < g.n; ++i) probes(i, col) = coin(rng) ? 1.0 : -1.0;
    return probes;
}

}  // namespace hjbflow
