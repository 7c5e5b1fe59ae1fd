#include "hjbflow/catalog.hpp"

#include <cmath>
#include <random>

namespace hjbflow {

ScalarField normalize_density(const Grid1D& g, const std::function<double(double)>& f) {
    Vec v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = f(g.x(i));
    if (v.minCoeff() < 0.0) throw std::invalid_argument("density sample must be nonnegative");
    double mass = v.sum() * g.h;
    if (!(mass > 0.0)) throw std::invalid_argument("density sample must have positive mass");
    return {g, v / mass};
}

namespace {

double torus_cos(double x, double center, double L) {
    return std::cos(M_PI * (x - center) / L);
}

ScalarField bump_density(const Grid1D& g, double kappa, double center) {
    double L = g.half_width;
    return normalize_density(
        g, [&](double x) { return std::exp(kappa * torus_cos(x, center, L)); });
}

}  // namespace

MeasureFlow make_flow(const std::string& name, const Grid1D& g,
                      const std::vector<double>& time_grid, double kappa, double center) {
    std::vector<ScalarField> dens;
    dens.reserve(time_grid.size());
    for (double t : time_grid) {
        if (name == "uniform") {
            dens.push_back(ScalarField::constant(g, 1.0 / (2.0 * g.half_width)));
        } else if (name == "bump") {
            dens.push_back(bump_density(g, kappa, center));
        } else if (name == "two-bump") {
            double L = g.half_width;
            dens.push_back(normalize_density(g, [&](double x) {
                return std::exp(kappa * torus_cos(x, center, L)) +
                       std::exp(kappa * torus_cos(x, center + L, L));
            }));
        } else if (name == "moving-bump") {
            dens.push_back(bump_density(g, kappa, center + t));
        } else {
            throw std::invalid_argument("unknown flow name: " + name);
        }
    }
    return {time_grid, std::move(dens)};
}

MeasureFlow make_random_bump_flow(const Grid1D& g, const std::vector<double>& time_grid,
                                  unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> kappa_dist(0.5, 3.0);
    std::uniform_real_distribution<double> center_dist(-g.half_width, g.half_width);
    std::uniform_real_distribution<double> speed_dist(-1.0, 1.0);
    double kappa = kappa_dist(rng), center = center_dist(rng), speed = speed_dist(rng);
    std::vector<ScalarField> dens;
    dens.reserve(time_grid.size());
    for (double t : time_grid) dens.push_back(bump_density(g, kappa, center + speed * t));
    return {time_grid, std::move(dens)};
}

TerminalSpec make_terminal(const std::string& name, const Grid1D& g,
                           const std::string& mu_coupling, double coupling_strength) {
    double L = g.half_width;
    std::function<double(double)> profile;
    std::function<double(double)> profile_deriv;
    if (name == "cos") {
        profile = [L](double x) { return std::cos(M_PI * x / L); };
        profile_deriv = [L](double x) { return -(M_PI / L) * std::sin(M_PI * x / L); };
    } else if (name == "gaussian-bump") {
        // periodized smooth bump, C2 on the torus
        profile = [L](double x) { return std::exp(2.0 * (std::cos(M_PI * x / L) - 1.0)); };
        profile_deriv = [L](double x) {
            return -2.0 * (M_PI / L) * std::sin(M_PI * x / L) *
                   std::exp(2.0 * (std::cos(M_PI * x / L) - 1.0));
        };
    } else if (name == "zero") {
        profile = [](double) { return 0.0; };
        profile_deriv = [](double) { return 0.0; };
    } else {
        throw std::invalid_argument("unknown terminal name: " + name);
    }

    TerminalSpec spec;
    if (mu_coupling == "none") {
        spec.eval = [g, profile](const ScalarField&) {
            return ScalarField::sample(g, profile);
        };
        spec.gateaux = [g](const ScalarField&, const ScalarField&) {
            return ScalarField::zero(g);
        };
    } else if (mu_coupling == "mean-shift") {
        // V^T(x; mu) = profile(x - c * int sin(pi y / L) mu(dy))
        double c = coupling_strength;
        auto sine_moment = [L](const ScalarField& mu) {
            double s = 0.0;
            for (int i = 0; i < mu.grid.n; ++i)
                s += std::sin(M_PI * mu.grid.x(i) / L) * mu.values[i];
            return s * mu.grid.h;
        };
        spec.eval = [g, profile, sine_moment, c](const ScalarField& mu) {
            double shift = c * sine_moment(mu);
            return ScalarField::sample(g, [&](double x) { return profile(x - shift); });
        };
        spec.gateaux = [g, profile_deriv, sine_moment, c](const ScalarField& mu,
                                                          const ScalarField& chi) {
            double shift = c * sine_moment(mu);
            double dshift = c * sine_moment({chi.grid, chi.values});  // linear functional
            return ScalarField::sample(
                g, [&](double x) { return -profile_deriv(x - shift) * dshift; });
        };
    } else {
        throw std::invalid_argument("unknown mu_coupling: " + mu_coupling);
    }
    return spec;
}

HamiltonianSpec make_hamiltonian(const std::string& kind, double alpha, double beta,
                                 double theta) {
    HamiltonianSpec spec;
    if (kind == "quadratic" || kind == "none") {
        spec.kind = HamiltonianKind::QuadraticHinf;
        double a = (kind == "none") ? 0.0 : alpha;
        double b = (kind == "none") ? 0.0 : beta;
        spec.alpha = [a](double, double, const ScalarField&) { return a; };
        spec.beta = [b](double, double, const ScalarField&) { return b; };
        spec.theta = [theta](double, double, const ScalarField&) { return theta; };
    } else if (kind == "legendre") {
        spec.kind = HamiltonianKind::LegendreConcave;
        spec.running_cost = [](double, double, double u, const ScalarField&) {
            return -0.5 * u * u;
        };
        spec.control_lo = -10.0;
        spec.control_hi = 10.0;
    } else if (kind == "finite") {
        spec.kind = HamiltonianKind::FiniteControls;
        spec.controls = {-1.0, 0.0, 1.0};
        spec.drift = [](double, double, double u, const ScalarField&) { return u; };
        spec.running_cost = [](double, double, double u, const ScalarField&) {
            return -0.5 * u * u;
        };
    } else {
        throw std::invalid_argument("unknown hamiltonian kind: " + kind);
    }
    spec.validate();
    return spec;
}

}  // namespace hjbflow
