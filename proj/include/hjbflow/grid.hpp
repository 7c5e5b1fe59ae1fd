#ifndef HJBFLOW_GRID_HPP
#define HJBFLOW_GRID_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hjbflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/** Uniform periodic grid on the torus [-L, L), x_i = -L + i*h. */
struct Grid1D {
    int n = 0;
    double half_width = 0.0;
    double h = 0.0;

    double x(int i) const { return -half_width + i * h; }
    Vec nodes() const;

    bool operator==(const Grid1D& other) const {
        return n == other.n && half_width == other.half_width;
    }
    bool operator!=(const Grid1D& other) const { return !(*this == other); }
};

/// n_points must be even and >= 8 (the spectral path needs an even size).
Grid1D make_grid(int n_points, double half_width);

/** A grid function; stands in for elements of C, C1, C2, C_Lip. */
struct ScalarField {
    Grid1D grid;
    Vec values;

    ScalarField() = default;
    ScalarField(const Grid1D& g, Vec v);

    static ScalarField zero(const Grid1D& g);
    static ScalarField constant(const Grid1D& g, double c);
    static ScalarField sample(const Grid1D& g, const std::function<double(double)>& f);

    int size() const { return grid.n; }
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

/** Time-indexed family of fields on a shared grid; t_M = T. */
struct FieldPath {
    std::vector<double> times;
    std::vector<ScalarField> fields;

    FieldPath() = default;
    FieldPath(std::vector<double> t, std::vector<ScalarField> f);

    int num_nodes() const { return static_cast<int>(times.size()); }
    double horizon() const { return times.back(); }
    const Grid1D& grid() const { return fields.front().grid; }
};

/** Time-indexed probability densities {mu_t}; each slice integrates to 1. */
struct MeasureFlow {
    std::vector<double> times;
    std::vector<ScalarField> densities;
    double negativity_defect = 0.0;  // total clipped mass, reported not hidden

    MeasureFlow() = default;
    MeasureFlow(std::vector<double> t, std::vector<ScalarField> d);

    int num_nodes() const { return static_cast<int>(times.size()); }
    const Grid1D& grid() const { return densities.front().grid; }

    /// Density at arbitrary t by linear interpolation between nodes.
    ScalarField at(double t) const;
};

/// Uniform time grid 0 = t_0 < ... < t_M = T.
std::vector<double> make_time_grid(double T, int steps);

double integrate(const ScalarField& f);

}  // namespace hjbflow

#endif
