#include "hjbflow/grid.hpp"

#include <cmath>

namespace hjbflow {

Grid1D make_grid(int n_points, double half_width) {
    if (n_points < 8 || n_points % 2 != 0)
        throw std::invalid_argument("n_points must be even >= 8");
    if (!(half_width > 0.0))
        throw std::invalid_argument("half_width must be positive");
    Grid1D g;
    g.n = n_points;
    g.half_width = half_width;
    g.h = 2.0 * half_width / n_points;
    return g;
}

Vec Grid1D::nodes() const {
    Vec xs(n);
    for (int i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

ScalarField::ScalarField(const Grid1D& g, Vec v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n)
        throw std::invalid_argument("ScalarField: values length must equal n_points");
    if (!values.allFinite())
        throw std::invalid_argument("ScalarField: values must be finite");
}

ScalarField ScalarField::zero(const Grid1D& g) { return {g, Vec::Zero(g.n)}; }

ScalarField ScalarField::constant(const Grid1D& g, double c) {
    return {g, Vec::Constant(g.n, c)};
}

ScalarField ScalarField::sample(const Grid1D& g, const std::function<double(double)>& f) {
    Vec v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = f(g.x(i));
    return {g, std::move(v)};
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    if (a.grid != b.grid) throw std::invalid_argument("field grids differ");
    return {a.grid, a.values + b.values};
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    if (a.grid != b.grid) throw std::invalid_argument("field grids differ");
    return {a.grid, a.values - b.values};
}

ScalarField operator*(double s, const ScalarField& a) { return {a.grid, s * a.values}; }

FieldPath::FieldPath(std::vector<double> t, std::vector<ScalarField> f)
    : times(std::move(t)), fields(std::move(f)) {
    if (times.size() != fields.size() || times.empty())
        throw std::invalid_argument("FieldPath: one field per time node required");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("FieldPath: time grid must be strictly increasing");
    for (const auto& fld : fields)
        if (fld.grid != fields.front().grid)
            throw std::invalid_argument("FieldPath: all fields must share one grid");
}

MeasureFlow::MeasureFlow(std::vector<double> t, std::vector<ScalarField> d)
    : times(std::move(t)), densities(std::move(d)) {
    if (times.size() != densities.size() || times.empty())
        throw std::invalid_argument("MeasureFlow: one density per time node required");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("MeasureFlow: time grid must be strictly increasing");
    const Grid1D& g = densities.front().grid;
    for (const auto& mu : densities) {
        if (mu.grid != g) throw std::invalid_argument("MeasureFlow: densities share one grid");
        double mass = mu.values.sum() * g.h;
        if (std::abs(mass - 1.0) > 1e-10)
            throw std::invalid_argument("MeasureFlow: density mass must be 1 within 1e-10");
        for (int i = 0; i < g.n; ++i)
            if (mu.values[i] < 0.0) negativity_defect += -mu.values[i] * g.h;
    }
}

ScalarField MeasureFlow::at(double t) const {
    if (t <= times.front()) return densities.front();
    if (t >= times.back()) return densities.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    int j = static_cast<int>(it - times.begin());
    double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
    return {grid(), (1.0 - w) * densities[j - 1].values + w * densities[j].values};
}

std::vector<double> make_time_grid(double T, int steps) {
    if (!(T > 0.0) || steps < 1) throw std::invalid_argument("bad time grid parameters");
    std::vector<double> t(steps + 1);
    for (int i = 0; i <= steps; ++i) t[i] = T * static_cast<double>(i) / steps;
    t.back() = T;
    return t;
}

double integrate(const ScalarField& f) { return f.values.sum() * f.grid.h; }

}  // namespace hjbflow
