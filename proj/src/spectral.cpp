#include "hjbflow/spectral.hpp"

#include <unsupported/Eigen/FFT>

namespace hjbflow {

Vec wavenumbers(const Grid1D& g) {
    Vec k(g.n);
    double base = M_PI / g.half_width;
    for (int m = 0; m < g.n; ++m) {
        int freq = (m <= g.n / 2 - 1) ? m : m - g.n;
        k[m] = base * freq;
    }
    return k;
}

CVec fft(const Vec& v) {
    Eigen::FFT<double> engine;
    std::vector<Cplx> out;
    std::vector<double> in(v.data(), v.data() + v.size());
    engine.fwd(out, in);
    return Eigen::Map<CVec>(out.data(), static_cast<int>(out.size()));
}

Vec ifft_real(const CVec& c) {
    Eigen::FFT<double> engine;
    std::vector<Cplx> in(c.data(), c.data() + c.size());
    std::vector<Cplx> out;
    engine.inv(out, in);
    Vec r(static_cast<int>(out.size()));
    for (int i = 0; i < r.size(); ++i) r[i] = out[i].real();
    return r;
}

ScalarField apply_multiplier(const ScalarField& f, const std::function<Cplx(double)>& m) {
    Vec k = wavenumbers(f.grid);
    CVec c = fft(f.values);
    for (int i = 0; i < c.size(); ++i) c[i] *= m(k[i]);
    return {f.grid, ifft_real(c)};
}

}  // namespace hjbflow
