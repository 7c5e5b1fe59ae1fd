#ifndef HJBFLOW_SPECTRAL_HPP
#define HJBFLOW_SPECTRAL_HPP

#include <complex>
#include <functional>

#include "hjbflow/grid.hpp"

namespace hjbflow {

using Cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

/// Wavenumbers k_m = m*pi/L in FFT ordering (0,1,...,N/2-1,-N/2,...,-1).
Vec wavenumbers(const Grid1D& g);

CVec fft(const Vec& v);
Vec ifft_real(const CVec& c);

/// Applies the Fourier multiplier m(k) to f: F^{-1}[ m(k) F[f] ].
ScalarField apply_multiplier(const ScalarField& f, const std::function<Cplx(double)>& m);

}  // namespace hjbflow

#endif
