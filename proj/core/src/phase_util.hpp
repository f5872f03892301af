#pragma once

// shared phase primitives for periodic-waveform arithmetic. phases are kept
// as cycle fractions and reduced to [-1/2, 1/2] before trigonometry, so
// integral cycle counts map to exact results (e.g. exact zeros for the even
// coefficients of a half-duty square wave).

#include <cmath>
#include <complex>
#include <numbers>

namespace polyscat::detail {

using cplx = std::complex<double>;

// y minus its nearest integer; exact for |y| below 2^52
inline double frac_reduce(double y) { return y - std::nearbyint(y); }

// e^{-j 2 pi y}
inline cplx cis_neg(double y) {
  return std::polar(1.0, -2.0 * std::numbers::pi * frac_reduce(y));
}

// 1 - e^{-j 2 pi y} as 2 j sin(pi y) e^{-j pi y}: no cancellation for small
// fractional parts, exactly zero for integral y
inline cplx one_minus_cis_neg(double y) {
  const double yr = frac_reduce(y);
  const double s = std::sin(std::numbers::pi * yr);
  return cplx(0.0, 2.0 * s) * std::polar(1.0, -std::numbers::pi * yr);
}

}  // namespace polyscat::detail
