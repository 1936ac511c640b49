#pragma once

#include <functional>

namespace skg {

/// Bessel function of the first kind, order zero.  Power series for
/// |x| <= 12, large-argument asymptotic expansion beyond; absolute error
/// below 1e-10 across the real line.
double bessel_j0(double x);

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace skg
