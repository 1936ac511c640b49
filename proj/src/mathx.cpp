#include "skg/mathx.hpp"

#include <cmath>
#include <cstdlib>

namespace skg {
namespace {

constexpr double kPi = 3.14159265358979323846;

double j0_series(double x) {
    // J0(x) = sum_k (-x^2/4)^k / (k!)^2.  For |x| <= 12 the largest term is
    // ~4e3, so cancellation costs at most ~4 digits -- well inside the
    // 1e-10 budget.
    const double q = x * x / 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (double(k) * double(k));
        sum += term;
        if (std::fabs(term) < 1e-18) {
            break;
        }
    }
    return sum;
}

double j0_asymptotic(double x) {
    // Stokes expansion: J0(x) ~ sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)]
    // with P = t0 - t2 + t4 - ..., Q = t1 - t3 + ... and
    // t_m = t_{m-1} * (2m-1)^2 / (m * 8x).  Truncated at the smallest term.
    double p = 1.0;
    double q = 0.0;
    double t = 1.0;
    double prev = 1.0;
    for (int m = 1; m <= 20; ++m) {
        const double odd = 2.0 * m - 1.0;
        t *= odd * odd / (double(m) * 8.0 * x);
        if (std::fabs(t) >= prev) {
            break;  // asymptotic series started diverging
        }
        prev = std::fabs(t);
        if (m % 2 == 1) {
            // Q = -t1 + t3 - t5 + ...
            q += ((((m - 1) / 2) % 2 == 0) ? -1.0 : 1.0) * t;
        } else {
            // P = 1 - t2 + t4 - ...
            p += (((m / 2) % 2 == 0) ? 1.0 : -1.0) * t;
        }
        if (prev < 1e-16) {
            break;
        }
    }
    const double chi = x - kPi / 4.0;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
    x = std::fabs(x);
    return x <= 12.0 ? j0_series(x) : j0_asymptotic(x);
}

double sinc(double x) {
    if (std::fabs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

namespace {

double simpson_panel(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_panel(a, fa, m, fm, flm);
    const double right = simpson_panel(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           simpson_recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) {
        return 0.0;
    }
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = simpson_panel(a, fa, b, fb, fm);
    return simpson_recurse(f, a, fa, b, fb, m, fm, whole, tol, 40);
}

}  // namespace skg
