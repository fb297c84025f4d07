#pragma once

// Test-only quadrature oracles, independent of the library's numerics.

#include <cmath>
#include <functional>

namespace testsupport {

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b]. The interval is pre-split into fixed panels so
// localized mass cannot hide between the first probe points (e.g. z^2 K(z),
// which vanishes at both endpoints and at the center).
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40) {
  constexpr int panels = 16;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels;
    const double hi = a + (b - a) * (p + 1) / panels;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = detail::simpson(f, lo, hi, flo, fm, fhi);
    total += detail::adaptive_step(f, lo, hi, flo, fm, fhi, whole, tol / panels,
                                   max_depth);
  }
  return total;
}

// Integral of f over [0, x] for integrands with an inverse-square-root
// singularity at 0, via the substitution t = u^2. The substituted integrand
// g(u) = 2u f(u^2) is bounded but f itself cannot be evaluated at 0, so the
// first sliver is closed with the rectangle g(eps) * eps.
inline double integrate_sqrt_left(const std::function<double(double)>& f, double x,
                                  double tol = 1e-12) {
  const auto g = [&](double u) { return 2.0 * u * f(u * u); };
  const double eps = 1e-6;
  return g(eps) * eps + integrate(g, eps, std::sqrt(x), tol);
}

// Integral of f over [0, 1] with inverse-square-root endpoint singularities
// at both 0 and 1: split at 1/2 and substitute on each side.
inline double integrate_unit_singular(const std::function<double(double)>& f,
                                      double tol = 1e-12) {
  const auto g = [&](double u) { return 2.0 * u * f(1.0 - u * u); };
  const double eps = 1e-6;
  const double left = integrate_sqrt_left(f, 0.5, tol);
  const double right = g(eps) * eps + integrate(g, eps, std::sqrt(0.5), tol);
  return left + right;
}

}  // namespace testsupport
