#include "purify/quadrature.hpp"

#include <cmath>

namespace purify::quad {

namespace {

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double disk_average(const std::function<double(double, double)>& f,
                    double tol) {
  const double pi = std::acos(-1.0);
  // inner integrals are smooth in r for fixed angle; the angular direction
  // carries any kinks, so give the inner pass the tighter budget
  const double inner_tol = tol / 64.0;
  auto ring = [&](double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return integrate([&](double r) { return f(r * c, r * s) * r; }, 0.0, 1.0,
                     inner_tol);
  };
  // one panel per octant: axis and diagonal kinks (absolute values, branch
  // switches) land on panel edges instead of fooling the error estimate at
  // symmetric midpoints
  double sum = 0.0;
  for (int k = 0; k < 8; ++k)
    sum += integrate(ring, k * pi / 4.0, (k + 1) * pi / 4.0, tol * pi / 8.0);
  return sum / pi;
}

}  // namespace purify::quad
