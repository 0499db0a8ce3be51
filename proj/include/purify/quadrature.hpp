#pragma once
#include <functional>

namespace purify::quad {

// Adaptive Simpson on [a, b]; tol is an absolute error target, halved on each
// subdivision. Handles integrands with isolated kinks by local refinement.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 40);

// (1/pi) * integral of f over the unit disk x^2 + y^2 <= 1, computed in polar
// coordinates with nested adaptive Simpson.
double disk_average(const std::function<double(double, double)>& f,
                    double tol = 1e-8);

}  // namespace purify::quad
