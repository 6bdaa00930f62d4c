// quadrature.hpp - adaptive Gauss-Kronrod integration on finite intervals

#pragma once

#include <functional>
#include <span>

namespace rcet::quad {

struct Result {
    double value{0.0};
    double error{0.0};
    int evaluations{0};
    bool converged{false};
};

// Globally adaptive 7/15-point Gauss-Kronrod rule. The interval with the
// largest error estimate is bisected until the summed estimate drops below
// abs_tol or max_intervals is reached (converged = false in that case).
Result integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_intervals = 20000);

// Same, starting from the partition given by sorted breakpoints
// (first and last entries are the integration limits).
Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 double abs_tol, int max_intervals = 200000);

// Single 15-point Kronrod estimate on [a, b] with its Gauss-7 error bound.
Result gauss_kronrod_15(const std::function<double(double)>& f, double a, double b);

}  // namespace rcet::quad
