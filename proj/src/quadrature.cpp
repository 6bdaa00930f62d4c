#include "rcet/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace rcet::quad {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the Gauss-7 nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Interval& other) const { return error < other.error; }
};

}  // namespace

Result gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }
    Result r;
    r.value = kronrod * half;
    r.error = std::abs((kronrod - gauss) * half);
    r.evaluations = 15;
    return r;
}

Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 double abs_tol, int max_intervals) {
    if (breakpoints.size() < 2) {
        throw std::invalid_argument("quad::integrate: need at least two breakpoints");
    }
    std::priority_queue<Interval> heap;
    Result total;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(b >= a)) {
            throw std::invalid_argument("quad::integrate: breakpoints must be sorted");
        }
        if (b == a) {
            continue;
        }
        const Result r = gauss_kronrod_15(f, a, b);
        total.evaluations += r.evaluations;
        value += r.value;
        error += r.error;
        heap.push({a, b, r.value, r.error});
    }
    int intervals = static_cast<int>(heap.size());
    while (error > abs_tol && intervals < max_intervals && !heap.empty()) {
        const Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval can no longer be split in floating point.
            heap.push({worst.a, worst.b, worst.value, 0.0});
            error -= worst.error;
            continue;
        }
        const Result left = gauss_kronrod_15(f, worst.a, mid);
        const Result right = gauss_kronrod_15(f, mid, worst.b);
        total.evaluations += left.evaluations + right.evaluations;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        ++intervals;
    }
    // Re-sum from the leaves to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    total.value = value;
    total.error = error;
    total.converged = error <= abs_tol;
    return total;
}

Result integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_intervals) {
    const std::array<double, 2> limits{a, b};
    return integrate(f, limits, abs_tol, max_intervals);
}

}  // namespace rcet::quad
