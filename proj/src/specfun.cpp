// Exponential integral E1 and the complex error function family.
//
// E1 uses the classical two-regime construction (power series about the
// origin, Lentz continued fraction in the tail). The complex functions are
// built on a Faddeeva evaluator in the style of Poppe and Wijers: a power
// series near the origin, a Laplace continued fraction far out, and a Taylor
// shifted continued fraction in between.

#include "rcet/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rcet::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kTwoOverSqrtPi = 1.12837916709551257389615890312154517;

}  // namespace

double exp_integral_e1_series(double x) {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    double term = 1.0;  // (-x)^k / k!
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double contrib = term / k;
        sum += contrib;
        if (std::abs(contrib) < 1e-17 * std::abs(sum)) {
            break;
        }
    }
    return -kEulerGamma - std::log(x) - sum;
}

double exp_integral_e1_continued_fraction(double x) {
    // Modified Lentz evaluation of
    //   E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            break;
        }
    }
    return h * std::exp(-x);
}

double exp_integral_e1(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("exp_integral_e1: argument must be positive");
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    return x < kE1SeriesLimit ? exp_integral_e1_series(x)
                              : exp_integral_e1_continued_fraction(x);
}

Complex faddeeva_w(Complex z) {
    const double xi = z.real();
    const double yi = z.imag();
    const double xabs = std::abs(xi);
    const double yabs = std::abs(yi);
    const double xs = xabs / 6.3;
    const double ys = yabs / 4.4;
    double qrho = xs * xs + ys * ys;

    const double xquad = xabs * xabs - yabs * yabs;
    const double yquad = 2.0 * xabs * yabs;

    double u = 0.0;
    double v = 0.0;
    double u2 = 0.0;
    double v2 = 0.0;

    const bool near_origin = qrho < 0.085264;
    if (near_origin) {
        // w(z) = exp(-z^2) (1 + 2i/sqrt(pi) sum z^{2n+1} / (n! (2n+1)))
        qrho = (1.0 - 0.85 * ys) * std::sqrt(qrho);
        const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
        int j = 2 * n + 1;
        double xsum = 1.0 / j;
        double ysum = 0.0;
        for (int i = n; i >= 1; --i) {
            j -= 2;
            const double xaux = (xsum * xquad - ysum * yquad) / i;
            ysum = (xsum * yquad + ysum * xquad) / i;
            xsum = xaux + 1.0 / j;
        }
        const double u1 = -kTwoOverSqrtPi * (xsum * yabs + ysum * xabs) + 1.0;
        const double v1 = kTwoOverSqrtPi * (xsum * xabs - ysum * yabs);
        const double daux = std::exp(-xquad);
        u2 = daux * std::cos(yquad);
        v2 = -daux * std::sin(yquad);
        u = u1 * u2 - v1 * v2;
        v = u1 * v2 + v1 * u2;
    } else {
        double h = 0.0;
        double h2 = 0.0;
        int kapn = 0;
        int nu = 0;
        if (qrho > 1.0) {
            // Laplace continued fraction only.
            qrho = std::sqrt(qrho);
            nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
        } else {
            // Taylor expansion about z + ih, coefficients from the fraction.
            qrho = (1.0 - ys) * std::sqrt(1.0 - qrho);
            h = 1.88 * qrho;
            h2 = 2.0 * h;
            kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
            nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
        }
        const bool shifted = h > 0.0;
        double qlambda = shifted ? std::pow(h2, kapn) : 0.0;

        double rx = 0.0;
        double ry = 0.0;
        double sx = 0.0;
        double sy = 0.0;
        for (int n = nu; n >= 0; --n) {
            const double np1 = n + 1.0;
            double tx = yabs + h + np1 * rx;
            const double ty = xabs - np1 * ry;
            const double c = 0.5 / (tx * tx + ty * ty);
            rx = c * tx;
            ry = c * ty;
            if (shifted && n <= kapn) {
                tx = qlambda + sx;
                sx = rx * tx - ry * sy;
                sy = ry * tx + rx * sy;
                qlambda /= h2;
            }
        }
        if (shifted) {
            u = kTwoOverSqrtPi * sx;
            v = kTwoOverSqrtPi * sy;
        } else {
            u = kTwoOverSqrtPi * rx;
            v = kTwoOverSqrtPi * ry;
        }
        if (yabs == 0.0) {
            u = std::exp(-xabs * xabs);
        }
    }

    // Map back from the first quadrant.
    if (yi < 0.0) {
        if (near_origin) {
            u2 *= 2.0;
            v2 *= 2.0;
        } else {
            const double w1 = 2.0 * std::exp(-xquad);
            u2 = w1 * std::cos(yquad);
            v2 = -w1 * std::sin(yquad);
        }
        u = u2 - u;
        v = v2 - v;
        if (xi > 0.0) {
            v = -v;
        }
    } else if (xi < 0.0) {
        v = -v;
    }
    return {u, v};
}

Complex erfcx_complex(Complex z) {
    return faddeeva_w(Complex{-z.imag(), z.real()});
}

Complex erfc_complex(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    if (std::isnan(x) || std::isnan(y) || std::abs(x) > kErfcWorkingRange ||
        std::abs(y) > kErfcWorkingRange) {
        throw std::domain_error("erfc_complex: argument outside working range");
    }
    if (x < 0.0) {
        return Complex{2.0, 0.0} - erfc_complex(-z);
    }
    // erfc(z) = exp(-z^2) w(iz); combine the exponent before exponentiating.
    const double re_exp = y * y - x * x;
    if (re_exp > std::log(std::numeric_limits<double>::max())) {
        throw std::overflow_error("erfc_complex: result overflows");
    }
    const Complex phase = std::polar(std::exp(re_exp), -2.0 * x * y);
    const Complex result = phase * erfcx_complex(z);
    if (!std::isfinite(result.real()) || !std::isfinite(result.imag())) {
        throw std::overflow_error("erfc_complex: result overflows");
    }
    return result;
}

}  // namespace rcet::specfun
