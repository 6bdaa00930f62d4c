#include "rcet/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>
#include <string>

#include "rcet/quadrature.hpp"
#include "rcet/specfun.hpp"

namespace rcet::rates {

namespace {

// G(x) = \int_x^inf (u - 1 + e^{-u}) / u^3 du
//      = E1(x)/2 + (1 - e^{-x}(1 + x)) / (2 x^2) + (x - 1 + e^{-x}) / x^2
double theta_primitive(double x) {
    double h1;
    double h2;
    if (x < 0.5) {
        // h1 = sum_{n>=2} (-1)^n (n-1)/n! x^{n-2}, h2 = sum_{n>=2} (-1)^n / n! x^{n-2}
        h1 = 0.0;
        h2 = 0.0;
        double term = 0.5;  // (-1)^n x^{n-2} / n! at n = 2
        for (int n = 2; n < 24; ++n) {
            h1 += (n - 1) * term;
            h2 += term;
            term *= -x / (n + 1);
        }
    } else {
        const double e = std::exp(-x);
        h1 = (1.0 - e * (1.0 + x)) / (x * x);
        h2 = (x - 1.0 + e) / (x * x);
    }
    return 0.5 * specfun::exp_integral_e1(x) + 0.5 * h1 + h2;
}

// Log-decay of e^{-Gamma t} K(t); nondecreasing in t.
double decay_exponent(double gamma, double d, const noise::NoiseBand& band, Kernel kernel, double t) {
    if (kernel == Kernel::Gaussian) {
        const double s = d * band.sigma * t;
        return gamma * t + 0.5 * s * s;
    }
    return gamma * t + theta(t, d, band);
}

// Past this time the integrand is below e^{-40} and contributes nothing.
double cutoff_time(double gamma, double d, const noise::NoiseBand& band, Kernel kernel) {
    constexpr double kExponent = 40.0;
    if (gamma == 0.0 && (d == 0.0 || band.sigma == 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    double hi = 1e-3;
    while (decay_exponent(gamma, d, band, kernel, hi) < kExponent) {
        hi *= 2.0;
        if (hi > 1e12) {
            return std::numeric_limits<double>::infinity();
        }
    }
    double lo = 0.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (decay_exponent(gamma, d, band, kernel, mid) < kExponent ? lo : hi) = mid;
    }
    return hi;
}

// (V^2/2) \int_a^b f with panels no wider than half an oscillation period.
double integrate_rate(const SystemParams& params, double d, const noise::NoiseBand& band,
                      Kernel kernel, double a, double b) {
    if (b <= a) {
        return 0.0;
    }
    const auto integrand = [&](double tau) {
        return std::exp(-params.gamma * tau) * std::cos(params.epsilon * tau) *
               generating_functional(tau, d, band, kernel);
    };
    const double eps = std::abs(params.epsilon);
    std::size_t panels = 4;
    if (eps > 0.0) {
        panels = std::max<std::size_t>(panels, static_cast<std::size_t>(std::ceil((b - a) * eps / std::numbers::pi)));
    }
    panels = std::min<std::size_t>(panels, 200000);
    std::vector<double> breaks(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        breaks[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
    }
    breaks.back() = b;
    const quad::Result r = quad::integrate(integrand, breaks, 1e-12 * std::max(1.0, b - a));
    return 0.5 * params.v * params.v * r.value;
}

void require_positive_width(double d, double sigma, const char* what) {
    if (!(d * sigma > 0.0) || !std::isfinite(d * sigma)) {
        throw std::domain_error(std::string(what) + ": requires D sigma > 0");
    }
}

}  // namespace

double theta(double t, double d, const noise::NoiseBand& band) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("theta: t must be non-negative");
    }
    if (t == 0.0 || d == 0.0 || band.sigma == 0.0) {
        return 0.0;
    }
    const double diff = theta_primitive(2.0 * band.gamma_m * t) - theta_primitive(2.0 * band.gamma_c * t);
    const double ds = d * band.sigma;
    return ds * ds * band.log_weight() * t * t * diff;
}

double generating_functional(double t, double d, const noise::NoiseBand& band, Kernel kernel) {
    if (kernel == Kernel::Gaussian) {
        const double s = d * band.sigma * t;
        return std::exp(-0.5 * s * s);
    }
    return std::exp(-theta(t, d, band));
}

double rate_r_derivative(const SystemParams& params, const noise::NoiseCouplings& couplings,
                         const noise::NoiseBand& band, double t, Kernel kernel) {
    return 0.5 * params.v * params.v * std::exp(-params.gamma * t) * std::cos(params.epsilon * t) *
           generating_functional(t, couplings.d(), band, kernel);
}

double rate_r_of_t(const SystemParams& params, const noise::NoiseCouplings& couplings,
                   const noise::NoiseBand& band, double t, Kernel kernel) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("rate_r_of_t: t must be non-negative");
    }
    params.validate();
    const double d = couplings.d();
    const double upper = std::min(t, cutoff_time(params.gamma, d, band, kernel));
    return integrate_rate(params, d, band, kernel, 0.0, upper);
}

double marcus_rate(double v, double epsilon, double d, double sigma) {
    require_positive_width(d, sigma, "marcus_rate");
    const double w = d * sigma;
    return 0.25 * v * v * std::sqrt(2.0 * std::numbers::pi) / w * std::exp(-0.5 * epsilon * epsilon / (w * w));
}

double marcus_rate_physical(double v12, double e1_minus_e2, double lambda_reorg, double kt) {
    const double lk = lambda_reorg * kt;
    if (!(lambda_reorg > 0.0) || !(kt > 0.0) || !std::isfinite(lk)) {
        throw std::domain_error("marcus_rate_physical: requires lambda > 0 and kT > 0");
    }
    return v12 * v12 * std::sqrt(std::numbers::pi / lk) *
           std::exp(-e1_minus_e2 * e1_minus_e2 / (4.0 * lk));
}

double marcus_rate_gamma(double v, double epsilon, double d, double sigma, double gamma) {
    require_positive_width(d, sigma, "marcus_rate_gamma");
    if (!(gamma >= 0.0)) {
        throw std::invalid_argument("marcus_rate_gamma: gamma must be non-negative");
    }
    const double w = d * sigma;
    const Complex z = Complex{epsilon, gamma} / (std::numbers::sqrt2 * w);
    return 0.25 * v * v * std::sqrt(2.0 * std::numbers::pi) / w * specfun::faddeeva_w(z).real();
}

Complex marcus_rate_gamma_pair(double v, double epsilon, double d, double sigma, double gamma) {
    require_positive_width(d, sigma, "marcus_rate_gamma_pair");
    const double w = d * sigma;
    const Complex z = Complex{gamma, epsilon} / (std::numbers::sqrt2 * w);
    const Complex zb = std::conj(z);
    const Complex sum = std::exp(z * z) * specfun::erfc_complex(z) + std::exp(zb * zb) * specfun::erfc_complex(zb);
    return v * v * std::sqrt(2.0 * std::numbers::pi) / (8.0 * w) * sum;
}

RatePair rate_eigenvalues(double r_gamma, double gamma) {
    if (!(r_gamma >= 0.0) || !(gamma >= 0.0)) {
        throw std::invalid_argument("rate_eigenvalues: rates must be non-negative");
    }
    const double s = std::hypot(r_gamma, gamma);
    const double r1 = r_gamma + gamma + s;
    // Vieta: r1 r2 = 2 R Gamma, avoids cancellation in R + Gamma - s
    const double r2 = r1 > 0.0 ? 2.0 * r_gamma * gamma / r1 : 0.0;
    return {r_gamma, r1, r2};
}

analytic::Populations populations_rate_eq(double r_gamma, double gamma, double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("populations_rate_eq: t must be non-negative");
    }
    const RatePair rp = rate_eigenvalues(r_gamma, gamma);
    const double s = std::hypot(r_gamma, gamma);
    if (s == 0.0) {
        return {1.0, 0.0};
    }
    const double e1 = std::exp(-rp.r1 * t);
    const double e2 = std::exp(-rp.r2 * t);
    const double rho11 = (0.5 - 0.5 * gamma / s) * e1 + (0.5 + 0.5 * gamma / s) * e2;
    // e2 - e1 = e^{-r2 t}(1 - e^{-2 s t})
    const double rho22 = 0.5 * r_gamma / s * (-std::expm1(-2.0 * s * t)) * e2;
    return {rho11, rho22};
}

double efficiency_noise(double r_gamma, double gamma, double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("efficiency_noise: t must be non-negative");
    }
    const RatePair rp = rate_eigenvalues(r_gamma, gamma);
    const double s = std::hypot(r_gamma, gamma);
    if (s == 0.0 || gamma == 0.0) {
        return 0.0;
    }
    // 1 - (R1 e^{-R2 t} - R2 e^{-R1 t}) / (R1 - R2), R1 - R2 = 2s
    return (rp.r2 * std::expm1(-rp.r1 * t) - rp.r1 * std::expm1(-rp.r2 * t)) / (2.0 * s);
}

double efficiency_noise_asymptotic(double r_gamma, double gamma, double t) {
    const RatePair rp = rate_eigenvalues(r_gamma, gamma);
    const double s = std::hypot(r_gamma, gamma);
    if (s == 0.0 || gamma == 0.0) {
        return 0.0;
    }
    return 1.0 - rp.r1 / (2.0 * s) * std::exp(-rp.r2 * t);
}

analytic::Populations populations_gamma0_collective(const SystemParams& params,
                                                   const noise::NoiseCouplings& couplings, double t) {
    if (params.gamma != 0.0) {
        throw std::invalid_argument("populations_gamma0_collective: requires gamma = 0");
    }
    if (couplings.g1 != couplings.g2) {
        throw std::invalid_argument("populations_gamma0_collective: requires g1 = g2");
    }
    if (params.epsilon == 0.0) {
        throw std::invalid_argument("populations_gamma0_collective: requires epsilon != 0");
    }
    if (!(t >= 0.0)) {
        throw std::invalid_argument("populations_gamma0_collective: t must be non-negative");
    }
    const double ratio = params.v / params.epsilon;
    const double s = std::sin(0.5 * params.epsilon * t);
    const double rho11 = 0.5 + 0.5 * std::exp(-2.0 * ratio * ratio * s * s);
    return {rho11, 1.0 - rho11};
}

RateCurve::RateCurve(const SystemParams& params, const noise::NoiseCouplings& couplings,
                     const noise::NoiseBand& band, double t_max, std::size_t n_intervals, Kernel kernel) {
    if (!(t_max > 0.0) || n_intervals == 0) {
        throw std::invalid_argument("RateCurve: need t_max > 0 and at least one interval");
    }
    params.validate();
    h_ = t_max / static_cast<double>(n_intervals);
    const double d = couplings.d();
    const double cutoff = cutoff_time(params.gamma, d, band, kernel);
    values_.assign(n_intervals + 1, 0.0);
    slopes_.assign(n_intervals + 1, 0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j <= n_intervals; ++j) {
        const double t = h_ * static_cast<double>(j);
        if (j > 0) {
            const double a = h_ * static_cast<double>(j - 1);
            acc += integrate_rate(params, d, band, kernel, std::min(a, cutoff), std::min(t, cutoff));
        }
        values_[j] = acc;
        slopes_[j] = t < cutoff ? rate_r_derivative(params, couplings, band, t, kernel) : 0.0;
    }
}

double RateCurve::operator()(double t) const {
    const double tm = t_max();
    if (!(t >= 0.0) || t > tm * (1.0 + 1e-12)) {
        throw std::out_of_range("RateCurve: t outside the tabulated range");
    }
    const std::size_t last = values_.size() - 1;
    auto j = static_cast<std::size_t>(t / h_);
    if (j >= last) {
        j = last - 1;
    }
    const double s = (t - h_ * static_cast<double>(j)) / h_;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * values_[j] + h10 * h_ * slopes_[j] + h01 * values_[j + 1] + h11 * h_ * slopes_[j + 1];
}

}  // namespace rcet::rates
