// rates.hpp - cumulant rate theory: time-dependent rate, Marcus-type limits,
// two-exponential rate equations and the noise-assisted efficiency

#pragma once

#include <vector>

#include "rcet/analytic.hpp"
#include "rcet/model.hpp"
#include "rcet/noise.hpp"

namespace rcet::rates {

// Noise average of the relative phase factor.
// Exact: e^{-Theta(t)} with the full correlation function.
// Gaussian: e^{-(D sigma t)^2 / 2}, i.e. chi frozen at chi(0).
enum class Kernel { Exact, Gaussian };

struct RatePair {
    double r_gamma{0.0};
    double r1{0.0};
    double r2{0.0};
};

// Theta(t) = D^2 \int_0^t (t - s) chi(s) ds, evaluated in closed form.
double theta(double t, double d, const noise::NoiseBand& band);

double generating_functional(double t, double d, const noise::NoiseBand& band,
                             Kernel kernel = Kernel::Exact);

// R(t) = (V^2/2) \int_0^t e^{-Gamma tau} cos(eps tau) K(tau) dtau.
double rate_r_of_t(const SystemParams& params, const noise::NoiseCouplings& couplings,
                   const noise::NoiseBand& band, double t, Kernel kernel = Kernel::Exact);

// Integrand of rate_r_of_t, i.e. dR/dt.
double rate_r_derivative(const SystemParams& params, const noise::NoiseCouplings& couplings,
                         const noise::NoiseBand& band, double t, Kernel kernel = Kernel::Exact);

// (V^2/4) sqrt(2 pi) / (D sigma) exp(-eps^2 / (2 D^2 sigma^2)).
// Throws std::domain_error when D sigma <= 0.
double marcus_rate(double v, double epsilon, double d, double sigma);

// |V12|^2 sqrt(pi / (lambda kT)) exp(-(E1 - E2)^2 / (4 lambda kT)).
// Throws std::domain_error unless lambda kT > 0.
double marcus_rate_physical(double v12, double e1_minus_e2, double lambda_reorg, double kt);

// Large-time rate with sink broadening, Gaussian kernel:
// (V^2 sqrt(2 pi) / (4 D sigma)) Re w((eps + i Gamma) / (sqrt(2) D sigma)).
double marcus_rate_gamma(double v, double epsilon, double d, double sigma, double gamma);

// The same quantity written as the conjugate pair
// e^{z^2} erfc(z) + e^{zbar^2} erfc(zbar), z = (Gamma + i eps) / (sqrt(2) D sigma),
// before taking the real part. Throws std::overflow_error if erfc leaves
// double range (|eps| much larger than D sigma).
Complex marcus_rate_gamma_pair(double v, double epsilon, double d, double sigma, double gamma);

// R1,2 = R + Gamma +- sqrt(R^2 + Gamma^2)
RatePair rate_eigenvalues(double r_gamma, double gamma);

// Donor-start solution of the constant-rate equations
// rho11' = -R (rho11 - rho22), rho22' = R (rho11 - rho22) - 2 Gamma rho22.
analytic::Populations populations_rate_eq(double r_gamma, double gamma, double t);

// eta = 1 - rho11 - rho22 for the constant-rate equations. Requires gamma > 0.
double efficiency_noise(double r_gamma, double gamma, double t);

// Large-time form 1 - R1 / (R1 - R2) e^{-R2 t}.
double efficiency_noise_asymptotic(double r_gamma, double gamma, double t);

// Gamma = 0, g1 = g2, eps != 0:
// rho11 = 1/2 + (1/2) exp(-2 (V/eps)^2 sin^2(eps t / 2)).
analytic::Populations populations_gamma0_collective(const SystemParams& params,
                                                   const noise::NoiseCouplings& couplings, double t);

// R(t) tabulated on a uniform grid and interpolated by cubic Hermite
// polynomials using the analytic derivative. Immutable after construction.
class RateCurve {
public:
    RateCurve(const SystemParams& params, const noise::NoiseCouplings& couplings,
              const noise::NoiseBand& band, double t_max, std::size_t n_intervals,
              Kernel kernel = Kernel::Exact);

    double operator()(double t) const;
    double t_max() const { return h_ * static_cast<double>(values_.size() - 1); }
    double step() const { return h_; }
    const std::vector<double>& nodes() const { return values_; }

private:
    double h_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

}  // namespace rcet::rates
