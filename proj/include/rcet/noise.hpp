// noise.hpp - spin-fluctuator noise: ensemble, telegraph trajectories,
// correlation function and spectral density

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace rcet::noise {

// Switching-rate band and total RMS amplitude; everything analytic about the
// noise depends only on these three numbers. Rates are the telegraph flip
// rates gamma, so a single fluctuator correlates as e^{-2 gamma tau}.
struct NoiseBand {
    double gamma_m{5e-5};
    double gamma_c{0.5};
    double sigma{1.0};

    // Throws std::invalid_argument unless 0 < gamma_m < gamma_c and sigma >= 0.
    void validate() const;
    // 1 / ln(gamma_c / gamma_m)
    double log_weight() const;
};

struct FluctuatorEnsemble {
    NoiseBand band;
    std::vector<double> rates;
    double amplitude_per_fluctuator{0.0};

    std::size_t n_fluctuators() const { return rates.size(); }
};

struct NoiseCouplings {
    double g1{0.0};
    double g2{0.0};

    double d() const;
    // Couplings with g1 - g2 = d, g2 = 0.
    static NoiseCouplings differential(double d) { return {d, 0.0}; }
};

struct NoiseTrajectory {
    double dt{0.0};
    std::vector<double> values;  // xi(k dt), k = 0 .. n
    std::uint64_t seed{0};

    double t_max() const { return dt * static_cast<double>(values.size() - 1); }
};

// Rates log-uniform on [gamma_m, gamma_c], amplitudes sigma / sqrt(n).
FluctuatorEnsemble build_ensemble(std::size_t n, double gamma_m, double gamma_c, double sigma,
                                  std::uint64_t seed);

// Exact event-driven switching sampled onto t_k = k dt; each grid value
// includes every flip at or before t_k. Signs start equiprobable.
NoiseTrajectory sample_trajectory(const FluctuatorEnsemble& ensemble, double dt, double t_max,
                                  std::uint64_t seed);

// chi(tau) = sigma^2 (E1(2 gamma_m tau) - E1(2 gamma_c tau)) / ln(gamma_c / gamma_m)
double correlation_analytic(const NoiseBand& band, double tau);

// S(omega) = (1/pi) \int_0^inf chi(tau) cos(omega tau) dtau, even in omega.
double spectral_density(const NoiseBand& band, double omega);

enum class SpectralRegime { White, OneOverF, Lorentzian };

std::string_view to_string(SpectralRegime regime);

struct SpectralBranch {
    SpectralRegime regime;
    double value;
};

// Piecewise asymptote: white plateau, sigma^2 / (2 omega ln) and the
// Lorentzian tail sigma^2 (gamma_c - gamma_m) / (pi omega^2 ln). Branches
// switch where neighbouring asymptotes intersect.
SpectralBranch spectral_asymptotics(const NoiseBand& band, double omega);

struct CorrelationEstimate {
    std::vector<std::size_t> lags;
    std::vector<double> tau;
    std::vector<double> mean;
    std::vector<double> std_error;
};

// Per trajectory the lag product is averaged over all available origins;
// mean and standard error are then taken across trajectories.
// Throws std::invalid_argument for fewer than two trajectories, mismatched
// grids or lags beyond the trajectory length.
CorrelationEstimate empirical_correlation(std::span<const NoiseTrajectory> trajectories,
                                          std::span<const std::size_t> lags);
// All lags 0 .. max_lag.
CorrelationEstimate empirical_correlation(std::span<const NoiseTrajectory> trajectories,
                                          std::size_t max_lag);

}  // namespace rcet::noise
