#include "rcet/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rcet/random.hpp"
#include "rcet/specfun.hpp"

namespace rcet::noise {

void NoiseBand::validate() const {
    if (!(gamma_m > 0.0) || !(gamma_c > gamma_m) || !std::isfinite(gamma_c)) {
        throw std::invalid_argument("noise: need 0 < gamma_m < gamma_c");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("noise: sigma must be finite and non-negative");
    }
}

double NoiseBand::log_weight() const { return 1.0 / std::log(gamma_c / gamma_m); }

double NoiseCouplings::d() const { return std::abs(g1 - g2); }

FluctuatorEnsemble build_ensemble(std::size_t n, double gamma_m, double gamma_c, double sigma,
                                  std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("build_ensemble: need at least one fluctuator");
    }
    FluctuatorEnsemble ensemble;
    ensemble.band = {gamma_m, gamma_c, sigma};
    ensemble.band.validate();
    ensemble.amplitude_per_fluctuator = sigma / std::sqrt(static_cast<double>(n));
    rng::Stream stream(seed);
    const double log_span = std::log(gamma_c / gamma_m);
    ensemble.rates.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // uniform() is in (0, 1]; clamp guards the top end against rounding
        const double rate = gamma_m * std::exp(log_span * (1.0 - stream.uniform()));
        ensemble.rates.push_back(std::min(std::max(rate, gamma_m), gamma_c));
    }
    return ensemble;
}

NoiseTrajectory sample_trajectory(const FluctuatorEnsemble& ensemble, double dt, double t_max,
                                  std::uint64_t seed) {
    if (!(dt > 0.0) || !(t_max > dt)) {
        throw std::invalid_argument("sample_trajectory: need dt > 0 and t_max > dt");
    }
    const auto n = static_cast<std::size_t>(std::llround(t_max / dt));
    NoiseTrajectory traj;
    traj.dt = dt;
    traj.seed = seed;
    // Jumps accumulate in a difference array, then a prefix sum yields xi.
    std::vector<double> jumps(n + 1, 0.0);
    const double a = ensemble.amplitude_per_fluctuator;
    const double horizon = dt * static_cast<double>(n);
    rng::Stream stream(seed);
    for (const double rate : ensemble.rates) {
        double sign = stream.coin() ? 1.0 : -1.0;
        jumps[0] += a * sign;
        double t = stream.exponential(rate);
        while (t <= horizon) {
            auto k = static_cast<std::size_t>(std::ceil(t / dt));
            if (k > n) {
                break;
            }
            jumps[k] -= 2.0 * a * sign;
            sign = -sign;
            t += stream.exponential(rate);
        }
    }
    traj.values.resize(n + 1);
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        acc += jumps[k];
        traj.values[k] = acc;
    }
    return traj;
}

double correlation_analytic(const NoiseBand& band, double tau) {
    if (!(tau >= 0.0)) {
        throw std::invalid_argument("correlation_analytic: tau must be non-negative");
    }
    const double s2 = band.sigma * band.sigma;
    if (tau == 0.0) {
        return s2;
    }
    const double xm = 2.0 * band.gamma_m * tau;
    const double xc = 2.0 * band.gamma_c * tau;
    double diff;
    if (xc < 1e-3) {
        // E1(a) - E1(b) = ln(b/a) + sum_k (-1)^k (b^k - a^k) / (k k!)
        diff = std::log(band.gamma_c / band.gamma_m);
        double pa = 1.0;
        double pb = 1.0;
        double fact = 1.0;
        for (int k = 1; k <= 8; ++k) {
            pa *= -xm;
            pb *= -xc;
            fact *= k;
            diff += (pb - pa) / (k * fact);
        }
    } else {
        diff = specfun::exp_integral_e1(xm) - specfun::exp_integral_e1(xc);
    }
    return s2 * band.log_weight() * diff;
}

double spectral_density(const NoiseBand& band, double omega) {
    const double w = std::abs(omega);
    const double s2 = band.sigma * band.sigma;
    const double a = 1.0 / (2.0 * band.gamma_m);
    const double b = 1.0 / (2.0 * band.gamma_c);
    const double pre = s2 * band.log_weight() / std::numbers::pi;
    if (w * a < 1e-6) {
        // arctan(w a) - arctan(w b) = w (a - b) - w^3 (a^3 - b^3) / 3 + ...
        return pre * ((a - b) - w * w * (a * a * a - b * b * b) / 3.0);
    }
    // arctan x - arctan y = arctan((x - y) / (1 + x y)) for x, y > 0
    const double x = w * a;
    const double y = w * b;
    return pre * std::atan((x - y) / (1.0 + x * y)) / w;
}

std::string_view to_string(SpectralRegime regime) {
    switch (regime) {
        case SpectralRegime::White: return "white";
        case SpectralRegime::OneOverF: return "1/f";
        case SpectralRegime::Lorentzian: return "lorentzian";
    }
    return "unknown";
}

SpectralBranch spectral_asymptotics(const NoiseBand& band, double omega) {
    const double w = std::abs(omega);
    const double s2 = band.sigma * band.sigma;
    const double weight = band.log_weight();
    const double r = band.gamma_m / band.gamma_c;
    const double white_end = std::numbers::pi * band.gamma_m / (1.0 - r);
    const double lorentz_start = 4.0 * band.gamma_c * (1.0 - r) / std::numbers::pi;
    if (w <= white_end) {
        const double plateau =
            s2 * weight * (band.gamma_c - band.gamma_m) / (2.0 * std::numbers::pi * band.gamma_m * band.gamma_c);
        return {SpectralRegime::White, plateau};
    }
    if (w < lorentz_start) {
        return {SpectralRegime::OneOverF, s2 * weight / (2.0 * w)};
    }
    return {SpectralRegime::Lorentzian,
            s2 * weight * 2.0 * (band.gamma_c - band.gamma_m) / (std::numbers::pi * w * w)};
}

CorrelationEstimate empirical_correlation(std::span<const NoiseTrajectory> trajectories,
                                          std::span<const std::size_t> lags) {
    if (trajectories.size() < 2) {
        throw std::invalid_argument("empirical_correlation: need at least two trajectories");
    }
    const double dt = trajectories.front().dt;
    const std::size_t len = trajectories.front().values.size();
    for (const auto& traj : trajectories) {
        if (traj.dt != dt || traj.values.size() != len) {
            throw std::invalid_argument("empirical_correlation: trajectories are on different grids");
        }
    }
    CorrelationEstimate est;
    const double m = static_cast<double>(trajectories.size());
    for (const std::size_t lag : lags) {
        if (lag >= len) {
            throw std::invalid_argument("empirical_correlation: lag exceeds trajectory length");
        }
        const std::size_t origins = len - lag;
        double mean = 0.0;
        double m2 = 0.0;
        double count = 0.0;
        for (const auto& traj : trajectories) {
            const double* x = traj.values.data();
            double acc = 0.0;
            for (std::size_t j = 0; j < origins; ++j) {
                acc += x[j] * x[j + lag];
            }
            const double c = acc / static_cast<double>(origins);
            count += 1.0;
            const double delta = c - mean;
            mean += delta / count;
            m2 += delta * (c - mean);
        }
        est.lags.push_back(lag);
        est.tau.push_back(dt * static_cast<double>(lag));
        est.mean.push_back(mean);
        est.std_error.push_back(std::sqrt(m2 / (m - 1.0) / m));
    }
    return est;
}

CorrelationEstimate empirical_correlation(std::span<const NoiseTrajectory> trajectories,
                                          std::size_t max_lag) {
    std::vector<std::size_t> lags(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        lags[k] = k;
    }
    return empirical_correlation(trajectories, lags);
}

}  // namespace rcet::noise
