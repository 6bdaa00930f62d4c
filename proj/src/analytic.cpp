#include "rcet/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rcet::analytic {

namespace {

constexpr Complex kI{0.0, 1.0};

// sin(x)/x, regular at the origin.
Complex sinc(Complex x) {
    if (std::abs(x) < 1e-4) {
        const Complex x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// e^{-d} cosh(y) and e^{-d} sinh(y) / y for y >= 0, d >= y; no overflow.
struct DampedHyperbolic {
    double cosh;
    double sinhc;
};

DampedHyperbolic damped_hyperbolic(double y, double d) {
    if (y < 1.0) {
        const double e = std::exp(-d);
        const double sh = y < 1e-4 ? 1.0 + y * y / 6.0 + y * y * y * y / 120.0 : std::sinh(y) / y;
        return {e * std::cosh(y), e * sh};
    }
    const double up = std::exp(y - d);
    const double down = std::exp(-y - d);
    return {0.5 * (up + down), 0.5 * (up - down) / y};
}

// e^{-Gamma t/2} cos(Omega t/2) and e^{-Gamma t/2} sin(Omega t/2) / Omega.
struct DampedRotation {
    Complex cos;
    Complex sin_over_omega;
};

DampedRotation damped_rotation(Complex omega, double gamma, double t) {
    const Complex x = 0.5 * omega * t;
    const double half_decay = 0.5 * gamma * t;
    if (std::abs(x) < 1.0) {
        const double e = std::exp(-half_decay);
        return {e * std::cos(x), e * 0.5 * t * sinc(x)};
    }
    // Combine the growth of cos/sin with the decay before exponentiating.
    const Complex up = std::exp(kI * x - half_decay);
    const Complex down = std::exp(-kI * x - half_decay);
    return {0.5 * (up + down), (up - down) / (2.0 * kI * omega)};
}

void require_nonnegative_time(double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("time must be non-negative");
    }
}

void require_flat(const SystemParams& params, const char* what) {
    if (params.epsilon != 0.0) {
        throw std::invalid_argument(std::string(what) + ": requires epsilon = 0");
    }
}

}  // namespace

void InitialAmplitudes::validate() const {
    const double norm = std::norm(c1) + std::norm(c2);
    if (std::abs(norm - 1.0) > 1e-12) {
        throw std::invalid_argument("InitialAmplitudes: |c1|^2 + |c2|^2 must equal 1");
    }
}

DensityMatrix2 InitialAmplitudes::density() const {
    return {std::norm(c1), std::norm(c2), c1 * std::conj(c2)};
}

DensityMatrix2 rho_closed_form(const SystemParams& params, const InitialAmplitudes& init, double t) {
    require_nonnegative_time(t);
    const RabiDecomposition rabi = complex_rabi(params);
    const DampedRotation rot = damped_rotation(rabi.omega, params.gamma, t);
    const Complex detuning{params.epsilon, params.gamma};  // eps + i Gamma

    // psi(t) = e^{-i lambda0 t/2} [cos(Omega t/2) - i sin(Omega t/2) M / Omega] psi(0),
    // M = [[eps + i Gamma, V], [V, -(eps + i Gamma)]].
    const Complex a = rot.cos * init.c1 - kI * rot.sin_over_omega * (detuning * init.c1 + params.v * init.c2);
    const Complex b = rot.cos * init.c2 - kI * rot.sin_over_omega * (params.v * init.c1 - detuning * init.c2);
    return {std::norm(a), std::norm(b), a * std::conj(b)};
}

double rho22_spectral_form(const SystemParams& params, double t) {
    require_nonnegative_time(t);
    const RabiDecomposition rabi = complex_rabi(params);
    const double a = std::abs(rabi.omega2) * t;
    const double b = rabi.omega1 * t;
    const double m = a * a + b * b;
    const double v2 = params.v * params.v;
    if (m < 1e-4) {
        // (cosh a - cos b)/(a^2 + b^2) = 1/2 + (a^2 - b^2)/24 + (a^6 + b^6)/(720 m) + ...
        const double ratio = 0.5 + (a * a - b * b) / 24.0 +
                             (m > 0.0 ? (a * a * a * a * a * a + b * b * b * b * b * b) / (720.0 * m) : 0.0);
        return 0.5 * v2 * t * t * std::exp(-params.gamma * t) * ratio;
    }
    const double decay = params.gamma * t;
    const double cosh_damped = 0.5 * (std::exp(a - decay) + std::exp(-a - decay));
    const double cos_damped = std::cos(b) * std::exp(-decay);
    return 0.5 * v2 * t * t * (cosh_damped - cos_damped) / m;
}

double efficiency_closed_form(const SystemParams& params, double t) {
    require_nonnegative_time(t);
    const double g = params.gamma;
    if (g == 0.0) {
        return 0.0;
    }
    const RabiDecomposition rabi = complex_rabi(params);
    const double o1 = rabi.omega1;
    const double o2 = std::abs(rabi.omega2);
    const double mod2 = o1 * o1 + o2 * o2;
    if (std::sqrt(mod2) * t < 0.1) {
        // Near the exceptional point the displayed formula cancels
        // catastrophically; use trace loss of the regular amplitudes.
        const DensityMatrix2 rho = rho_closed_form(params, InitialAmplitudes::donor(), t);
        return 1.0 - rho.rho11 - rho.rho22;
    }
    const DampedHyperbolic hyp = damped_hyperbolic(o2 * t, g * t);
    const double sinh_damped = hyp.sinhc * o2 * t;
    const double decay = std::exp(-g * t);
    const double cos_damped = std::cos(o1 * t) * decay;
    const double sin_damped = std::sin(o1 * t) * decay;
    const double bracket = (g * g + o1 * o1) * (g * hyp.cosh + o2 * sinh_damped) -
                           (g * g - o2 * o2) * (g * cos_damped - o1 * sin_damped);
    return 1.0 - bracket / (g * mod2);
}

double efficiency_flat(const SystemParams& params, double t) {
    require_flat(params, "efficiency_flat");
    require_nonnegative_time(t);
    const double g = params.gamma;
    const double v = std::abs(params.v);
    const double gt = g * t;
    switch (classify_regime(params)) {
        case Regime::ExceptionalPoint:
            return 1.0 - (1.0 + gt + 0.5 * gt * gt) * std::exp(-gt);
        case Regime::Coherent: {
            // 1 - e^{-Gt} (G^2 (1 - cos W t) + W (W + G sin W t)) / W^2, W = Omega1
            const double w = std::sqrt((v - g) * (v + g));
            const double s_half = sinc(0.5 * w * t);
            const double one_minus_cos = 0.5 * t * t * s_half * s_half;  // (1 - cos wt)/w^2
            return 1.0 - std::exp(-gt) * (g * g * one_minus_cos + 1.0 + g * t * sinc(w * t));
        }
        case Regime::Incoherent: {
            // 1 - e^{-Gt} (G^2 (cosh W t - 1) + W (W + G sinh W t)) / W^2, W = Omega2
            const double w = std::sqrt((g - v) * (g + v));
            const double y = w * t;
            // e^{-Gt}(cosh y - 1)/w^2 and e^{-Gt} sinh(y)/w, overflow-safe
            const DampedHyperbolic hyp = damped_hyperbolic(y, gt);
            const double decay = std::exp(-gt);
            double cosh_minus_one;
            if (y < 1.0) {
                const double sh = y < 1e-4 ? 1.0 + y * y / 24.0 : std::sinh(0.5 * y) / (0.5 * y);
                cosh_minus_one = decay * 0.5 * t * t * sh * sh;
            } else {
                cosh_minus_one = (hyp.cosh - decay) / (w * w);
            }
            return 1.0 - (g * g * cosh_minus_one + decay + g * t * hyp.sinhc);
        }
        case Regime::Generic:
            break;
    }
    throw std::logic_error("efficiency_flat: unreachable regime");
}

double efficiency_asymptotic(const SystemParams& params, double t) {
    const double g = params.gamma;
    if (g == 0.0 || params.v == 0.0) {
        return 0.0;
    }
    const RabiDecomposition rabi = complex_rabi(params);
    const double o1 = rabi.omega1;
    const double o2 = std::abs(rabi.omega2);
    const double mod2 = o1 * o1 + o2 * o2;
    const Regime regime = classify_regime(params);
    if (regime == Regime::ExceptionalPoint) {
        const double gt = g * t;
        return 1.0 - 0.5 * gt * gt * std::exp(-gt);
    }
    if (regime == Regime::Coherent) {
        return 1.0 - (g * g + o1 * o1) / (o1 * o1) * std::exp(-g * t);
    }
    // Slowest mode e^{-(Gamma - |Omega2|) t} dominates.
    return 1.0 - (g + o2) * (g * g + o1 * o1) / (2.0 * g * mod2) * std::exp(-(g - o2) * t);
}

Populations ep_populations(double gamma, double t) {
    require_nonnegative_time(t);
    const double half = 0.5 * gamma * t;
    const double decay = std::exp(-gamma * t);
    return {decay * (1.0 + half) * (1.0 + half), decay * half * half};
}

Populations coherent_incoherent_populations(const SystemParams& params, double t) {
    require_flat(params, "coherent_incoherent_populations");
    require_nonnegative_time(t);
    const double g = params.gamma;
    const double v = std::abs(params.v);
    const double half_t = 0.5 * t;
    if (v >= g) {
        const double w = std::sqrt((v - g) * (v + g));
        const double decay = std::exp(-0.5 * g * t);
        const double s = half_t * sinc(w * half_t);  // sin(w t/2) / w
        const double amp1 = decay * (std::cos(w * half_t) + g * s);
        const double amp2 = decay * v * s;
        return {amp1 * amp1, amp2 * amp2};
    }
    const double w = std::sqrt((g - v) * (g + v));
    const DampedHyperbolic hyp = damped_hyperbolic(w * half_t, 0.5 * g * t);
    const double s = half_t * hyp.sinhc;  // e^{-G t/2} sinh(w t/2) / w
    const double amp1 = hyp.cosh + g * s;
    const double amp2 = v * s;
    return {amp1 * amp1, amp2 * amp2};
}

TimeSeries closed_form_series(const SystemParams& params, const InitialAmplitudes& init,
                              const TimeGrid& grid) {
    params.validate();
    init.validate();
    grid.validate();
    TimeSeries series;
    series.grid = grid;
    const std::size_t n = grid.n_records();
    series.reserve(n);
    const double trace0 = init.density().trace();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.record_time(k);
        const DensityMatrix2 rho = rho_closed_form(params, init, t);
        series.push(t, rho, trace0 - rho.trace());
    }
    return series;
}

}  // namespace rcet::analytic
