// analytic.hpp - closed-form noiseless dynamics and transfer efficiency
//
// Every formula here is evaluated in a form that stays finite at the
// exceptional point (Omega -> 0) and for large Omega2 t, where the raw
// hyperbolic functions would overflow.

#pragma once

#include "rcet/model.hpp"
#include "rcet/timeseries.hpp"

namespace rcet::analytic {

// Initial state amplitudes: rho11(0) = |c1|^2, rho22(0) = |c2|^2,
// rho12(0) = c1 conj(c2).
struct InitialAmplitudes {
    Complex c1{1.0, 0.0};
    Complex c2{0.0, 0.0};

    // Throws std::invalid_argument unless |c1|^2 + |c2|^2 = 1 to 1e-12.
    void validate() const;
    DensityMatrix2 density() const;

    static InitialAmplitudes donor() { return {{1.0, 0.0}, {0.0, 0.0}}; }
    static InitialAmplitudes acceptor() { return {{0.0, 0.0}, {1.0, 0.0}}; }
};

struct Populations {
    double rho11{0.0};
    double rho22{0.0};
};

// Full density matrix for an arbitrary pure initial state.
DensityMatrix2 rho_closed_form(const SystemParams& params, const InitialAmplitudes& init, double t);

// rho22(t) = V^2 e^{-Gamma t} (cosh Omega2 t - cos Omega1 t) / (2 |Omega|^2),
// donor start.
double rho22_spectral_form(const SystemParams& params, double t);

// eta(t) = 2 Gamma \int_0^t rho22, donor start. Returns 0 when Gamma = 0.
double efficiency_closed_form(const SystemParams& params, double t);

// Flat gap only (epsilon = 0): the trigonometric, critical and hyperbolic
// branches. Throws std::invalid_argument if epsilon != 0.
double efficiency_flat(const SystemParams& params, double t);

// Leading large-time behaviour of eta(t). For the flat coherent regime, where
// 1 - eta keeps oscillating under an e^{-Gamma t} envelope, this returns the
// cycle average.
double efficiency_asymptotic(const SystemParams& params, double t);

// Exceptional point (epsilon = 0, V = Gamma):
// rho11 = e^{-Gamma t}(1 + Gamma t / 2)^2, rho22 = e^{-Gamma t}(Gamma t / 2)^2.
Populations ep_populations(double gamma, double t);

// Flat gap, V != Gamma: oscillating populations for V > Gamma and monotone
// (hyperbolic) ones for V < Gamma, with Omega0 = |V^2 - Gamma^2|^{1/2}.
// Continuous through V = Gamma. Throws std::invalid_argument if epsilon != 0.
Populations coherent_incoherent_populations(const SystemParams& params, double t);

// Closed-form trajectory sampled on a grid; eta = trace(0) - trace(t).
TimeSeries closed_form_series(const SystemParams& params, const InitialAmplitudes& init,
                              const TimeGrid& grid);

}  // namespace rcet::analytic
