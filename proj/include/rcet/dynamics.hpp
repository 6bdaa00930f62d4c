// dynamics.hpp - numerical propagation of the projected density matrix

#pragma once

#include <cstdint>
#include <functional>

#include "rcet/model.hpp"
#include "rcet/noise.hpp"
#include "rcet/timeseries.hpp"

namespace rcet::dynamics {

// Step-size bound: dt <= kStepFraction * min(2 pi / |Omega|, 1 / Gamma).
inline constexpr double kStepFraction = 0.05;

// Default step for closed-form accuracy near 1e-8 over tens of ps:
// 0.0025 / max(|Omega|, Gamma, |V|, |eps|), never above the step bound.
double default_dt(const SystemParams& params);

// Largest step accepted by propagate_liouville.
double max_dt(const SystemParams& params);

// Classical RK4 on the full complex 2x2 matrix for
// i rho' = [H, rho] - i {W, rho}, H = [[eps/2, V/2], [V/2, -eps/2]], W = Gamma |2><2|.
// eta = 2 Gamma \int rho22 is integrated alongside as an extra ODE component.
// Throws std::invalid_argument for an unphysical init or dt above max_dt.
TimeSeries propagate_liouville(const SystemParams& params, const DensityMatrix2& init,
                               const TimeGrid& grid);

// Same integrator with eps -> eps + (g1 - g2) xi(t), xi held constant over
// each trajectory sample. The trajectory step must divide grid.dt and the
// trajectory must cover the grid; otherwise std::invalid_argument.
TimeSeries propagate_with_noise(const SystemParams& params, const noise::NoiseCouplings& couplings,
                                const noise::NoiseTrajectory& trajectory, const DensityMatrix2& init,
                                const TimeGrid& grid);

struct MonteCarloOptions {
    // 0 selects std::thread::hardware_concurrency().
    unsigned threads{0};
    // Trajectory step = grid.dt / substeps.
    unsigned substeps{1};
    // Trajectories per reduction chunk.
    std::size_t chunk{8};
};

// Mean over n_traj independent trajectories; trajectory i uses
// rng::derive_seed(seed, i). Output is independent of thread count.
// Standard errors are sample SD / sqrt(n_traj).
TimeSeries monte_carlo_average(const SystemParams& params, const noise::NoiseCouplings& couplings,
                               const noise::FluctuatorEnsemble& ensemble, std::size_t n_traj,
                               const TimeGrid& grid, std::uint64_t seed,
                               const DensityMatrix2& init = DensityMatrix2::donor(),
                               const MonteCarloOptions& options = {});

// RK4 for <rho11>' = -R(t)(<rho11> - <rho22>), <rho22>' = R(t)(...) - 2 Gamma <rho22>,
// with eta integrated alongside. rate_fn is sampled at t, t + dt/2, t + dt.
TimeSeries solve_averaged_master(const SystemParams& params, const std::function<double(double)>& rate_fn,
                                 const TimeGrid& grid, double rho11_0 = 1.0, double rho22_0 = 0.0);

// Cumulative trapezoid 2 Gamma \int rho22 over the recorded points.
std::vector<double> efficiency_numeric(const TimeSeries& series, double gamma);

// Replaces series.eta with efficiency_numeric(series, gamma).
void apply_efficiency_numeric(TimeSeries& series, double gamma);

}  // namespace rcet::dynamics
