#include "rcet/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rcet/random.hpp"

namespace rcet::dynamics {

namespace {

constexpr Complex kI{0.0, 1.0};

struct State {
    Complex r11, r12, r21, r22;
    double eta;
};

State axpy(const State& s, double h, const State& k) {
    return {s.r11 + h * k.r11, s.r12 + h * k.r12, s.r21 + h * k.r21, s.r22 + h * k.r22, s.eta + h * k.eta};
}

// delta is half the instantaneous gap; half_v = V/2.
State derivative(const State& s, double delta, double half_v, double gamma) {
    State d;
    d.r11 = -kI * half_v * (s.r21 - s.r12);
    d.r12 = -kI * (2.0 * delta * s.r12 + half_v * (s.r22 - s.r11)) - gamma * s.r12;
    d.r21 = -kI * (-2.0 * delta * s.r21 + half_v * (s.r11 - s.r22)) - gamma * s.r21;
    d.r22 = -kI * half_v * (s.r12 - s.r21) - 2.0 * gamma * s.r22;
    d.eta = 2.0 * gamma * s.r22.real();
    return d;
}

State rk4_step(const State& s, double h, double delta, double half_v, double gamma) {
    const State k1 = derivative(s, delta, half_v, gamma);
    const State k2 = derivative(axpy(s, 0.5 * h, k1), delta, half_v, gamma);
    const State k3 = derivative(axpy(s, 0.5 * h, k2), delta, half_v, gamma);
    const State k4 = derivative(axpy(s, h, k3), delta, half_v, gamma);
    State out;
    const double w = h / 6.0;
    out.r11 = s.r11 + w * (k1.r11 + 2.0 * k2.r11 + 2.0 * k3.r11 + k4.r11);
    out.r12 = s.r12 + w * (k1.r12 + 2.0 * k2.r12 + 2.0 * k3.r12 + k4.r12);
    out.r21 = s.r21 + w * (k1.r21 + 2.0 * k2.r21 + 2.0 * k3.r21 + k4.r21);
    out.r22 = s.r22 + w * (k1.r22 + 2.0 * k2.r22 + 2.0 * k3.r22 + k4.r22);
    out.eta = s.eta + w * (k1.eta + 2.0 * k2.eta + 2.0 * k3.eta + k4.eta);
    return out;
}

DensityMatrix2 project(const State& s) { return {s.r11.real(), s.r22.real(), s.r12}; }

void check_init(const DensityMatrix2& init) {
    if (!std::isfinite(init.rho11) || !std::isfinite(init.rho22) || !std::isfinite(init.rho12.real()) ||
        !std::isfinite(init.rho12.imag()) || !init.is_physical()) {
        throw std::invalid_argument("initial density matrix is not physical");
    }
}

// Runs grid.n_steps steps of substeps RK4 substeps each; delta_at(k, j)
// gives the half-gap for substep j of step k.
template <typename DeltaFn>
TimeSeries integrate(const SystemParams& params, const DensityMatrix2& init, const TimeGrid& grid,
                     std::size_t substeps, DeltaFn&& delta_at) {
    TimeSeries series;
    series.grid = grid;
    series.reserve(grid.n_records());
    State s{init.rho11, init.rho12, std::conj(init.rho12), init.rho22, 0.0};
    const double half_v = 0.5 * params.v;
    const double h = grid.dt / static_cast<double>(substeps);
    series.push(0.0, project(s), 0.0);
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        for (std::size_t j = 0; j < substeps; ++j) {
            s = rk4_step(s, h, delta_at(k, j), half_v, params.gamma);
        }
        if ((k + 1) % grid.stride == 0) {
            series.push(grid.dt * static_cast<double>(k + 1), project(s), s.eta);
        }
    }
    return series;
}

struct Moments {
    double count{0.0};
    std::vector<double> mean;
    std::vector<double> m2;

    explicit Moments(std::size_t n = 0) : mean(n, 0.0), m2(n, 0.0) {}

    void add(std::size_t i, double x) {
        const double delta = x - mean[i];
        mean[i] += delta / count;
        m2[i] += delta * (x - mean[i]);
    }

    // Chan et al. pairwise combination.
    void merge(const Moments& other) {
        if (other.count == 0.0) {
            return;
        }
        if (count == 0.0) {
            *this = other;
            return;
        }
        const double n = count + other.count;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double delta = other.mean[i] - mean[i];
            mean[i] += delta * other.count / n;
            m2[i] += other.m2[i] + delta * delta * count * other.count / n;
        }
        count = n;
    }
};

// Five tracked quantities per record: rho11, rho22, Re rho12, Im rho12, eta.
struct ChunkStats {
    std::vector<Moments> q;

    explicit ChunkStats(std::size_t records) : q(5, Moments(records)) {}

    void add(const TimeSeries& series) {
        for (auto& m : q) {
            m.count += 1.0;
        }
        for (std::size_t i = 0; i < series.size(); ++i) {
            const DensityMatrix2& rho = series.states[i];
            q[0].add(i, rho.rho11);
            q[1].add(i, rho.rho22);
            q[2].add(i, rho.rho12.real());
            q[3].add(i, rho.rho12.imag());
            q[4].add(i, series.eta[i]);
        }
    }

    void merge(const ChunkStats& other) {
        for (std::size_t k = 0; k < q.size(); ++k) {
            q[k].merge(other.q[k]);
        }
    }
};

}  // namespace

double max_dt(const SystemParams& params) {
    const double omega = std::abs(complex_rabi(params).omega);
    const double inf = std::numeric_limits<double>::infinity();
    const double period = omega > 0.0 ? 2.0 * std::numbers::pi / omega : inf;
    const double decay = params.gamma > 0.0 ? 1.0 / params.gamma : inf;
    return kStepFraction * std::min(period, decay);
}

double default_dt(const SystemParams& params) {
    const double omega = std::abs(complex_rabi(params).omega);
    const double scale = std::max({omega, params.gamma, std::abs(params.v), std::abs(params.epsilon)});
    if (scale == 0.0) {
        return 0.01;
    }
    return std::min(0.0025 / scale, max_dt(params));
}

TimeSeries propagate_liouville(const SystemParams& params, const DensityMatrix2& init, const TimeGrid& grid) {
    params.validate();
    grid.validate();
    check_init(init);
    if (grid.dt > max_dt(params) * (1.0 + 1e-12)) {
        throw std::invalid_argument("propagate_liouville: dt exceeds the step-size bound");
    }
    const double delta = 0.5 * params.epsilon;
    return integrate(params, init, grid, 1, [delta](std::size_t, std::size_t) { return delta; });
}

TimeSeries propagate_with_noise(const SystemParams& params, const noise::NoiseCouplings& couplings,
                                const noise::NoiseTrajectory& trajectory, const DensityMatrix2& init,
                                const TimeGrid& grid) {
    params.validate();
    grid.validate();
    check_init(init);
    if (!(trajectory.dt > 0.0) || trajectory.values.size() < 2) {
        throw std::invalid_argument("propagate_with_noise: empty trajectory");
    }
    const double ratio = grid.dt / trajectory.dt;
    const auto m = static_cast<std::size_t>(std::llround(ratio));
    if (m == 0 || std::abs(ratio - static_cast<double>(m)) > 1e-9 * ratio) {
        throw std::invalid_argument("propagate_with_noise: trajectory step must divide the grid step");
    }
    if (trajectory.values.size() < grid.n_steps * m + 1) {
        throw std::invalid_argument("propagate_with_noise: trajectory shorter than the grid");
    }
    const double coupling = couplings.g1 - couplings.g2;
    double peak = 0.0;
    for (const double x : trajectory.values) {
        peak = std::max(peak, std::abs(x));
    }
    const SystemParams worst{std::abs(params.epsilon) + std::abs(coupling) * peak, params.v, params.gamma};
    if (trajectory.dt > max_dt(worst) * (1.0 + 1e-12)) {
        throw std::invalid_argument("propagate_with_noise: trajectory step exceeds the step-size bound");
    }
    const double* xi = trajectory.values.data();
    const double eps = params.epsilon;
    return integrate(params, init, grid, m, [=](std::size_t k, std::size_t j) {
        return 0.5 * (eps + coupling * xi[k * m + j]);
    });
}

TimeSeries monte_carlo_average(const SystemParams& params, const noise::NoiseCouplings& couplings,
                               const noise::FluctuatorEnsemble& ensemble, std::size_t n_traj,
                               const TimeGrid& grid, std::uint64_t seed, const DensityMatrix2& init,
                               const MonteCarloOptions& options) {
    if (n_traj < 2) {
        throw std::invalid_argument("monte_carlo_average: need at least two trajectories");
    }
    if (options.substeps == 0 || options.chunk == 0) {
        throw std::invalid_argument("monte_carlo_average: substeps and chunk must be positive");
    }
    grid.validate();
    const std::size_t records = grid.n_records();
    const std::size_t n_chunks = (n_traj + options.chunk - 1) / options.chunk;
    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_chunks));

    const double traj_dt = grid.dt / static_cast<double>(options.substeps);
    auto run_chunk = [&](std::size_t c) {
        ChunkStats stats(records);
        const std::size_t begin = c * options.chunk;
        const std::size_t end = std::min(n_traj, begin + options.chunk);
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t sub = rng::derive_seed(seed, i);
            const noise::NoiseTrajectory traj = noise::sample_trajectory(ensemble, traj_dt, grid.t_max(), sub);
            stats.add(propagate_with_noise(params, couplings, traj, init, grid));
        }
        return stats;
    };

    // Chunks are folded strictly in index order, so the result does not
    // depend on which worker finished first.
    ChunkStats total(records);
    std::vector<std::optional<ChunkStats>> pending(n_chunks);
    std::size_t cursor = 0;
    std::mutex mutex;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;

    auto worker = [&] {
        try {
            for (std::size_t c = next++; c < n_chunks; c = next++) {
                ChunkStats stats = run_chunk(c);
                std::lock_guard lock(mutex);
                pending[c] = std::move(stats);
                while (cursor < n_chunks && pending[cursor]) {
                    total.merge(*pending[cursor]);
                    pending[cursor].reset();
                    ++cursor;
                }
            }
        } catch (...) {
            std::lock_guard lock(mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = n_chunks;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    TimeSeries series;
    series.grid = grid;
    series.reserve(records);
    const double n = static_cast<double>(n_traj);
    auto se = [n](const Moments& m, std::size_t i) { return std::sqrt(std::max(0.0, m.m2[i]) / (n - 1.0) / n); };
    for (std::size_t i = 0; i < records; ++i) {
        const DensityMatrix2 rho{total.q[0].mean[i], total.q[1].mean[i], {total.q[2].mean[i], total.q[3].mean[i]}};
        series.push(grid.record_time(i), rho, total.q[4].mean[i]);
        series.se_rho11.push_back(se(total.q[0], i));
        series.se_rho22.push_back(se(total.q[1], i));
    }
    return series;
}

TimeSeries solve_averaged_master(const SystemParams& params, const std::function<double(double)>& rate_fn,
                                 const TimeGrid& grid, double rho11_0, double rho22_0) {
    params.validate();
    grid.validate();
    const double g = params.gamma;
    struct Pops {
        double x, y, eta;
    };
    auto f = [g](const Pops& p, double r) {
        const double flow = r * (p.x - p.y);
        return Pops{-flow, flow - 2.0 * g * p.y, 2.0 * g * p.y};
    };
    auto shift = [](const Pops& p, double h, const Pops& k) {
        return Pops{p.x + h * k.x, p.y + h * k.y, p.eta + h * k.eta};
    };
    TimeSeries series;
    series.grid = grid;
    series.reserve(grid.n_records());
    Pops p{rho11_0, rho22_0, 0.0};
    series.push(0.0, {p.x, p.y, {0.0, 0.0}}, 0.0);
    const double h = grid.dt;
    double r_start = rate_fn(0.0);
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double t = h * static_cast<double>(k);
        const double r_mid = rate_fn(t + 0.5 * h);
        const double r_end = rate_fn(h * static_cast<double>(k + 1));
        const Pops k1 = f(p, r_start);
        const Pops k2 = f(shift(p, 0.5 * h, k1), r_mid);
        const Pops k3 = f(shift(p, 0.5 * h, k2), r_mid);
        const Pops k4 = f(shift(p, h, k3), r_end);
        const double w = h / 6.0;
        p.x += w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        p.y += w * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        p.eta += w * (k1.eta + 2.0 * k2.eta + 2.0 * k3.eta + k4.eta);
        r_start = r_end;
        if ((k + 1) % grid.stride == 0) {
            series.push(h * static_cast<double>(k + 1), {p.x, p.y, {0.0, 0.0}}, p.eta);
        }
    }
    return series;
}

std::vector<double> efficiency_numeric(const TimeSeries& series, double gamma) {
    if (!(gamma >= 0.0)) {
        throw std::invalid_argument("efficiency_numeric: gamma must be non-negative");
    }
    std::vector<double> eta(series.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double width = series.t[i] - series.t[i - 1];
        acc += 0.5 * width * (series.states[i - 1].rho22 + series.states[i].rho22);
        eta[i] = 2.0 * gamma * acc;
    }
    return eta;
}

void apply_efficiency_numeric(TimeSeries& series, double gamma) { series.eta = efficiency_numeric(series, gamma); }

}  // namespace rcet::dynamics
