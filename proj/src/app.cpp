#include "rcet/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rcet/analytic.hpp"
#include "rcet/csv.hpp"
#include "rcet/dynamics.hpp"
#include "rcet/random.hpp"
#include "rcet/rates.hpp"

namespace rcet::cli {

namespace fs = std::filesystem;

namespace {

// Parameters pinned by the figure recipes.
constexpr double kGap = 60.0;
constexpr double kGammaM = 5e-5;            // 2 gamma_m = 1e-4 ps^-1
constexpr double kGammaMSlow = 5e-13;       // 2 gamma_m = 1 s^-1
constexpr double kGammaC = 0.5;             // 2 gamma_c = 1 ps^-1

std::string tag(double x) { return csv::format_number(x); }

void require_recipe(const std::string& recipe, const std::vector<std::string>& allowed, const char* command) {
    if (recipe.empty() || std::find(allowed.begin(), allowed.end(), recipe) != allowed.end()) {
        return;
    }
    std::string list;
    for (const auto& r : allowed) {
        list += (list.empty() ? "" : ", ") + r;
    }
    throw std::invalid_argument(std::string(command) + ": unknown recipe '" + recipe + "' (expected " + list + ")");
}

void check_physical(const TimeSeries& series, const std::string& what) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        const DensityMatrix2& rho = series.states[i];
        if (!(rho.rho11 >= -1e-9) || !(rho.rho22 >= -1e-9) || !(rho.trace() <= 1.0 + 1e-9)) {
            throw InvariantViolation(what + ": unphysical populations at t = " + tag(series.t[i]));
        }
    }
}

double conservation_defect(const DensityMatrix2& rho, double eta) { return std::abs(1.0 - rho.trace() - eta); }

void check_conservation(const TimeSeries& series, double tol, const std::string& what) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!(conservation_defect(series.states[i], series.eta[i]) <= tol)) {
            throw InvariantViolation(what + ": rho11 + rho22 + eta deviates from 1 at t = " + tag(series.t[i]));
        }
    }
}

// First time on a uniform scan where f(t) >= level; negative if never.
template <typename F>
double first_crossing(F&& f, double level, double t_max, double step) {
    for (double t = 0.0; t <= t_max + 0.5 * step; t += step) {
        if (f(t) >= level) {
            return t;
        }
    }
    return -1.0;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> x(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return x;
}

void save_json(const fs::path& path, const nlohmann::json& j) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

// ---- analytic ----

fs::path write_populations(const SystemParams& params, double t_max, const fs::path& path) {
    const TimeGrid grid = TimeGrid::from_horizon(0.005, t_max);
    const TimeSeries series = analytic::closed_form_series(params, analytic::InitialAmplitudes::donor(), grid);
    check_physical(series, path.filename().string());
    if (params.gamma > 0.0) {
        check_conservation(series, 1e-9, path.filename().string());
    }
    csv::save(path, series);
    return path;
}

fs::path write_efficiency(const SystemParams& params, double t_max, double step, const fs::path& path) {
    csv::Table table{{"t", "eta", "eta_asymptotic"}, {}};
    const auto n = static_cast<std::size_t>(std::llround(t_max / step));
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = step * static_cast<double>(k);
        table.add_row({t, analytic::efficiency_closed_form(params, t), analytic::efficiency_asymptotic(params, t)});
    }
    csv::save(path, table);
    return path;
}

// ---- rates ----

fs::path write_rate_curves(const SystemParams& params, const noise::NoiseCouplings& couplings,
                           const noise::NoiseBand& band, const noise::NoiseBand& slow_band, double t_max,
                           const fs::path& path) {
    constexpr std::size_t kIntervals = 500;
    const rates::RateCurve exact(params, couplings, band, t_max, kIntervals);
    const rates::RateCurve slow(params, couplings, slow_band, t_max, kIntervals);
    const rates::RateCurve gaussian(params, couplings, band, t_max, kIntervals, rates::Kernel::Gaussian);
    const double ds = couplings.d() * band.sigma;
    const double plateau = ds > 0.0 ? rates::marcus_rate_gamma(params.v, params.epsilon, couplings.d(), band.sigma,
                                                               params.gamma)
                                    : 0.0;
    csv::Table table{{"t", "rate_exact", "rate_exact_slow_cutoff", "rate_gaussian", "rate_asymptotic"}, {}};
    for (std::size_t k = 0; k <= kIntervals; ++k) {
        table.add_row({exact.step() * static_cast<double>(k), exact.nodes()[k], slow.nodes()[k],
                       gaussian.nodes()[k], plateau});
    }
    csv::save(path, table);
    return path;
}

fs::path write_rate_vs_width(const SystemParams& params, const std::vector<double>& gammas, const fs::path& path) {
    csv::Table table;
    table.header.push_back("d_sigma");
    for (const double g : gammas) {
        table.header.push_back("r_gamma_" + tag(g));
    }
    for (int k = 1; k <= 200; ++k) {
        const double ds = static_cast<double>(k);
        std::vector<double> row{ds};
        for (const double g : gammas) {
            row.push_back(rates::marcus_rate_gamma(params.v, params.epsilon, 1.0, ds, g));
        }
        table.add_row(row);
    }
    csv::save(path, table);
    return path;
}

// ---- dynamics ----

struct DynamicsCase {
    SystemParams params;
    noise::NoiseCouplings couplings;
    noise::NoiseBand band;
    std::size_t n_fluctuators;
    std::size_t n_traj;
    std::uint64_t seed;
    double dt;
    double t_max;
};

Paths write_dynamics(const DynamicsCase& c, const fs::path& stem, unsigned threads) {
    const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(0.01 / c.dt)));
    const TimeGrid mc_grid = TimeGrid::from_horizon(c.dt, c.t_max, stride);
    const noise::FluctuatorEnsemble ensemble =
        noise::build_ensemble(c.n_fluctuators, c.band.gamma_m, c.band.gamma_c, c.band.sigma, c.seed);
    dynamics::MonteCarloOptions options;
    options.threads = threads;
    const TimeSeries mc = dynamics::monte_carlo_average(c.params, c.couplings, ensemble, c.n_traj, mc_grid,
                                                        rng::splitmix64(c.seed), DensityMatrix2::donor(), options);

    // Averaged master on records aligned with the Monte Carlo ones.
    const std::size_t sub = 2;
    const TimeGrid master_grid{mc_grid.record_time(1) / sub, (mc_grid.n_records() - 1) * sub, sub};
    const rates::RateCurve curve(c.params, c.couplings, c.band, master_grid.t_max(), 2 * master_grid.n_steps);
    const TimeSeries master =
        dynamics::solve_averaged_master(c.params, [&curve](double t) { return curve(t); }, master_grid);

    const double d = c.couplings.d();
    const double r_gamma = rates::marcus_rate_gamma(c.params.v, c.params.epsilon, d, c.band.sigma, c.params.gamma);
    const rates::RatePair pair = rates::rate_eigenvalues(r_gamma, c.params.gamma);

    check_physical(mc, stem.filename().string() + " (monte carlo)");
    check_physical(master, stem.filename().string() + " (averaged master)");
    if (c.params.gamma > 0.0) {
        check_conservation(mc, 1e-4, stem.filename().string() + " (monte carlo)");
        check_conservation(master, 1e-4, stem.filename().string() + " (averaged master)");
    }

    csv::Table table{{"t", "master_rho11", "master_rho22", "master_eta", "mc_rho11", "mc_rho22", "mc_eta",
                      "mc_se_rho11", "mc_se_rho22", "rate_eq_rho11", "rate_eq_rho22", "rate_eq_eta",
                      "conservation_master", "conservation_mc"},
                     {}};
    double mc_vs_master = 0.0;
    double master_vs_rate = 0.0;
    double mc_vs_rate = 0.0;
    for (std::size_t i = 0; i < mc.size(); ++i) {
        const double t = mc.t[i];
        const auto& a = master.states[i];
        const auto& m = mc.states[i];
        const analytic::Populations r = rates::populations_rate_eq(r_gamma, c.params.gamma, t);
        const double eta_r = rates::efficiency_noise(r_gamma, c.params.gamma, t);
        table.add_row({t, a.rho11, a.rho22, master.eta[i], m.rho11, m.rho22, mc.eta[i], mc.se_rho11[i],
                       mc.se_rho22[i], r.rho11, r.rho22, eta_r, conservation_defect(a, master.eta[i]),
                       conservation_defect(m, mc.eta[i])});
        mc_vs_master = std::max({mc_vs_master, std::abs(m.rho11 - a.rho11), std::abs(m.rho22 - a.rho22)});
        master_vs_rate = std::max({master_vs_rate, std::abs(a.rho11 - r.rho11), std::abs(a.rho22 - r.rho22)});
        mc_vs_rate = std::max({mc_vs_rate, std::abs(m.rho11 - r.rho11), std::abs(m.rho22 - r.rho22)});
    }

    auto crossing = [](const TimeSeries& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.eta[i] >= 0.95) {
                return nlohmann::json(s.t[i]);
            }
        }
        return nlohmann::json(nullptr);
    };
    const double t_rate = first_crossing(
        [&](double t) { return rates::efficiency_noise(r_gamma, c.params.gamma, t); }, 0.95, 1e4, 0.01);
    const double t_noiseless = first_crossing(
        [&](double t) { return analytic::efficiency_closed_form(c.params, t); }, 0.95, 1e4, 0.05);

    nlohmann::json meta;
    meta["system"] = nlohmann::json{{"epsilon", c.params.epsilon}, {"v", c.params.v}, {"gamma", c.params.gamma}};
    meta["noise"] = {{"g1", c.couplings.g1}, {"g2", c.couplings.g2}, {"d_sigma", d * c.band.sigma},
                     {"gamma_m", c.band.gamma_m}, {"gamma_c", c.band.gamma_c}, {"n_fluctuators", c.n_fluctuators}};
    meta["run"] = {{"dt", mc_grid.dt}, {"t_max", mc_grid.t_max()}, {"n_trajectories", c.n_traj}, {"seed", c.seed}};
    meta["rates"] = {{"r_gamma", r_gamma}, {"r1", pair.r1}, {"r2", pair.r2}};
    meta["max_abs_difference"] = {{"mc_vs_master", mc_vs_master},
                                  {"master_vs_rate_eq", master_vs_rate},
                                  {"mc_vs_rate_eq", mc_vs_rate}};
    meta["t_eta_0_95"] = {{"monte_carlo", crossing(mc)},
                          {"averaged_master", crossing(master)},
                          {"rate_eq", t_rate >= 0.0 ? nlohmann::json(t_rate) : nlohmann::json(nullptr)},
                          {"noiseless", t_noiseless >= 0.0 ? nlohmann::json(t_noiseless) : nlohmann::json(nullptr)}};

    fs::path csv_path = stem;
    csv_path += ".csv";
    fs::path json_path = stem;
    json_path += ".json";
    csv::save(csv_path, table);
    save_json(json_path, meta);
    return {csv_path, json_path};
}

// ---- sweep ----

double sweep_value(const RunConfig& config, const SweepSpec& spec, const std::map<std::string, double>& point) {
    SystemParams params = config.system;
    double ds = config.noise.couplings().d() * config.noise.sigma;
    for (const auto& [name, value] : point) {
        if (name == "epsilon") {
            params.epsilon = value;
        } else if (name == "v") {
            params.v = value;
        } else if (name == "gamma") {
            params.gamma = value;
        } else {
            ds = value;
        }
    }
    params.validate();
    if (spec.quantity == "eta") {
        return analytic::efficiency_closed_form(params, spec.time);
    }
    const double rate = rates::marcus_rate_gamma(params.v, params.epsilon, 1.0, ds, params.gamma);
    if (spec.quantity == "rate") {
        return rate;
    }
    return rates::efficiency_noise(rate, params.gamma, spec.time);
}

}  // namespace

SweepAxis SweepAxis::parse(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ':')) {
        parts.push_back(part);
    }
    if (parts.size() != 4) {
        throw ConfigError("sweep: axis must look like name:lo:hi:n, got '" + spec + "'");
    }
    SweepAxis axis;
    axis.name = parts[0];
    if (axis.name != "epsilon" && axis.name != "v" && axis.name != "gamma" && axis.name != "d_sigma") {
        throw ConfigError("sweep: unknown axis '" + axis.name + "' (expected epsilon, v, gamma or d_sigma)");
    }
    auto whole = [&spec](const std::string& text, auto convert) {
        std::size_t used = 0;
        const auto value = convert(text, &used);
        if (used != text.size()) {
            throw ConfigError("sweep: malformed numbers in axis '" + spec + "'");
        }
        return value;
    };
    try {
        axis.lo = whole(parts[1], [](const std::string& t, std::size_t* u) { return std::stod(t, u); });
        axis.hi = whole(parts[2], [](const std::string& t, std::size_t* u) { return std::stod(t, u); });
        const long long n = whole(parts[3], [](const std::string& t, std::size_t* u) { return std::stoll(t, u); });
        if (n < 1) {
            throw ConfigError("sweep: axis '" + axis.name + "' needs at least one point");
        }
        axis.n = static_cast<std::size_t>(n);
    } catch (const std::logic_error&) {
        throw ConfigError("sweep: malformed numbers in axis '" + spec + "'");
    }
    if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi)) {
        throw ConfigError("sweep: axis bounds must be finite");
    }
    return axis;
}

double SweepAxis::at(std::size_t i) const {
    if (n == 1) {
        return lo;
    }
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

const std::vector<std::string>& analytic_recipes() {
    static const std::vector<std::string> r{"fig2", "fig3", "fig4"};
    return r;
}
const std::vector<std::string>& rates_recipes() {
    static const std::vector<std::string> r{"fig5", "fig7"};
    return r;
}
const std::vector<std::string>& noise_recipes() {
    static const std::vector<std::string> r{"fig6"};
    return r;
}
const std::vector<std::string>& dynamics_recipes() {
    static const std::vector<std::string> r{"fig8"};
    return r;
}

Paths cmd_analytic(const RunConfig& config, const std::string& recipe, const fs::path& out) {
    require_recipe(recipe, analytic_recipes(), "analytic");
    Paths written;
    if (recipe == "fig2") {
        for (const double g : {1.0, 5.0}) {
            for (const double v : {10.0, 20.0}) {
                const SystemParams p{kGap, v, g};
                const std::string name = "g" + tag(g) + "_v" + tag(v) + ".csv";
                written.push_back(write_populations(p, 10.0, out / ("fig2_populations_" + name)));
                written.push_back(write_efficiency(p, 150.0, 0.1, out / ("fig2_efficiency_" + name)));
            }
        }
    } else if (recipe == "fig3") {
        const std::pair<double, double> cases[] = {{1.0, 5.0}, {1.0, 10.0}, {5.0, 10.0}, {5.0, 5.0}};
        for (const auto& [g, v] : cases) {
            const SystemParams p{0.0, v, g};
            const std::string name =
                "fig3_populations_g" + tag(g) + "_v" + tag(v) + "_" + std::string(to_string(classify_regime(p))) + ".csv";
            written.push_back(write_populations(p, 5.0, out / name));
        }
    } else if (recipe == "fig4") {
        const std::pair<double, double> cases[] = {{20.0, 0.0}, {10.0, 0.0}, {5.0, 0.0},
                                                   {2.5, 20.0}, {2.5, 0.0},  {2.5, 10.0}};
        for (const auto& [v, eps] : cases) {
            const SystemParams p{eps, v, 5.0};
            written.push_back(
                write_efficiency(p, 5.0, 0.01, out / ("fig4_efficiency_v" + tag(v) + "_eps" + tag(eps) + ".csv")));
        }
    } else {
        config.system.validate();
        written.push_back(write_populations(config.system, config.run.t_max, out / "analytic_populations.csv"));
        written.push_back(write_efficiency(config.system, config.run.t_max, config.run.t_max / 1000.0,
                                           out / "analytic_efficiency.csv"));
    }
    return written;
}

Paths cmd_noise(const RunConfig& config, const std::string& recipe, const fs::path& out, std::size_t empirical) {
    require_recipe(recipe, noise_recipes(), "noise");
    noise::NoiseBand band = config.noise.band();
    std::string prefix = "noise_";
    if (recipe == "fig6") {
        band = {kGammaM, kGammaC, 1.0};
        prefix = "fig6_";
    }
    band.validate();
    Paths written;

    csv::Table spectrum{{"f", "omega", "s_exact", "s_asymptotic", "branch", "s_one_over_f"}, {}};
    for (const double w : log_grid(2.0 * band.gamma_m / 10.0, 200.0 * band.gamma_c, 400)) {
        const noise::SpectralBranch branch = noise::spectral_asymptotics(band, w);
        const double one_over_f = band.sigma * band.sigma * band.log_weight() / (2.0 * w);
        spectrum.add_row({csv::format_number(w / (2.0 * std::numbers::pi)), csv::format_number(w),
                          csv::format_number(noise::spectral_density(band, w)), csv::format_number(branch.value),
                          std::string(noise::to_string(branch.regime)), csv::format_number(one_over_f)});
    }
    written.push_back(out / (prefix + "spectrum.csv"));
    csv::save(written.back(), spectrum);

    std::vector<double> taus{0.0};
    for (const double t : log_grid(0.01, 100.0, 41)) {
        taus.push_back(t);
    }
    csv::Table corr;
    corr.header = {"tau", "chi_exact"};
    if (empirical > 0) {
        if (empirical < 2) {
            throw std::invalid_argument("noise: --empirical needs at least 2 trajectories");
        }
        constexpr double kDt = 0.01;
        constexpr double kHorizon = 200.0;
        const noise::FluctuatorEnsemble ensemble = noise::build_ensemble(
            config.noise.n_fluctuators, band.gamma_m, band.gamma_c, band.sigma, config.run.seed);
        std::vector<noise::NoiseTrajectory> trajectories;
        trajectories.reserve(empirical);
        for (std::size_t i = 0; i < empirical; ++i) {
            trajectories.push_back(noise::sample_trajectory(ensemble, kDt, kHorizon,
                                                            rng::derive_seed(rng::splitmix64(config.run.seed), i)));
        }
        std::vector<std::size_t> lags;
        for (const double t : taus) {
            lags.push_back(static_cast<std::size_t>(std::llround(t / kDt)));
        }
        const noise::CorrelationEstimate est = noise::empirical_correlation(trajectories, lags);
        corr.header = {"tau", "chi_exact", "chi_empirical", "std_error"};
        for (std::size_t i = 0; i < lags.size(); ++i) {
            corr.add_row(std::vector<double>{est.tau[i], noise::correlation_analytic(band, est.tau[i]), est.mean[i],
                                             est.std_error[i]});
        }
    } else {
        for (const double t : taus) {
            corr.add_row(std::vector<double>{t, noise::correlation_analytic(band, t)});
        }
    }
    written.push_back(out / (prefix + "correlation.csv"));
    csv::save(written.back(), corr);
    return written;
}

Paths cmd_rates(const RunConfig& config, const std::string& recipe, const fs::path& out) {
    require_recipe(recipe, rates_recipes(), "rates");
    Paths written;
    if (recipe == "fig5") {
        const SystemParams p{kGap, 20.0, 0.0};
        const noise::NoiseCouplings couplings{60.0, 0.0};
        const noise::NoiseBand band{kGammaM, kGammaC, 1.0};
        const noise::NoiseBand slow{kGammaMSlow, kGammaC, 1.0};
        written.push_back(write_rate_curves(p, couplings, band, slow, 1.0, out / "fig5_rate.csv"));

        const TimeGrid grid = TimeGrid::from_horizon(0.001, 3.0, 10);
        const rates::RateCurve curve(p, couplings, band, grid.t_max(), 2 * grid.n_steps);
        const TimeSeries pops = dynamics::solve_averaged_master(p, [&curve](double t) { return curve(t); }, grid);
        check_physical(pops, "fig5 populations");
        written.push_back(out / "fig5_populations.csv");
        csv::save(written.back(), pops);
    } else if (recipe == "fig7") {
        written.push_back(write_rate_vs_width({kGap, 20.0, 0.0}, {0.0, 1.0, 5.0, 10.0}, out / "fig7_rate_vs_width.csv"));
    } else {
        const noise::NoiseBand band = config.noise.band();
        band.validate();
        noise::NoiseBand slow = band;
        slow.gamma_m = std::min(kGammaMSlow, 0.5 * band.gamma_m);
        written.push_back(write_rate_curves(config.system, config.noise.couplings(), band, slow,
                                            std::min(config.run.t_max, 5.0), out / "rates_rate.csv"));
        written.push_back(write_rate_vs_width(config.system, {0.0, config.system.gamma}, out / "rates_vs_width.csv"));
    }
    return written;
}

Paths cmd_dynamics(const RunConfig& config, const std::string& recipe, const fs::path& out, unsigned threads) {
    require_recipe(recipe, dynamics_recipes(), "dynamics");
    Paths written;
    auto append = [&written](const Paths& p) { written.insert(written.end(), p.begin(), p.end()); };
    if (recipe == "fig8") {
        const std::pair<double, double> cases[] = {{20.0, 60.0}, {40.0, 60.0}, {20.0, 30.0}, {20.0, 120.0}, {10.0, 60.0}};
        for (const auto& [v, ds] : cases) {
            const DynamicsCase c{{kGap, v, 1.0},
                                 {ds, 0.0},
                                 {kGammaM, kGammaC, 1.0},
                                 config.noise.n_fluctuators,
                                 config.run.n_trajectories,
                                 config.run.seed,
                                 config.run.dt,
                                 10.0};
            append(write_dynamics(c, out / ("fig8_v" + tag(v) + "_ds" + tag(ds)), threads));
        }
    } else {
        const DynamicsCase c{config.system,
                             config.noise.couplings(),
                             config.noise.band(),
                             config.noise.n_fluctuators,
                             config.run.n_trajectories,
                             config.run.seed,
                             config.run.dt,
                             config.run.t_max};
        append(write_dynamics(c, out / "dynamics", threads));
    }
    return written;
}

Paths cmd_sweep(const RunConfig& config, const SweepSpec& spec, const fs::path& out) {
    if (spec.axes.empty() || spec.axes.size() > 2) {
        throw ConfigError("sweep: give one or two --axis specifications");
    }
    if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name) {
        throw ConfigError("sweep: axes must differ");
    }
    if (spec.quantity != "eta" && spec.quantity != "eta_noise" && spec.quantity != "rate") {
        throw ConfigError("sweep: quantity must be eta, eta_noise or rate");
    }
    if (spec.quantity == "eta") {
        for (const auto& axis : spec.axes) {
            if (axis.name == "d_sigma") {
                throw ConfigError("sweep: the d_sigma axis needs quantity eta_noise or rate");
            }
        }
    }
    if (!(spec.time >= 0.0)) {
        throw ConfigError("sweep: --time must be non-negative");
    }
    std::size_t total = 1;
    for (const auto& axis : spec.axes) {
        if (axis.n > kMaxSweepPoints) {
            throw ConfigError("sweep: grid exceeds " + std::to_string(kMaxSweepPoints) + " points");
        }
        total *= axis.n;
    }
    if (total > kMaxSweepPoints) {
        throw ConfigError("sweep: grid exceeds " + std::to_string(kMaxSweepPoints) + " points");
    }
    csv::Table table;
    for (const auto& axis : spec.axes) {
        table.header.push_back(axis.name);
    }
    table.header.push_back(spec.quantity);
    const SweepAxis& a = spec.axes[0];
    const SweepAxis b = spec.axes.size() == 2 ? spec.axes[1] : SweepAxis{};
    for (std::size_t i = 0; i < a.n; ++i) {
        for (std::size_t j = 0; j < (spec.axes.size() == 2 ? b.n : 1); ++j) {
            std::map<std::string, double> point{{a.name, a.at(i)}};
            std::vector<double> row{a.at(i)};
            if (spec.axes.size() == 2) {
                point[b.name] = b.at(j);
                row.push_back(b.at(j));
            }
            row.push_back(sweep_value(config, spec, point));
            table.add_row(row);
        }
    }
    const fs::path path = out / "sweep.csv";
    csv::save(path, table);
    return {path};
}

Paths cmd_figure(const RunConfig& config, const std::string& recipe, const fs::path& out, unsigned threads) {
    auto in = [&recipe](const std::vector<std::string>& list) {
        return std::find(list.begin(), list.end(), recipe) != list.end();
    };
    if (recipe == "all") {
        Paths all;
        for (const char* r : {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"}) {
            const Paths p = cmd_figure(config, r, out, threads);
            all.insert(all.end(), p.begin(), p.end());
        }
        return all;
    }
    if (in(analytic_recipes())) {
        return cmd_analytic(config, recipe, out);
    }
    if (in(noise_recipes())) {
        return cmd_noise(config, recipe, out);
    }
    if (in(rates_recipes())) {
        return cmd_rates(config, recipe, out);
    }
    if (in(dynamics_recipes())) {
        return cmd_dynamics(config, recipe, out, threads);
    }
    throw std::invalid_argument("figure: unknown recipe '" + recipe + "' (expected fig2..fig8 or all)");
}

unsigned thread_budget() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RC_ETSIM_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) {
            return std::min<unsigned>(hw, static_cast<unsigned>(cap));
        }
    }
    return hw;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"rc-etsim: noise-assisted electron transfer in a donor/acceptor/sink model"};
    app.require_subcommand(1);

    std::string config_path;
    std::string recipe;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t empirical = 0;
    std::vector<std::string> axes;
    SweepSpec spec;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--recipe", recipe, "figure recipe name");
        sub->add_option("--out", out_dir, "output directory (default: output.path)");
        sub->add_option("--seed", seed, "override run.seed");
    };
    CLI::App* analytic_cmd = app.add_subcommand("analytic", "closed-form populations and efficiency");
    CLI::App* noise_cmd = app.add_subcommand("noise", "noise spectrum and correlation function");
    CLI::App* rates_cmd = app.add_subcommand("rates", "time-dependent and asymptotic transfer rates");
    CLI::App* dynamics_cmd = app.add_subcommand("dynamics", "Monte Carlo and averaged master-equation runs");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep of efficiency or rate");
    CLI::App* figure_cmd = app.add_subcommand("figure", "run a figure recipe (fig2..fig8, all)");
    for (CLI::App* sub : {analytic_cmd, noise_cmd, rates_cmd, dynamics_cmd, sweep_cmd, figure_cmd}) {
        common(sub);
    }
    noise_cmd->add_option("--empirical", empirical, "add a sampled correlation table from N trajectories");
    sweep_cmd->add_option("--axis", axes, "name:lo:hi:n with name in {epsilon, v, gamma, d_sigma}")->required();
    sweep_cmd->add_option("--quantity", spec.quantity, "eta, eta_noise or rate");
    sweep_cmd->add_option("--time", spec.time, "evaluation time for eta and eta_noise (ps)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kConfigError;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        CLI::App* sub = app.get_subcommands().front();
        if (sub->count("--seed") > 0) {
            config.run.seed = seed;
        }
        const fs::path out = out_dir.empty() ? fs::path(config.output.path) : fs::path(out_dir);
        const unsigned threads = thread_budget();
        Paths written;
        if (sub == analytic_cmd) {
            written = cmd_analytic(config, recipe, out);
        } else if (sub == noise_cmd) {
            written = cmd_noise(config, recipe, out, empirical);
        } else if (sub == rates_cmd) {
            written = cmd_rates(config, recipe, out);
        } else if (sub == dynamics_cmd) {
            written = cmd_dynamics(config, recipe, out, threads);
        } else if (sub == sweep_cmd) {
            for (const auto& a : axes) {
                spec.axes.push_back(SweepAxis::parse(a));
            }
            written = cmd_sweep(config, spec, out);
        } else {
            if (recipe.empty()) {
                throw std::invalid_argument("figure: --recipe is required");
            }
            written = cmd_figure(config, recipe, out, threads);
        }
        for (const auto& p : written) {
            std::cout << p.string() << '\n';
        }
        return kSuccess;
    } catch (const InvariantViolation& e) {
        std::cerr << "rc-etsim: invariant violated: " << e.what() << '\n';
        return kInvariantViolation;
    } catch (const std::overflow_error& e) {
        std::cerr << "rc-etsim: numerical failure: " << e.what() << '\n';
        return kInvariantViolation;
    } catch (const std::exception& e) {
        std::cerr << "rc-etsim: " << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace rcet::cli
