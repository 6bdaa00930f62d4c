#include <doctest.h>

#include <boost/math/tools/minima.hpp>

#include "oracles.hpp"
#include "rcet/noise.hpp"
#include "rcet/random.hpp"
#include "rcet/rates.hpp"

using namespace rcet;
using namespace rcet::rates;
using noise::NoiseBand;
using noise::NoiseCouplings;

namespace {

const NoiseBand kDefault{5e-5, 0.5, 1.0};

// (D^2 / 2) \int_0^t \int_0^t chi(|a - b|) db da, inner integral split at the kink.
double theta_oracle(double t, double d, const NoiseBand& band) {
    auto inner = [&](double a) {
        auto f = [&](double b) { return noise::correlation_analytic(band, std::abs(a - b)); };
        return oracle::integrate(f, 0.0, a, 1e-14, 10) + oracle::integrate(f, a, t, 1e-14, 10);
    };
    return 0.5 * d * d * oracle::integrate(inner, 0.0, t, 1e-13, 10);
}

// (V^2/2) \int_0^t e^{-Gamma tau} cos(eps tau) e^{-Theta(tau)} dtau on panels of one period.
double rate_oracle(const SystemParams& p, double d, const NoiseBand& band, double t, Kernel kernel) {
    auto f = [&](double tau) {
        return std::exp(-p.gamma * tau) * std::cos(p.epsilon * tau) * generating_functional(tau, d, band, kernel);
    };
    const double panel = p.epsilon != 0.0 ? 2.0 * M_PI / std::abs(p.epsilon) : t;
    double sum = 0.0;
    for (double a = 0.0; a < t; a += panel) {
        sum += oracle::integrate(f, a, std::min(t, a + panel), 1e-14, 10);
    }
    return 0.5 * p.v * p.v * sum;
}

double rabi_rho11(double v, double eps, double t) {
    const double w = std::hypot(v, eps);
    const double s = std::sin(0.5 * w * t);
    return 1.0 - v * v / (w * w) * s * s;
}

}  // namespace

TEST_CASE("theta: closed form against the double integral") {
    CHECK(theta(0.0, 60, kDefault) == 0.0);
    CHECK(theta(3.0, 0.0, kDefault) == 0.0);
    for (const double t : {0.01, 0.1, 0.7, 5.0}) {
        CAPTURE(t);
        const double exact = theta_oracle(t, 60.0, kDefault);
        CHECK(std::abs(theta(t, 60.0, kDefault) - exact) <= 1e-8 * std::max(1.0, exact));
    }
    const NoiseBand fast{0.5, 50.0, 2.0};
    for (const double t : {0.05, 1.0, 4.0}) {
        const double exact = theta_oracle(t, 3.0, fast);
        CHECK(std::abs(theta(t, 3.0, fast) - exact) <= 1e-8 * std::max(1.0, exact));
    }
    double prev = 0.0;
    for (double t = 1e-6; t < 1e5; t *= 1.4) {
        const double th = theta(t, 60.0, kDefault);
        CHECK(th >= prev);
        prev = th;
    }
    for (const double t : {1e-6, 1e-4, 1e-3}) {
        CHECK(theta(t, 60.0, kDefault) == doctest::Approx(0.5 * 3600.0 * t * t).epsilon(20 * t));
    }
    CHECK_THROWS_AS(theta(-1.0, 1.0, kDefault), std::invalid_argument);
}

TEST_CASE("generating functional") {
    CHECK(generating_functional(0.0, 60, kDefault) == 1.0);
    for (const double t : {0.0, 0.5, 50.0}) {
        CHECK(generating_functional(t, 0.0, kDefault) == 1.0);
        CHECK(generating_functional(t, 0.0, kDefault, Kernel::Gaussian) == 1.0);
    }
    CHECK(generating_functional(0.02, 60, kDefault, Kernel::Gaussian) ==
          doctest::Approx(std::exp(-0.5 * 1.2 * 1.2)).epsilon(1e-14));
    // Gaussian kernel freezes chi at chi(0), so it decays faster
    for (const double t : {0.01, 0.1, 1.0}) {
        CHECK(generating_functional(t, 5.0, kDefault) >= generating_functional(t, 5.0, kDefault, Kernel::Gaussian));
    }
}

TEST_CASE("generating functional against sampled phase averages") {
    const NoiseBand band{0.5, 5.0, 1.0};
    const noise::FluctuatorEnsemble e = noise::build_ensemble(1000, band.gamma_m, band.gamma_c, band.sigma, 17);
    const double d = 3.0;
    const double dt = 1e-3;
    const std::vector<double> times{0.25, 0.5, 1.0};
    const int n = 10000;
    std::vector<double> sum(times.size(), 0.0);
    std::vector<double> sum2(times.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const noise::NoiseTrajectory tr = noise::sample_trajectory(e, dt, 1.0, rng::derive_seed(5, i));
        double kappa = 0.0;
        std::size_t next = 0;
        for (std::size_t k = 0; k + 1 < tr.values.size() && next < times.size(); ++k) {
            kappa -= d * tr.values[k] * dt;
            if (std::abs((k + 1) * dt - times[next]) < 0.5 * dt) {
                const double c = std::cos(kappa);
                sum[next] += c;
                sum2[next] += c * c;
                ++next;
            }
        }
    }
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double mean = sum[j] / n;
        const double se = std::sqrt((sum2[j] / n - mean * mean) / (n - 1));
        CAPTURE(times[j]);
        CHECK(std::abs(mean - generating_functional(times[j], d, e.band)) < 3.0 * se);
    }
}

TEST_CASE("time-dependent rate") {
    const SystemParams p{60, 20, 1};
    const NoiseCouplings c = NoiseCouplings::differential(60);
    CHECK(rate_r_of_t(p, c, kDefault, 0.0) == 0.0);
    for (const double t : {0.01, 0.05, 0.3, 2.0}) {
        for (const Kernel k : {Kernel::Exact, Kernel::Gaussian}) {
            CHECK(std::abs(rate_r_of_t(p, c, kDefault, t, k) - rate_oracle(p, 60, kDefault, t, k)) < 1e-8 * 400);
        }
    }
    // derivative is the integrand
    for (const double t : {0.003, 0.02, 0.1}) {
        const double h = 1e-5;
        const double fd = (rate_r_of_t(p, c, kDefault, t + h) - rate_r_of_t(p, c, kDefault, t - h)) / (2 * h);
        CHECK(std::abs(fd - rate_r_derivative(p, c, kDefault, t)) < 1e-5 * 200);
    }
    // symmetric-interval form with V^2 / 4 over [-t, t]
    const SystemParams p0{60, 20, 0};
    const double t = 0.4;
    const auto g = [&](double tau) {
        return std::cos(60 * tau) * generating_functional(std::abs(tau), 60, kDefault);
    };
    double sym = 0.0;
    for (double a = -t; a < t - 1e-12; a += 0.05) {
        sym += oracle::integrate(g, a, std::min(t, a + 0.05), 1e-14, 10);
    }
    CHECK(std::abs(100.0 * sym - rate_r_of_t(p0, c, kDefault, t)) < 1e-8 * 400);
    CHECK(rate_r_of_t(p, NoiseCouplings{30, 30}, kDefault, 0.5) == doctest::Approx(rate_r_of_t(
                                                                       p, NoiseCouplings{}, kDefault, 0.5)));
}

TEST_CASE("rate plateau and the Marcus limits") {
    const SystemParams p{60, 20, 0};
    const NoiseCouplings c = NoiseCouplings::differential(60);
    const double marcus = marcus_rate(20, 60, 60, 1);
    const double plateau = rate_r_of_t(p, c, kDefault, 5.0);
    CHECK(oracle::rel_err(plateau, marcus) < 0.05);
    CHECK(oracle::rel_err(rate_r_of_t(p, c, kDefault, 5.0, Kernel::Gaussian), marcus) < 1e-8);
    const NoiseBand slow{5e-13, 0.5, 1.0};
    CHECK(oracle::rel_err(rate_r_of_t(p, c, slow, 5.0), plateau) < 0.05);
    const SystemParams pg{60, 20, 1};
    CHECK(oracle::rel_err(rate_r_of_t(pg, c, kDefault, 5.0, Kernel::Gaussian), marcus_rate_gamma(20, 60, 60, 1, 1)) <
          1e-8);
    CHECK(oracle::rel_err(rate_r_of_t(pg, c, kDefault, 5.0), marcus_rate_gamma(20, 60, 60, 1, 1)) < 0.05);
}

TEST_CASE("Marcus rate") {
    CHECK(marcus_rate(20, 60, 60, 1) == doctest::Approx(100.0 * std::sqrt(2 * M_PI) / 60.0 * std::exp(-0.5)));
    CHECK(marcus_rate(20, 60, 60, 1) == doctest::Approx(2.534).epsilon(2e-4));
    CHECK(marcus_rate(20, -60, 60, 1) == marcus_rate(20, 60, 60, 1));
    CHECK(marcus_rate(20, 60, 30, 2) == marcus_rate(20, 60, 60, 1));
    for (double e = -100; e <= 100; e += 7) {
        CHECK(marcus_rate(20, e, 60, 1) <= marcus_rate(20, 0, 60, 1));
    }
    const auto best = boost::math::tools::brent_find_minima([](double w) { return -marcus_rate(20, 60, w, 1); }, 1.0,
                                                            500.0, 50);
    CHECK(best.first == doctest::Approx(60.0).epsilon(1e-6));
    CHECK_THROWS_AS(marcus_rate(20, 60, 0, 1), std::domain_error);
    CHECK_THROWS_AS(marcus_rate(20, 60, 60, 0), std::domain_error);
}

TEST_CASE("Marcus rate in physical variables") {
    for (const double d : {10.0, 60.0}) {
        for (const double sigma : {0.5, 1.0, 3.0}) {
            const double kt = 2.5;
            const double p0 = sigma * sigma / kt;
            const double lambda = d * d * p0 / 2;
            CHECK(oracle::rel_err(marcus_rate_physical(10, 60, lambda, kt), marcus_rate(20, 60, d, sigma)) < 1e-12);
        }
    }
    const double lam = 3.0;
    const double kt = 0.7;
    const double base = marcus_rate_physical(1.0, 0.0, lam, kt);
    CHECK(marcus_rate_physical(1.0, 0.0, lam, 2 * kt) == doctest::Approx(base / std::sqrt(2.0)).epsilon(1e-14));
    const double de = 2.0;
    const double log_ratio = std::log(marcus_rate_physical(1.0, de, lam, kt) / base);
    const double log_ratio2 = std::log(marcus_rate_physical(1.0, de, lam, 2 * kt) / (base / std::sqrt(2.0)));
    CHECK(log_ratio2 == doctest::Approx(log_ratio / 2).epsilon(1e-12));
    CHECK(marcus_rate_physical(1.0, std::sqrt(4 * lam * kt * std::log(2.0)), lam, kt) ==
          doctest::Approx(base / 2).epsilon(1e-14));
    CHECK_THROWS_AS(marcus_rate_physical(1.0, 0.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(marcus_rate_physical(1.0, 0.0, 1.0, -1.0), std::domain_error);
}

TEST_CASE("Marcus rate with sink broadening") {
    for (const double w : {10.0, 30.0, 60.0, 150.0}) {
        CHECK(oracle::rel_err(marcus_rate_gamma(20, 60, w, 1, 0), marcus_rate(20, 60, w, 1)) < 1e-10);
    }
    {
        const double w = 60.0;
        const double gamma = 5.0;
        auto f = [&](double tau) { return std::exp(-gamma * tau) * std::cos(60 * tau) * std::exp(-0.5 * w * w * tau * tau); };
        double sum = 0.0;
        for (double a = 0.0; a < 0.2; a += 0.01) {
            sum += oracle::integrate(f, a, a + 0.01, 1e-14, 10);
        }
        CHECK(std::abs(marcus_rate_gamma(20, 60, w, 1, gamma) - 200.0 * sum) < 1e-8);
    }
    for (const double w : {20.0, 60.0, 120.0}) {
        for (const double gamma : {0.0, 1.0, 5.0, 10.0}) {
            const Complex pair = marcus_rate_gamma_pair(20, 60, w, 1, gamma);
            CHECK(std::abs(pair.imag()) < 1e-12 * std::abs(pair.real()));
            CHECK(oracle::rel_err(pair.real(), marcus_rate_gamma(20, 60, w, 1, gamma)) < 1e-10);
        }
    }
    // Sink broadening lowers the rate only once the noise width is comparable to
    // the gap; below that the Lorentzian tail adds rate. For Gamma -> 0 the sign
    // of dR/dGamma flips where 2 x F(x) = 1 (F = Dawson), x = eps / (sqrt(2) D sigma),
    // i.e. D sigma = 45.909 at eps = 60; on the grid {0, 1, 5, 10} at 45.721.
    for (double w = 46.0; w <= 200.0; w += 2.0) {
        double prev = marcus_rate_gamma(20, 60, w, 1, 0);
        for (const double gamma : {1.0, 5.0, 10.0}) {
            const double r = marcus_rate_gamma(20, 60, w, 1, gamma);
            CHECK(r < prev);
            prev = r;
        }
    }
    for (double w = 1.0; w <= 45.7; w += 2.0) {
        CHECK(marcus_rate_gamma(20, 60, w, 1, 1) > marcus_rate_gamma(20, 60, w, 1, 0));
    }
    const auto slope0 = [](double w) { return marcus_rate_gamma(20, 60, w, 1, 1e-6) - marcus_rate_gamma(20, 60, w, 1, 0); };
    CHECK(slope0(45.90) > 0.0);
    CHECK(slope0(45.92) < 0.0);
    CHECK(marcus_rate_gamma(20, 60, 1, 1, 1) > 0.0);
    CHECK_THROWS_AS(marcus_rate_gamma_pair(20, 60, 1, 1, 1), std::overflow_error);
    CHECK_THROWS_AS(marcus_rate_gamma(20, 60, 0, 1, 1), std::domain_error);
    CHECK_THROWS_AS(marcus_rate_gamma(20, 60, 1, 1, -1), std::invalid_argument);
}

TEST_CASE("rate eigenvalues") {
    const RatePair z = rate_eigenvalues(0.0, 3.0);
    CHECK(z.r1 == 6.0);
    CHECK(z.r2 == 0.0);
    const RatePair eq = rate_eigenvalues(2.0, 2.0);
    CHECK(eq.r1 == doctest::Approx(2.0 * (2 + std::sqrt(2.0))).epsilon(1e-15));
    CHECK(eq.r2 == doctest::Approx(2.0 * (2 - std::sqrt(2.0))).epsilon(1e-14));
    for (const double r : {1e-12, 1e-3, 0.7, 2.5, 40.0}) {
        for (const double g : {1e-9, 0.1, 1.0, 5.0}) {
            const RatePair rp = rate_eigenvalues(r, g);
            CHECK(rp.r1 >= rp.r2);
            CHECK(rp.r2 > 0.0);
            CHECK(rp.r1 + rp.r2 == doctest::Approx(2 * (r + g)).epsilon(1e-14));
            CHECK(rp.r1 * rp.r2 == doctest::Approx(2 * r * g).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(rate_eigenvalues(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("rate equations are solved exactly") {
    for (const double r : {0.3, 2.534, 10.0}) {
        for (const double g : {0.0, 1.0, 5.0}) {
            const analytic::Populations p0 = populations_rate_eq(r, g, 0.0);
            CHECK(p0.rho11 == 1.0);
            CHECK(p0.rho22 == 0.0);
            auto rhs = [&](double, const std::array<double, 2>& y) {
                return std::array<double, 2>{-r * (y[0] - y[1]), r * (y[0] - y[1]) - 2 * g * y[1]};
            };
            for (const double t : {0.1, 1.0, 4.0}) {
                const auto y = oracle::rk4<2>(rhs, {1.0, 0.0}, t, 20000);
                const analytic::Populations p = populations_rate_eq(r, g, t);
                CHECK(std::abs(p.rho11 - y[0]) < 1e-10);
                CHECK(std::abs(p.rho22 - y[1]) < 1e-10);
                if (g > 0.0) {
                    CHECK(std::abs(efficiency_noise(r, g, t) - (1 - p.rho11 - p.rho22)) < 1e-10);
                }
                // d(rho11 + rho22)/dt = -2 Gamma rho22
                const double h = 1e-6;
                const analytic::Populations a = populations_rate_eq(r, g, t + h);
                const analytic::Populations b = populations_rate_eq(r, g, t - h);
                const double fd = ((a.rho11 + a.rho22) - (b.rho11 + b.rho22)) / (2 * h);
                CHECK(std::abs(fd + 2 * g * p.rho22) <= 1e-6 * std::max(1e-3, 2 * g * p.rho22));
            }
        }
    }
    const analytic::Populations late = populations_rate_eq(2.0, 0.0, 50.0);
    CHECK(late.rho11 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(late.rho22 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(populations_rate_eq(0.0, 1.0, 3.0).rho11 == 1.0);
}

TEST_CASE("noise-assisted efficiency") {
    CHECK(efficiency_noise(2.0, 1.0, 0.0) == 0.0);
    CHECK(efficiency_noise(2.0, 1.0, 200.0) == doctest::Approx(1.0).epsilon(1e-14));
    double prev = 0.0;
    for (double t = 0.0; t < 20.0; t += 0.1) {
        const double eta = efficiency_noise(2.534, 1.0, t);
        CHECK(eta >= prev);
        CHECK(eta <= 1.0);
        prev = eta;
    }
    for (const double t : {5.0, 10.0, 20.0}) {
        const double exact = efficiency_noise(2.534, 1.0, t);
        const double asym = efficiency_noise_asymptotic(2.534, 1.0, t);
        const RatePair rp = rate_eigenvalues(2.534, 1.0);
        // neglected term R2 / (R1 - R2) e^{-R1 t}
        CHECK(std::abs(exact - asym) <= 1.01 * rp.r2 / (rp.r1 - rp.r2) * std::exp(-rp.r1 * t) + 1e-14);
    }
    // the near-optimal noise reaches eta = 0.95 after a few ps; the noiseless
    // system needs close to 58 ps
    const double rg = marcus_rate_gamma(20, 60, 60, 1, 1);
    double t95 = 0.0;
    while (efficiency_noise(rg, 1.0, t95) < 0.95) {
        t95 += 1e-3;
    }
    CHECK(t95 == doctest::Approx(3.88).epsilon(0.01));
    CHECK(analytic::efficiency_closed_form({60, 20, 1}, 5 * t95) < 0.95);
}

TEST_CASE("collective noise at zero sink coupling") {
    const NoiseCouplings same{25, 25};
    const analytic::Populations p0 = populations_gamma0_collective({60, 20, 0}, same, 0.0);
    CHECK(p0.rho11 == 1.0);
    CHECK(p0.rho22 == 0.0);
    const double t = M_PI / 60.0;
    const analytic::Populations p = populations_gamma0_collective({60, 20, 0}, same, t);
    CHECK(p.rho11 == doctest::Approx(0.5 + 0.5 * std::exp(-800.0 / 3600.0)).epsilon(1e-14));
    CHECK(p.rho11 == doctest::Approx(0.90037).epsilon(1e-5));
    CHECK(p.rho11 + p.rho22 == doctest::Approx(1.0).epsilon(1e-15));
    // quartic at a generic time; at eps t / 2 = pi/2 the quartic terms cancel
    std::vector<double> errors;
    const double eps = 60.0;
    for (const double x : {0.05, 0.1, 0.2}) {
        const double v = x * eps;
        const double tg = 1.0 / 30.0;
        errors.push_back(std::abs(populations_gamma0_collective({eps, v, 0}, same, tg).rho11 - rabi_rho11(v, eps, tg)));
    }
    MESSAGE("collective error ratios: ", errors[1] / errors[0], " ", errors[2] / errors[1]);
    CHECK(errors[1] / errors[0] >= 12.0);
    CHECK(errors[1] / errors[0] <= 20.0);
    CHECK(errors[2] / errors[1] >= 12.0);
    CHECK(errors[2] / errors[1] <= 20.0);
    CHECK_THROWS_AS(populations_gamma0_collective({60, 20, 1}, same, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(populations_gamma0_collective({60, 20, 0}, NoiseCouplings{1, 2}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(populations_gamma0_collective({0, 20, 0}, same, 1.0), std::invalid_argument);
}

TEST_CASE("tabulated rate curve") {
    const SystemParams p{60, 20, 1};
    const NoiseCouplings c = NoiseCouplings::differential(60);
    const RateCurve coarse(p, c, kDefault, 2.0, 400);
    const RateCurve fine(p, c, kDefault, 2.0, 800);
    CHECK(coarse.t_max() == doctest::Approx(2.0));
    CHECK(coarse.step() == doctest::Approx(0.005));
    CHECK(coarse.nodes().size() == 401);
    for (std::size_t k = 0; k < coarse.nodes().size(); k += 37) {
        CHECK(std::abs(coarse(k * coarse.step()) - rate_r_of_t(p, c, kDefault, k * coarse.step())) < 1e-9);
    }
    double err_c = 0.0;
    double err_f = 0.0;
    for (double t = 0.0013; t < 2.0; t += 0.0171) {
        const double exact = rate_r_of_t(p, c, kDefault, t);
        err_c = std::max(err_c, std::abs(coarse(t) - exact));
        err_f = std::max(err_f, std::abs(fine(t) - exact));
    }
    MESSAGE("rate curve max error h=0.005: ", err_c, "  h=0.0025: ", err_f);
    CHECK(err_c < 1e-3);
    CHECK(err_c / err_f > 12.0);
    CHECK_THROWS_AS(coarse(2.1), std::out_of_range);
    CHECK_THROWS_AS(coarse(-0.1), std::out_of_range);
    CHECK_THROWS_AS(RateCurve(p, c, kDefault, 0.0, 10), std::invalid_argument);
}
