// app.hpp - command implementations behind the rc-etsim executable

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcet/config.hpp"

namespace rcet::cli {

// A computed result broke a physical invariant (exit code 2).
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kInvariantViolation = 2 };

using Paths = std::vector<std::filesystem::path>;

// One sweep axis: name in {epsilon, v, gamma, d_sigma}, n >= 1 points
// spaced linearly over [lo, hi]. Parsed from "name:lo:hi:n".
struct SweepAxis {
    std::string name;
    double lo{0.0};
    double hi{0.0};
    std::size_t n{1};

    static SweepAxis parse(const std::string& spec);
    double at(std::size_t i) const;
};

// quantity: "eta" (noiseless efficiency at `time`), "eta_noise"
// (rate-equation efficiency at `time` with the Gaussian-kernel rate) or
// "rate" (Gaussian-kernel large-time rate).
struct SweepSpec {
    std::vector<SweepAxis> axes;
    std::string quantity{"eta"};
    double time{10.0};
};

inline constexpr std::size_t kMaxSweepPoints = 10000;

// Recipe names accepted by each command; an empty recipe runs the config.
const std::vector<std::string>& analytic_recipes();  // fig2 fig3 fig4
const std::vector<std::string>& rates_recipes();     // fig5 fig7
const std::vector<std::string>& noise_recipes();     // fig6
const std::vector<std::string>& dynamics_recipes();  // fig8

Paths cmd_analytic(const RunConfig& config, const std::string& recipe, const std::filesystem::path& out);

// empirical > 0 adds the sampled correlation table with that many trajectories.
Paths cmd_noise(const RunConfig& config, const std::string& recipe, const std::filesystem::path& out,
                std::size_t empirical = 0);

Paths cmd_rates(const RunConfig& config, const std::string& recipe, const std::filesystem::path& out);

Paths cmd_dynamics(const RunConfig& config, const std::string& recipe, const std::filesystem::path& out,
                   unsigned threads = 0);

Paths cmd_sweep(const RunConfig& config, const SweepSpec& spec, const std::filesystem::path& out);

// Dispatches a figure recipe ("fig2" .. "fig8" or "all") to its command.
Paths cmd_figure(const RunConfig& config, const std::string& recipe, const std::filesystem::path& out,
                 unsigned threads = 0);

// Worker cap from RC_ETSIM_THREADS (unset or invalid: hardware concurrency).
unsigned thread_budget();

// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace rcet::cli
