// config.hpp - JSON run configuration

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rcet/model.hpp"
#include "rcet/noise.hpp"

namespace rcet {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NoiseSettings {
    double gamma_m{5e-5};
    double gamma_c{0.5};
    double sigma{1.0};
    double g1{60.0};
    double g2{0.0};
    std::size_t n_fluctuators{1000};

    noise::NoiseBand band() const { return {gamma_m, gamma_c, sigma}; }
    noise::NoiseCouplings couplings() const { return {g1, g2}; }
};

struct RunSettings {
    double dt{2e-4};
    double t_max{20.0};
    std::size_t n_trajectories{200};
    std::uint64_t seed{20240601};
};

struct OutputSettings {
    std::string path{"out"};
    std::string format{"csv"};
};

struct RunConfig {
    SystemParams system{60.0, 20.0, 1.0};
    NoiseSettings noise;
    RunSettings run;
    OutputSettings output;
};

// Parses a JSON document with the sections system, noise, run and output.
// Every field is required and unknown keys are rejected. Errors name the
// offending field and, where it can be located, its line in the source.
// Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

}  // namespace rcet
