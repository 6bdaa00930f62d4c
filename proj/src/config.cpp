#include "rcet/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace rcet {

namespace {

using nlohmann::json;

struct Source {
    const std::string& text;

    // 1-based line and column of a byte offset.
    std::string where(std::size_t offset) const {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return "line " + std::to_string(line) + ", column " + std::to_string(col);
    }

    // Best-effort location of "key" inside "section".
    std::string locate(std::string_view section, std::string_view key) const {
        std::size_t from = 0;
        if (!section.empty()) {
            from = text.find("\"" + std::string(section) + "\"");
            if (from == std::string::npos) {
                return {};
            }
        }
        const std::size_t at = key.empty() ? from : text.find("\"" + std::string(key) + "\"", from + 1);
        if (at == std::string::npos) {
            return {};
        }
        return " (" + where(at) + ")";
    }
};

class Reader {
public:
    Reader(const Source& src, const json& root, std::string section)
        : src_(src), section_(std::move(section)) {
        if (!root.contains(section_)) {
            fail("", "missing required section '" + section_ + "'");
        }
        node_ = &root.at(section_);
        if (!node_->is_object()) {
            fail("", "section '" + section_ + "' must be an object");
        }
    }

    void allow(std::initializer_list<std::string_view> keys) const {
        for (const auto& [key, value] : node_->items()) {
            bool known = false;
            for (const auto k : keys) {
                known = known || key == k;
            }
            if (!known) {
                fail(key, "unknown key '" + section_ + "." + key + "'");
            }
        }
    }

    const json& field(const std::string& key) const {
        if (!node_->contains(key)) {
            fail("", "missing required field '" + section_ + "." + key + "'");
        }
        return node_->at(key);
    }

    double number(const std::string& key) const {
        const json& v = field(key);
        if (!v.is_number()) {
            fail(key, "'" + section_ + "." + key + "' must be a number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(key, "'" + section_ + "." + key + "' must be finite");
        }
        return x;
    }

    double positive(const std::string& key) const {
        const double x = number(key);
        if (!(x > 0.0)) {
            fail(key, "'" + section_ + "." + key + "' must be positive");
        }
        return x;
    }

    std::uint64_t unsigned_integer(const std::string& key) const {
        const json& v = field(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            fail(key, "'" + section_ + "." + key + "' must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key) const {
        const json& v = field(key);
        if (!v.is_string()) {
            fail(key, "'" + section_ + "." + key + "' must be a string");
        }
        return v.get<std::string>();
    }

    [[noreturn]] void fail(std::string_view key, const std::string& message) const {
        throw ConfigError("config: " + message + src_.locate(section_, key));
    }

private:
    const Source& src_;
    std::string section_;
    const json* node_{nullptr};
};

}  // namespace

RunConfig parse_config(const std::string& text) {
    const Source src{text};
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        throw ConfigError("config: JSON syntax error at " + src.where(offset));
    }
    if (!root.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    for (const auto& [key, value] : root.items()) {
        if (key != "system" && key != "noise" && key != "run" && key != "output") {
            throw ConfigError("config: unknown section '" + key + "'" + src.locate(key, ""));
        }
    }

    RunConfig cfg;
    {
        const Reader r(src, root, "system");
        r.allow({"epsilon", "v", "gamma"});
        cfg.system.epsilon = r.number("epsilon");
        cfg.system.v = r.number("v");
        cfg.system.gamma = r.number("gamma");
        if (cfg.system.gamma < 0.0) {
            r.fail("gamma", "'system.gamma' must be non-negative");
        }
    }
    {
        const Reader r(src, root, "noise");
        r.allow({"gamma_m", "gamma_c", "sigma", "g1", "g2", "n_fluctuators"});
        cfg.noise.gamma_m = r.positive("gamma_m");
        cfg.noise.gamma_c = r.positive("gamma_c");
        if (!(cfg.noise.gamma_c > cfg.noise.gamma_m)) {
            r.fail("gamma_c", "'noise.gamma_c' must exceed 'noise.gamma_m'");
        }
        cfg.noise.sigma = r.positive("sigma");
        cfg.noise.g1 = r.number("g1");
        cfg.noise.g2 = r.number("g2");
        cfg.noise.n_fluctuators = r.unsigned_integer("n_fluctuators");
        if (cfg.noise.n_fluctuators == 0) {
            r.fail("n_fluctuators", "'noise.n_fluctuators' must be at least 1");
        }
    }
    {
        const Reader r(src, root, "run");
        r.allow({"dt", "t_max", "n_trajectories", "seed"});
        cfg.run.dt = r.positive("dt");
        cfg.run.t_max = r.positive("t_max");
        if (!(cfg.run.t_max > cfg.run.dt)) {
            r.fail("t_max", "'run.t_max' must exceed 'run.dt'");
        }
        cfg.run.n_trajectories = r.unsigned_integer("n_trajectories");
        if (cfg.run.n_trajectories < 2) {
            r.fail("n_trajectories", "'run.n_trajectories' must be at least 2");
        }
        cfg.run.seed = r.unsigned_integer("seed");
    }
    {
        const Reader r(src, root, "output");
        r.allow({"path", "format"});
        cfg.output.path = r.string("path");
        cfg.output.format = r.string("format");
        if (cfg.output.format != "csv") {
            r.fail("format", "'output.format' must be \"csv\"");
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("config: cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::json to_json(const RunConfig& config) {
    nlohmann::json system;
    rcet::to_json(system, config.system);
    return {
        {"system", system},
        {"noise",
         {{"gamma_m", config.noise.gamma_m},
          {"gamma_c", config.noise.gamma_c},
          {"sigma", config.noise.sigma},
          {"g1", config.noise.g1},
          {"g2", config.noise.g2},
          {"n_fluctuators", config.noise.n_fluctuators}}},
        {"run",
         {{"dt", config.run.dt},
          {"t_max", config.run.t_max},
          {"n_trajectories", config.run.n_trajectories},
          {"seed", config.run.seed}}},
        {"output", {{"path", config.output.path}, {"format", config.output.format}}},
    };
}

}  // namespace rcet
