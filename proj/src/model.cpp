#include "rcet/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rcet {

void SystemParams::validate() const {
    if (!std::isfinite(epsilon) || !std::isfinite(v) || !std::isfinite(gamma)) {
        throw std::invalid_argument("SystemParams: fields must be finite");
    }
    if (gamma < 0.0) {
        throw std::invalid_argument("SystemParams: gamma must be non-negative");
    }
}

bool DensityMatrix2::is_physical(double tol) const {
    return rho11 >= -tol && rho22 >= -tol && trace() <= 1.0 + tol &&
           determinant() >= -tol;
}

RabiDecomposition complex_rabi(const SystemParams& params) {
    RabiDecomposition r;
    r.p = params.v * params.v + params.epsilon * params.epsilon -
          params.gamma * params.gamma;
    r.q = 2.0 * params.epsilon * params.gamma;
    r.omega = std::sqrt(Complex{r.p, r.q});
    r.omega1 = r.omega.real();
    r.omega2 = r.omega.imag();
    return r;
}

Regime classify_regime(const SystemParams& params) {
    const double scale = std::max({std::abs(params.v), params.gamma, 1e-300});
    const double tol = kExceptionalPointTolerance * scale;
    if (std::abs(params.epsilon) > tol) {
        return Regime::Generic;
    }
    const double split = std::abs(params.v) - params.gamma;
    if (std::abs(split) <= tol) {
        return Regime::ExceptionalPoint;
    }
    return split > 0.0 ? Regime::Coherent : Regime::Incoherent;
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::Coherent: return "coherent";
        case Regime::Incoherent: return "incoherent";
        case Regime::ExceptionalPoint: return "exceptional-point";
        case Regime::Generic: return "generic";
    }
    return "unknown";
}

void to_json(nlohmann::json& j, const SystemParams& params) {
    j = nlohmann::json{{"epsilon", params.epsilon}, {"v", params.v}, {"gamma", params.gamma}};
}

void from_json(const nlohmann::json& j, SystemParams& params) {
    if (!j.is_object()) {
        throw std::invalid_argument("system: expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "epsilon" && key != "v" && key != "gamma") {
            throw std::invalid_argument("system: unknown key '" + key + "'");
        }
        if (!value.is_number()) {
            throw std::invalid_argument("system." + key + ": expected a number");
        }
    }
    for (const char* key : {"epsilon", "v", "gamma"}) {
        if (!j.contains(key)) {
            throw std::invalid_argument(std::string("system: missing required key '") + key + "'");
        }
    }
    params.epsilon = j.at("epsilon").get<double>();
    params.v = j.at("v").get<double>();
    params.gamma = j.at("gamma").get<double>();
    params.validate();
}

}  // namespace rcet
