// model.hpp - shared domain types for the donor/acceptor/sink model
//
// All energies and rates are in ps^-1 with hbar = 1; times are in ps.

#pragma once

#include <complex>
#include <string_view>

#include <json.hpp>

#include "rcet/specfun.hpp"

namespace rcet {

// Dressed two-level parameters. epsilon is the donor-acceptor gap
// (eps1 - eps2), v the tunneling coupling and gamma = Gamma_a / 2 the
// acceptor-to-sink half-rate.
struct SystemParams {
    double epsilon{0.0};
    double v{0.0};
    double gamma{0.0};

    // Throws std::invalid_argument if gamma < 0 or any field is not finite.
    void validate() const;
};

// Projected 2x2 density matrix. Only the upper triangle is stored;
// rho12 = <1|rho|2> and rho21 = conj(rho12).
struct DensityMatrix2 {
    double rho11{0.0};
    double rho22{0.0};
    Complex rho12{0.0, 0.0};

    double trace() const { return rho11 + rho22; }
    // rho11 rho22 - |rho12|^2
    double determinant() const { return rho11 * rho22 - std::norm(rho12); }

    // Population, trace and positivity bounds, all with absolute slack tol.
    bool is_physical(double tol = 1e-9) const;

    static DensityMatrix2 donor() { return {1.0, 0.0, {0.0, 0.0}}; }
    static DensityMatrix2 acceptor() { return {0.0, 1.0, {0.0, 0.0}}; }
};

// Omega = sqrt(V^2 + (eps + i Gamma)^2) = omega1 + i omega2 = sqrt(p + i q),
// with p = V^2 + eps^2 - Gamma^2 and q = 2 eps Gamma.
// Consequently omega1^2 - omega2^2 = p and omega1 omega2 = q / 2 = eps Gamma.
struct RabiDecomposition {
    Complex omega{0.0, 0.0};
    double omega1{0.0};
    double omega2{0.0};
    double p{0.0};
    double q{0.0};
};

// Principal branch: omega1 >= 0 and sign(omega2) = sign(eps Gamma).
RabiDecomposition complex_rabi(const SystemParams& params);

enum class Regime { Coherent, Incoherent, ExceptionalPoint, Generic };

inline constexpr double kExceptionalPointTolerance = 1e-12;

// Flat gap (eps = 0) splits into coherent (V > Gamma), incoherent
// (V < Gamma) and the exceptional point |V| = Gamma; anything else is Generic.
Regime classify_regime(const SystemParams& params);

std::string_view to_string(Regime regime);

void to_json(nlohmann::json& j, const SystemParams& params);
// Requires exactly the keys epsilon, v, gamma; throws std::invalid_argument
// naming the offending key otherwise.
void from_json(const nlohmann::json& j, SystemParams& params);

}  // namespace rcet
