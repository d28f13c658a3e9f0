#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/params.hpp"

namespace optomech {

enum class Quantity {
    Nf,               // Lyapunov route
    NfAnalytic,       // closed form
    GammaEff,         // Gamma_eff(omega_m) / gamma_m
    GammaCool,        // gamma_C(omega_m), omega_m units
    OmegaEff,         // Omega_eff(omega_m), omega_m units
    Lambda,           // vs the unassisted configuration, both at Delta = omega_m
    Chi,
    ChiAbs,
    Ecb,
    Eab,
    Eac,
    Tripartite,
    Xss,              // m
    CouplingG,        // |G|, omega_m units
    DeltaEff,         // Delta, omega_m units
    StabilityMargin,  // omega_m units
    RootCount,        // real steady states at this point (self-consistent cubic)
};

struct QuantityInfo {
    Quantity quantity;
    std::string_view name;
    std::string_view unit;
};

std::span<const QuantityInfo> quantity_catalog();
const QuantityInfo& quantity_info(Quantity q);

// Throws ParameterError listing the valid names.
Quantity parse_quantity(std::string_view name);

inline constexpr std::string_view kStatusOk = "ok";
inline constexpr std::string_view kStatusUnstable = "unstable";
inline constexpr std::string_view kStatusFailed = "failed";

struct PointResult {
    std::vector<double> values;  // NaN unless status == ok
    std::string status;
    std::string message;         // reason for a non-ok status
};

// Evaluates the requested quantities for one scenario. Stability and numeric
// failures are reported through `status`; parameter errors propagate.
PointResult evaluate_point(const SystemParams& params, std::span<const Quantity> quantities);

}  // namespace optomech
