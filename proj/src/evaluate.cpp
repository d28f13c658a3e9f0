#include "optomech/evaluate.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "optomech/cooling.hpp"
#include "optomech/entanglement.hpp"
#include "optomech/errors.hpp"
#include "optomech/steady_state.hpp"

namespace optomech {

namespace {

constexpr QuantityInfo kCatalog[] = {
    {Quantity::Nf, "nf", ""},
    {Quantity::NfAnalytic, "nf_analytic", ""},
    {Quantity::GammaEff, "gamma_eff", "gamma_m"},
    {Quantity::GammaCool, "gamma_cool", "wm"},
    {Quantity::OmegaEff, "omega_eff", "wm"},
    {Quantity::Lambda, "lambda", ""},
    {Quantity::Chi, "chi", ""},
    {Quantity::ChiAbs, "chi_abs", ""},
    {Quantity::Ecb, "e_cb", ""},
    {Quantity::Eab, "e_ab", ""},
    {Quantity::Eac, "e_ac", ""},
    {Quantity::Tripartite, "tripartite", ""},
    {Quantity::Xss, "x_ss", "m"},
    {Quantity::CouplingG, "coupling_g", "wm"},
    {Quantity::DeltaEff, "delta_eff", "wm"},
    {Quantity::StabilityMargin, "stability_margin", "wm"},
    {Quantity::RootCount, "root_count", ""},
};

// Quantities that do not need a stable linearisation.
bool static_quantity(Quantity q) {
    return q == Quantity::Xss || q == Quantity::CouplingG || q == Quantity::DeltaEff ||
           q == Quantity::StabilityMargin || q == Quantity::RootCount;
}

}  // namespace

std::span<const QuantityInfo> quantity_catalog() { return kCatalog; }

const QuantityInfo& quantity_info(Quantity q) {
    for (const auto& info : kCatalog) {
        if (info.quantity == q) return info;
    }
    throw ParameterError("quantity_info: unknown quantity");
}

Quantity parse_quantity(std::string_view name) {
    for (const auto& info : kCatalog) {
        if (info.name == name) return info.quantity;
    }
    std::string known;
    for (const auto& info : kCatalog) known += (known.empty() ? "" : ", ") + std::string(info.name);
    throw ParameterError("unknown output '" + std::string(name) + "' (known: " + known + ")");
}

PointResult evaluate_point(const SystemParams& params, std::span<const Quantity> quantities) {
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    PointResult r;
    r.values.assign(quantities.size(), kNaN);
    const ScaledParams p = derive_dimensionless(params);

    try {
        const auto ss = solve_steady_state(p);
        std::optional<CovarianceMatrix> cov;
        std::optional<EntanglementReport> ent;
        std::optional<ImprovementRate> chi;
        const double w0 = 1.0;

        for (std::size_t i = 0; i < quantities.size(); ++i) {
            const Quantity q = quantities[i];
            if (!static_quantity(q) && !ss.stable) {
                r.status = kStatusUnstable;
                r.message = "stability margin " + std::to_string(ss.stability_margin);
                r.values.assign(quantities.size(), kNaN);
                return r;
            }
            const auto covariance = [&]() -> const CovarianceMatrix& {
                if (!cov) cov = solve_lyapunov(build_drift(ss, p, Basis::Quadrature));
                return *cov;
            };
            const auto report = [&]() -> const EntanglementReport& {
                if (!ent) ent = residual_contangle(covariance());
                return *ent;
            };
            const auto improvement = [&]() -> const ImprovementRate& {
                if (!chi) chi = improvement_rate(params, params.tunneling_j / params.omega_m, params.power_right);
                return *chi;
            };
            double v = kNaN;
            switch (q) {
                case Quantity::Nf: v = phonon_number_numeric(covariance()); break;
                case Quantity::NfAnalytic: v = phonon_number_analytic(ss, p); break;
                case Quantity::GammaEff:
                    v = effective_response(ss, p, std::span(&w0, 1)).gamma_eff[0] / p.gamma_m;
                    break;
                case Quantity::GammaCool: v = net_cooling_rate(ss, p, 1.0); break;
                case Quantity::OmegaEff: v = effective_response(ss, p, std::span(&w0, 1)).omega_eff[0]; break;
                case Quantity::Lambda:
                    v = amplification_factor(params, params.tunneling_j / params.omega_m, params.power_right);
                    break;
                case Quantity::Chi: v = improvement().chi; break;
                case Quantity::ChiAbs: v = improvement().magnitude; break;
                case Quantity::Ecb: v = report().e_cb; break;
                case Quantity::Eab: v = report().e_ab; break;
                case Quantity::Eac: v = report().e_ac; break;
                case Quantity::Tripartite: v = report().tripartite; break;
                case Quantity::Xss: v = ss.x_ss; break;
                case Quantity::CouplingG: v = std::abs(ss.coupling_g); break;
                case Quantity::DeltaEff: v = ss.delta_eff; break;
                case Quantity::StabilityMargin: v = ss.stability_margin; break;
                case Quantity::RootCount: {
                    ScaledParams sc = p;
                    sc.delta = ss.delta_c;
                    v = static_cast<double>(real_cubic_roots(steady_state_cubic(sc)).size());
                    break;
                }
            }
            r.values[i] = v;
        }
        r.status = kStatusOk;
    } catch (const StabilityError& e) {
        r.status = kStatusUnstable;
        r.message = e.what();
        r.values.assign(quantities.size(), kNaN);
    } catch (const NumericError& e) {
        r.status = kStatusFailed;
        r.message = e.what();
        r.values.assign(quantities.size(), kNaN);
    }
    return r;
}

}  // namespace optomech
