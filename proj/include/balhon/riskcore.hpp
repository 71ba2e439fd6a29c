#pragma once

// Per-leg invasion risk kernel: nonindigenous gate, introduction probability
// and establishment probability, combined into the per-voyage spread risk.
// Pure functions, callable concurrently.

#include <cmath>

#include "balhon/dataset.hpp"

namespace balhon {

struct LegContext {
    double discharge_tonnes = 0;
    double duration_days = 0;
    double temp_diff = 0;  // |T_i - T_j|
    double sal_diff = 0;   // |S_i - S_j|
    bool same_or_neighbor_ecoregion = false;
    RiskParams params;
};

inline int nonindigenous_indicator(const LegContext& ctx) {
    return ctx.same_or_neighbor_ecoregion ? 0 : 1;
}

inline double intro_probability(const LegContext& ctx) {
    const RiskParams& p = ctx.params;
    // -expm1 keeps precision when lambda*D is tiny
    double uptake = -std::expm1(-p.lambda * ctx.discharge_tonnes);
    return p.rho * uptake * std::exp(-p.mu * ctx.duration_days);
}

inline double establish_probability(const LegContext& ctx) {
    const RiskParams& p = ctx.params;
    double t = ctx.temp_diff / p.delta_T;
    double s = ctx.sal_diff / p.delta_S;
    return p.alpha * std::exp(-0.5 * (t * t + s * s));
}

inline double spread_probability(const LegContext& ctx) {
    if (ctx.same_or_neighbor_ecoregion) return 0.0;
    return intro_probability(ctx) * establish_probability(ctx);
}

}  // namespace balhon
