#pragma once

// BWM compliance cost per voyage, baseline shipping cost, and the
// region-pair cost-change matrix fed to downstream economic models.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "balhon/dataset.hpp"
#include "balhon/errors.hpp"

namespace balhon {

// (C + O)/N + T * V. N is the vessel's treatments per year; the annual
// fixed costs are shared across them.
inline double voyage_compliance_cost(const VoyageRecord& v, int n_treatments,
                                     const CostParams& cp) {
    if (n_treatments < 1) throw ZeroTreatments("n_treatments must be >= 1");
    return (cp.annual_capital_usd + cp.annual_operating_usd) / double(n_treatments) +
           cp.per_tonne_treatment_usd * v.discharge_tonnes;
}

// A treatment is a discharging voyage; floor of 1 so fixed costs stay
// attributable to vessels that never discharge.
inline int count_annual_treatments(const Dataset& ds, const std::string& vessel_id) {
    int n = 0;
    for (const auto& v : ds.voyages)
        if (v.vessel_id == vessel_id && v.discharge_tonnes > 0) ++n;
    return std::max(1, n);
}

inline double baseline_voyage_cost(const VoyageRecord& v, const CostParams& cp) {
    auto it = cp.daily_cost_usd.find(v.vessel_type);
    if (it == cp.daily_cost_usd.end())
        throw UnknownVesselType("no daily cost for vessel type " + to_string(v.vessel_type));
    return voyage_duration(v) * it->second;
}

struct RouteCostChange {
    std::string origin_region;
    std::string dest_region;
    double baseline_usd = 0;
    double compliance_usd = 0;
    double pct_change = 0;  // compliance / baseline, fraction
};

// Summed baseline and compliance cost per ordered region pair. Pairs with
// no traffic are simply absent (rendered blank downstream).
inline std::vector<RouteCostChange> cost_change_matrix(const Dataset& ds, const CostParams& cp) {
    std::map<std::string, int> treatments;
    for (const auto& v : ds.voyages)
        if (v.discharge_tonnes > 0) treatments[v.vessel_id] += 1;

    std::map<std::pair<std::string, std::string>, std::pair<double, double>> acc;
    for (const auto& v : ds.voyages) {
        const auto& origin = ds.port(v.origin_port);
        const auto& dest = ds.port(v.dest_port);
        auto it = treatments.find(v.vessel_id);
        int n = it == treatments.end() ? 1 : std::max(1, it->second);
        auto& slot = acc[{origin.region_id, dest.region_id}];
        slot.first += baseline_voyage_cost(v, cp);
        slot.second += voyage_compliance_cost(v, n, cp);
    }

    std::vector<RouteCostChange> out;
    for (const auto& [pair, sums] : acc) {
        RouteCostChange rc;
        rc.origin_region = pair.first;
        rc.dest_region = pair.second;
        rc.baseline_usd = sums.first;
        rc.compliance_usd = sums.second;
        rc.pct_change = sums.first > 0 ? sums.second / sums.first : 0.0;
        out.push_back(std::move(rc));
    }
    return out;
}

}  // namespace balhon
