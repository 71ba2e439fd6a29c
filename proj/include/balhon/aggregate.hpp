#pragma once

// Complement-product risk aggregation over routes and incoming ports, region
// averaging, and policy-comparison statistics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "balhon/dataset.hpp"
#include "balhon/errors.hpp"

namespace balhon {

// 1 - prod(1 - p); computed through sum of log1p(-p) so long route lists
// do not underflow. p == 1 short-circuits.
inline double aggregate_pair_risk(std::span<const double> route_probs) {
    double log_complement = 0.0;
    for (double p : route_probs) {
        if (p >= 1.0) return 1.0;
        log_complement += std::log1p(-p);
    }
    return -std::expm1(log_complement);
}

inline double aggregate_pair_risk(const std::vector<double>& route_probs) {
    return aggregate_pair_risk(std::span<const double>(route_probs));
}

inline double cumulative_port_risk(std::span<const double> incoming) {
    return aggregate_pair_risk(incoming);
}

inline double cumulative_port_risk(const std::vector<double>& incoming) {
    return aggregate_pair_risk(std::span<const double>(incoming));
}

struct PortRisk {
    std::string port_id;
    double cumulative_risk = 0;
};

struct ReductionStats {
    double reduction_pct = 0;  // fraction in [0,1]
    double fold_change = 1;    // no-policy / policy; +inf when policy == 0
};

inline ReductionStats reduction_stats(double no_policy, double policy) {
    if (no_policy == 0.0) throw UndefinedReduction("reduction undefined for zero baseline risk");
    ReductionStats s;
    s.reduction_pct = (no_policy - policy) / no_policy;
    s.fold_change = policy > 0 ? no_policy / policy : std::numeric_limits<double>::infinity();
    return s;
}

struct RegionRiskSummary {
    std::string region_id;
    double risk_no_policy = 0;
    double risk_policy = 0;
    double reduction_pct = 0;
    double fold_change = 1;
    bool empty_region = false;     // region with zero ports, reported not fatal
    bool reduction_defined = true; // false when risk_no_policy == 0
};

// Unweighted mean port risk per region under both scenarios, plus the
// reduction ratio and fold change. Both maps must cover the same ports.
inline std::vector<RegionRiskSummary> region_risk_summary(
    const std::map<std::string, double>& port_risks_no_policy,
    const std::map<std::string, double>& port_risks_policy, const Dataset& ds) {
    if (port_risks_no_policy.size() != port_risks_policy.size())
        throw DatasetMismatch("scenario port sets differ");
    for (const auto& [pid, _] : port_risks_no_policy)
        if (!port_risks_policy.count(pid))
            throw DatasetMismatch("port " + pid + " missing from policy scenario");

    std::map<std::string, std::pair<double, double>> sums;  // region -> (sum_np, sum_pol)
    std::map<std::string, std::size_t> counts;
    for (const auto& r : ds.regions) {
        sums[r.region_id] = {0.0, 0.0};
        counts[r.region_id] = 0;
    }
    for (const auto& [pid, risk_np] : port_risks_no_policy) {
        const auto& port = ds.port(pid);
        sums[port.region_id].first += risk_np;
        sums[port.region_id].second += port_risks_policy.at(pid);
        counts[port.region_id] += 1;
    }

    std::vector<RegionRiskSummary> out;
    for (const auto& [rid, sum] : sums) {
        RegionRiskSummary s;
        s.region_id = rid;
        std::size_t n = counts[rid];
        if (n == 0) {
            s.empty_region = true;
            s.reduction_defined = false;
            out.push_back(std::move(s));
            continue;
        }
        s.risk_no_policy = sum.first / double(n);
        s.risk_policy = sum.second / double(n);
        if (s.risk_no_policy > 0) {
            auto rs = reduction_stats(s.risk_no_policy, s.risk_policy);
            s.reduction_pct = rs.reduction_pct;
            s.fold_change = rs.fold_change;
        } else {
            s.reduction_defined = false;
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace balhon
