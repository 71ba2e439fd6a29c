#pragma once

// Scenario orchestration: a named parameter set run through the full
// pipeline (paths -> rules -> network -> projection -> normalization ->
// cumulative risks), plus scenario-pair comparison.

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "balhon/aggregate.hpp"
#include "balhon/cost.hpp"
#include "balhon/dataset.hpp"
#include "balhon/hon.hpp"

namespace balhon {

enum class Normalization { raw, per_scenario };

inline std::string to_string(Normalization n) {
    return n == Normalization::raw ? "raw" : "per_scenario";
}

inline Normalization parse_normalization(const std::string& s) {
    if (s == "raw") return Normalization::raw;
    if (s == "per_scenario") return Normalization::per_scenario;
    throw InvariantViolation("unknown normalization '" + s + "'");
}

struct ScenarioConfig {
    std::string name;
    ParamsBundle params;
    Normalization normalization = Normalization::per_scenario;
    unsigned threads = 1;
};

// Scenario file = params.json schema plus "name" and "normalization".
inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    ScenarioConfig cfg;
    if (j.contains("name")) {
        cfg.name = j.at("name").get<std::string>();
        j.erase("name");
    }
    if (j.contains("normalization")) {
        cfg.normalization = parse_normalization(j.at("normalization").get<std::string>());
        j.erase("normalization");
    }
    cfg.params = parse_params_json(j);
    return cfg;
}

namespace detail {

inline void fnv_mix(std::uint64_t& h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ULL;
}

inline std::string fnv_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline std::string dataset_hash(const Dataset& ds) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& p : ds.ports) {
        detail::fnv_mix(h, p.port_id);
        detail::fnv_mix(h, p.region_id);
        detail::fnv_mix(h, p.ecoregion_id);
        detail::fnv_mix(h, detail::num_str(p.temperature_c));
        detail::fnv_mix(h, detail::num_str(p.salinity_ppt));
    }
    for (const auto& v : ds.voyages) {
        detail::fnv_mix(h, v.voyage_id);
        detail::fnv_mix(h, v.vessel_id);
        detail::fnv_mix(h, v.origin_port);
        detail::fnv_mix(h, v.dest_port);
        detail::fnv_mix(h, detail::num_str(double(v.sail_day)));
        detail::fnv_mix(h, detail::num_str(double(v.arrival_day)));
        detail::fnv_mix(h, detail::num_str(v.discharge_tonnes));
    }
    for (const auto& r : ds.regions) {
        detail::fnv_mix(h, r.region_id);
        detail::fnv_mix(h, detail::num_str(r.gdp_per_capita_usd));
    }
    return detail::fnv_hex(h);
}

inline std::string config_hash(const ScenarioConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    detail::fnv_mix(h, cfg.name);
    detail::fnv_mix(h, to_string(cfg.normalization));
    const auto& p = cfg.params;
    for (double v : {p.risk.lambda, p.risk.mu, p.risk.delta_T, p.risk.delta_S, p.risk.alpha,
                     p.risk.rho, p.cost.annual_capital_usd, p.cost.annual_operating_usd,
                     p.cost.per_tonne_treatment_usd, p.hon.min_support,
                     p.hon.divergence_threshold_scale, double(p.hon.max_order)})
        detail::fnv_mix(h, detail::num_str(v));
    for (double f : p.discharge.fractions) detail::fnv_mix(h, detail::num_str(f));
    for (const auto& [t, c] : p.cost.daily_cost_usd) {
        detail::fnv_mix(h, to_string(t));
        detail::fnv_mix(h, detail::num_str(c));
    }
    for (const auto& pr : p.eco.pairs) {
        detail::fnv_mix(h, pr.first);
        detail::fnv_mix(h, pr.second);
    }
    return detail::fnv_hex(h);
}

struct ScenarioResult {
    std::string name;
    std::map<std::string, double> port_risks;  // Eq. 5 cumulative risk per port
    PhysicalAdjacency adjacency;
    std::vector<RouteCostChange> cost_matrix;
    std::string dataset_hash;
    std::string config_hash;
};

inline ScenarioResult run_scenario(const Dataset& ds, const ScenarioConfig& cfg) {
    auto paths = extract_paths(ds, cfg.params.discharge, cfg.params.risk, cfg.threads);
    auto rules = grow_rules(paths, cfg.params.hon);
    PhysicalAdjacency adj;
    if (!rules.empty()) {
        auto net = build_hon_network(rules);
        adj = project_physical(net);
        if (cfg.normalization == Normalization::per_scenario) adj = normalize_edges(adj);
    }

    std::map<std::string, std::vector<double>> incoming;
    for (const auto& p : ds.ports) incoming[p.port_id] = {};
    for (const auto& [pair, v] : adj.entries) incoming[pair.second].push_back(v);

    ScenarioResult res;
    res.name = cfg.name;
    res.adjacency = std::move(adj);
    for (const auto& [pid, probs] : incoming) res.port_risks[pid] = cumulative_port_risk(probs);
    res.cost_matrix = cost_change_matrix(ds, cfg.params.cost);
    res.dataset_hash = dataset_hash(ds);
    res.config_hash = config_hash(cfg);
    return res;
}

struct RegionCostDelta {
    std::string origin_region;
    std::string dest_region;
    double compliance_baseline_usd = 0;
    double compliance_policy_usd = 0;
    double delta_usd = 0;
};

struct ComparisonReport {
    std::vector<RegionRiskSummary> regions;  // a = no-policy, b = policy
    std::vector<RegionCostDelta> cost_deltas;
};

inline ComparisonReport compare_scenarios(const ScenarioResult& a, const ScenarioResult& b,
                                          const Dataset& ds) {
    if (a.dataset_hash != b.dataset_hash)
        throw DatasetMismatch("scenarios were run on different datasets");
    ComparisonReport rep;
    rep.regions = region_risk_summary(a.port_risks, b.port_risks, ds);

    std::map<std::pair<std::string, std::string>, RegionCostDelta> deltas;
    for (const auto& rc : a.cost_matrix) {
        auto& d = deltas[{rc.origin_region, rc.dest_region}];
        d.origin_region = rc.origin_region;
        d.dest_region = rc.dest_region;
        d.compliance_baseline_usd = rc.compliance_usd;
    }
    for (const auto& rc : b.cost_matrix) {
        auto& d = deltas[{rc.origin_region, rc.dest_region}];
        d.origin_region = rc.origin_region;
        d.dest_region = rc.dest_region;
        d.compliance_policy_usd = rc.compliance_usd;
    }
    for (auto& [pair, d] : deltas) {
        d.delta_usd = d.compliance_policy_usd - d.compliance_baseline_usd;
        rep.cost_deltas.push_back(d);
    }
    return rep;
}

}  // namespace balhon
