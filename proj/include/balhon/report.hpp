#pragma once

// Report emitters. Fixed deterministic formatting so golden-file tests and
// cross-thread byte comparisons are stable.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "balhon/csv.hpp"
#include "balhon/inequality.hpp"
#include "balhon/scenario.hpp"

namespace balhon {

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_fixed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline void write_region_risk_csv(const std::vector<RegionRiskSummary>& rows,
                                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "region_id,risk_no_policy,risk_policy,reduction_pct,fold_change\n";
    for (const auto& r : rows) {
        if (r.empty_region) continue;
        out << csv::quote(r.region_id) << ',' << fmt_num(r.risk_no_policy) << ','
            << fmt_num(r.risk_policy) << ',';
        if (r.reduction_defined)
            out << fmt_num(r.reduction_pct) << ','
                << (std::isinf(r.fold_change) ? "inf" : fmt_num(r.fold_change));
        else
            out << ',';
        out << '\n';
    }
}

inline void write_cost_matrix_csv(const std::vector<RouteCostChange>& rows,
                                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "origin_region,dest_region,baseline_usd,compliance_usd,pct_change\n";
    for (const auto& r : rows)
        out << csv::quote(r.origin_region) << ',' << csv::quote(r.dest_region) << ','
            << fmt_num(r.baseline_usd) << ',' << fmt_num(r.compliance_usd) << ','
            << fmt_num(r.pct_change) << '\n';
}

inline void write_lorenz_csv(const LorenzCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "cum_income_share,cum_metric_share\n";
    for (const auto& p : curve.points)
        out << fmt_num(p.cum_income_share) << ',' << fmt_num(p.cum_metric_share) << '\n';
    out << "gini," << fmt_num(curve.gini) << '\n';
}

inline void write_manifest_json(const ScenarioConfig& cfg, const std::string& ds_hash,
                                const std::vector<std::string>& outputs,
                                const std::string& path) {
    nlohmann::json j;
    j["tool"] = "balhon";
    j["version"] = "0.1.0";
    j["scenario"] = cfg.name;
    j["normalization"] = to_string(cfg.normalization);
    j["config_hash"] = config_hash(cfg);
    j["dataset_hash"] = ds_hash;
    j["outputs"] = outputs;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

// Dataset CSVs in the exact ingest schemas, for `synth` and fixtures.
inline void write_dataset_csvs(const Dataset& ds, const std::string& dir) {
    {
        std::ofstream out(dir + "/ports.csv");
        if (!out) throw Error("cannot write " + dir + "/ports.csv");
        out << "port_id,name,country,region_id,lat,lon,temperature_c,salinity_ppt,ecoregion_id\n";
        for (const auto& p : ds.ports)
            out << p.port_id << ',' << csv::quote(p.name) << ',' << p.country << ','
                << p.region_id << ',' << fmt_num(p.latitude) << ',' << fmt_num(p.longitude)
                << ',' << fmt_num(p.temperature_c) << ',' << fmt_num(p.salinity_ppt) << ','
                << p.ecoregion_id << '\n';
    }
    {
        std::ofstream out(dir + "/voyages.csv");
        if (!out) throw Error("cannot write " + dir + "/voyages.csv");
        out << "voyage_id,vessel_id,vessel_type,dwt,origin_port,dest_port,sail_date,"
               "arrival_date,discharge_tonnes\n";
        for (const auto& v : ds.voyages)
            out << v.voyage_id << ',' << v.vessel_id << ',' << to_string(v.vessel_type) << ','
                << fmt_num(v.dwt) << ',' << v.origin_port << ',' << v.dest_port << ','
                << format_date(v.sail_day) << ',' << format_date(v.arrival_day) << ','
                << fmt_num(v.discharge_tonnes) << '\n';
    }
    {
        std::ofstream out(dir + "/regions.csv");
        if (!out) throw Error("cannot write " + dir + "/regions.csv");
        out << "region_id,region_name,gdp_per_capita_usd,is_sids,is_ldc\n";
        for (const auto& r : ds.regions)
            out << r.region_id << ',' << csv::quote(r.region_name) << ','
                << fmt_num(r.gdp_per_capita_usd) << ',' << (r.is_sids ? 1 : 0) << ','
                << (r.is_ldc ? 1 : 0) << '\n';
    }
}

}  // namespace balhon
