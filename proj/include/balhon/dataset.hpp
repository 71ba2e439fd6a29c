#pragma once

// Input data model: ports, voyages, regions, parameters. Everything is
// validated at load time; the resulting Dataset is immutable by convention
// and safe to share across threads.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "balhon/csv.hpp"
#include "balhon/errors.hpp"

namespace balhon {

enum class VesselType { containership, bulker, tanker, other };

inline std::string to_string(VesselType t) {
    switch (t) {
        case VesselType::containership: return "containership";
        case VesselType::bulker: return "bulker";
        case VesselType::tanker: return "tanker";
        default: return "other";
    }
}

inline VesselType parse_vessel_type(const std::string& s) {
    if (s == "containership") return VesselType::containership;
    if (s == "bulker") return VesselType::bulker;
    if (s == "tanker") return VesselType::tanker;
    if (s == "other") return VesselType::other;
    throw InvariantViolation("unknown vessel_type '" + s + "'");
}

// Days since 1970-01-01 for an ISO-8601 calendar date.
inline std::int64_t parse_date(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    char dash1 = 0, dash2 = 0;
    std::istringstream ss(iso);
    ss >> y >> dash1 >> m >> dash2 >> d;
    if (!ss || dash1 != '-' || dash2 != '-')
        throw InvariantViolation("bad date '" + iso + "'");
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                    std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) throw InvariantViolation("bad date '" + iso + "'");
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

inline std::string format_date(std::int64_t epoch_days) {
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{epoch_days}}};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

struct PortRecord {
    std::string port_id;
    std::string name;
    std::string country;     // ISO-3166 alpha-3
    std::string region_id;
    double latitude = 0;
    double longitude = 0;
    double temperature_c = 0;  // annual mean surface
    double salinity_ppt = 0;
    std::string ecoregion_id;
};

struct VoyageRecord {
    std::string voyage_id;
    std::string vessel_id;
    VesselType vessel_type = VesselType::other;
    double dwt = 0;
    std::string origin_port;
    std::string dest_port;
    std::int64_t sail_day = 0;     // epoch days
    std::int64_t arrival_day = 0;  // epoch days
    double discharge_tonnes = 0;   // at dest_port, may be zero
};

inline double voyage_duration(const VoyageRecord& v) {
    return double(v.arrival_day - v.sail_day);
}

struct RegionRecord {
    std::string region_id;
    std::string region_name;
    double gdp_per_capita_usd = 0;
    bool is_sids = false;
    bool is_ldc = false;
};

struct RiskParams {
    double lambda = 3.22e-6;  // per-tonne introduction potential
    double mu = 0.02;         // per-day mortality
    double delta_T = 2.0;     // degC
    double delta_S = 10.0;    // ppt
    double alpha = 1.0;       // establishment ceiling, no canonical default
    double rho = 1.0;         // survival under treatment; IMO BWM = 0.0085

    void validate() const {
        if (lambda < 0 || mu < 0 || delta_T < 0 || delta_S < 0)
            throw InvariantViolation("risk params must be nonnegative");
        if (rho < 0 || rho > 1) throw InvariantViolation("rho must be in [0,1]");
        if (alpha <= 0 || alpha > 1) throw InvariantViolation("alpha must be in (0,1]");
    }
};

struct CostParams {
    double annual_capital_usd = 49000.0;
    double annual_operating_usd = 13500.0;
    double per_tonne_treatment_usd = 0.135;
    std::map<VesselType, double> daily_cost_usd;

    void validate() const {
        if (annual_capital_usd < 0 || annual_operating_usd < 0 || per_tonne_treatment_usd < 0)
            throw InvariantViolation("cost params must be nonnegative");
        for (const auto& [t, c] : daily_cost_usd)
            if (c < 0) throw InvariantViolation("daily cost must be nonnegative");
    }
};

// How ballast sourced at one port is split over the next calling ports.
struct DischargeProfile {
    std::vector<double> fractions{0.5, 0.3, 0.2};

    void validate() const {
        double sum = 0;
        for (double f : fractions) {
            if (f < 0) throw InvariantViolation("discharge fractions must be nonnegative");
            sum += f;
        }
        if (sum > 1.0 + 1e-12) throw InvariantViolation("discharge fractions must sum to <= 1");
        if (fractions.empty()) throw InvariantViolation("discharge profile must be nonempty");
    }
};

struct HonParams {
    int max_order = 3;
    double min_support = 5.0;  // compared against summed path weight
    double divergence_threshold_scale = 1.0;

    void validate() const {
        if (max_order < 1) throw InvariantViolation("max_order must be >= 1");
        if (min_support < 1) throw InvariantViolation("min_support must be >= 1");
        if (divergence_threshold_scale <= 0)
            throw InvariantViolation("divergence_threshold_scale must be > 0");
    }
};

struct EcoregionAdjacency {
    std::set<std::pair<std::string, std::string>> pairs;  // stored sorted

    void add(const std::string& a, const std::string& b) {
        if (a == b) return;  // identity handled by the same-ecoregion check
        pairs.emplace(std::min(a, b), std::max(a, b));
    }
    bool neighboring(const std::string& a, const std::string& b) const {
        if (a == b) return true;
        return pairs.count({std::min(a, b), std::max(a, b)}) > 0;
    }
};

struct ParamsBundle {
    RiskParams risk;
    CostParams cost;
    DischargeProfile discharge;
    HonParams hon;
    EcoregionAdjacency eco;
};

struct RejectedRow {
    std::string file;
    std::size_t row;  // 1-based data row number
    std::string reason;
};

struct Dataset {
    std::vector<PortRecord> ports;
    std::vector<VoyageRecord> voyages;
    std::vector<RegionRecord> regions;
    ParamsBundle params;
    std::vector<RejectedRow> rejected;

    std::unordered_map<std::string, std::size_t> port_index;
    std::unordered_map<std::string, std::size_t> region_index;

    void build_indexes() {
        port_index.clear();
        region_index.clear();
        for (std::size_t i = 0; i < ports.size(); ++i) port_index[ports[i].port_id] = i;
        for (std::size_t i = 0; i < regions.size(); ++i) region_index[regions[i].region_id] = i;
    }

    const PortRecord& port(const std::string& id) const {
        auto it = port_index.find(id);
        if (it == port_index.end()) throw UnknownPort("unknown port '" + id + "'");
        return ports[it->second];
    }

    bool has_region(const std::string& id) const { return region_index.count(id) > 0; }
};

namespace detail {

inline double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvariantViolation("bad numeric value '" + s + "' for " + what);
    }
}

inline void check_port(const PortRecord& p, const Dataset& ds) {
    if (p.temperature_c < -5 || p.temperature_c > 45)
        throw InvariantViolation("temperature out of [-5,45] for port " + p.port_id);
    if (p.salinity_ppt < 0 || p.salinity_ppt > 45)
        throw InvariantViolation("salinity out of [0,45] for port " + p.port_id);
    if (!ds.has_region(p.region_id))
        throw InvariantViolation("port " + p.port_id + " references unknown region " + p.region_id);
}

inline void check_voyage(const VoyageRecord& v, const Dataset& ds) {
    if (ds.port_index.find(v.origin_port) == ds.port_index.end())
        throw UnknownPort("voyage " + v.voyage_id + " references unknown port " + v.origin_port);
    if (ds.port_index.find(v.dest_port) == ds.port_index.end())
        throw UnknownPort("voyage " + v.voyage_id + " references unknown port " + v.dest_port);
    if (v.origin_port == v.dest_port)
        throw InvariantViolation("voyage " + v.voyage_id + " has origin == dest");
    if (v.arrival_day < v.sail_day)
        throw InvariantViolation("voyage " + v.voyage_id + " arrives before sailing");
    if (v.discharge_tonnes < 0 || v.discharge_tonnes > v.dwt)
        throw InvariantViolation("voyage " + v.voyage_id + " discharge outside [0, dwt]");
}

}  // namespace detail

inline ParamsBundle parse_params_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {
        "lambda", "mu", "delta_T", "delta_S", "alpha", "rho",
        "annual_capital_usd", "annual_operating_usd", "per_tonne_treatment_usd",
        "daily_cost_usd", "fractions", "max_order", "min_support",
        "divergence_threshold_scale", "ecoregion_neighbors"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw InvariantViolation("unknown params key '" + it.key() + "'");

    ParamsBundle p;
    auto num = [&](const char* key, double& target) {
        if (j.contains(key)) target = j.at(key).get<double>();
    };
    num("lambda", p.risk.lambda);
    num("mu", p.risk.mu);
    num("delta_T", p.risk.delta_T);
    num("delta_S", p.risk.delta_S);
    num("alpha", p.risk.alpha);
    num("rho", p.risk.rho);
    num("annual_capital_usd", p.cost.annual_capital_usd);
    num("annual_operating_usd", p.cost.annual_operating_usd);
    num("per_tonne_treatment_usd", p.cost.per_tonne_treatment_usd);
    if (j.contains("daily_cost_usd"))
        for (auto it = j.at("daily_cost_usd").begin(); it != j.at("daily_cost_usd").end(); ++it)
            p.cost.daily_cost_usd[parse_vessel_type(it.key())] = it.value().get<double>();
    if (j.contains("fractions"))
        p.discharge.fractions = j.at("fractions").get<std::vector<double>>();
    if (j.contains("max_order")) p.hon.max_order = j.at("max_order").get<int>();
    if (j.contains("min_support")) p.hon.min_support = j.at("min_support").get<double>();
    num("divergence_threshold_scale", p.hon.divergence_threshold_scale);
    if (j.contains("ecoregion_neighbors"))
        for (const auto& pair : j.at("ecoregion_neighbors"))
            p.eco.add(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());

    p.risk.validate();
    p.cost.validate();
    p.discharge.validate();
    p.hon.validate();
    return p;
}

inline ParamsBundle load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    return parse_params_json(j);
}

// Loads and cross-links all inputs. Invalid rows are rejected with a recorded
// reason; strict=true promotes any rejection to a fatal error.
inline Dataset load_dataset(const std::string& ports_file, const std::string& voyages_file,
                            const std::string& regions_file, const ParamsBundle& params,
                            bool strict = false) {
    Dataset ds;
    ds.params = params;

    auto regions = csv::read_file(regions_file);
    std::size_t c_rid = regions.col("region_id", regions_file);
    std::size_t c_rname = regions.col("region_name", regions_file);
    std::size_t c_gdp = regions.col("gdp_per_capita_usd", regions_file);
    std::size_t c_sids = regions.col("is_sids", regions_file);
    std::size_t c_ldc = regions.col("is_ldc", regions_file);
    for (std::size_t i = 0; i < regions.rows.size(); ++i) {
        const auto& r = regions.rows[i];
        RegionRecord reg;
        reg.region_id = r.at(c_rid);
        reg.region_name = r.at(c_rname);
        reg.gdp_per_capita_usd = detail::to_double(r.at(c_gdp), "gdp_per_capita_usd");
        reg.is_sids = r.at(c_sids) == "1" || r.at(c_sids) == "true";
        reg.is_ldc = r.at(c_ldc) == "1" || r.at(c_ldc) == "true";
        ds.regions.push_back(std::move(reg));
    }
    ds.build_indexes();

    auto ports = csv::read_file(ports_file);
    std::size_t c_pid = ports.col("port_id", ports_file);
    std::size_t c_pname = ports.col("name", ports_file);
    std::size_t c_country = ports.col("country", ports_file);
    std::size_t c_preg = ports.col("region_id", ports_file);
    std::size_t c_lat = ports.col("lat", ports_file);
    std::size_t c_lon = ports.col("lon", ports_file);
    std::size_t c_temp = ports.col("temperature_c", ports_file);
    std::size_t c_sal = ports.col("salinity_ppt", ports_file);
    std::size_t c_eco = ports.col("ecoregion_id", ports_file);
    for (std::size_t i = 0; i < ports.rows.size(); ++i) {
        const auto& r = ports.rows[i];
        try {
            PortRecord p;
            p.port_id = r.at(c_pid);
            p.name = r.at(c_pname);
            p.country = r.at(c_country);
            p.region_id = r.at(c_preg);
            p.latitude = detail::to_double(r.at(c_lat), "lat");
            p.longitude = detail::to_double(r.at(c_lon), "lon");
            p.temperature_c = detail::to_double(r.at(c_temp), "temperature_c");
            p.salinity_ppt = detail::to_double(r.at(c_sal), "salinity_ppt");
            p.ecoregion_id = r.at(c_eco);
            if (ds.port_index.count(p.port_id))
                throw InvariantViolation("duplicate port_id " + p.port_id);
            detail::check_port(p, ds);
            ds.port_index[p.port_id] = ds.ports.size();
            ds.ports.push_back(std::move(p));
        } catch (const Error& e) {
            if (strict)
                throw InvariantViolation(ports_file + " row " + std::to_string(i + 1) + ": " +
                                         e.what());
            ds.rejected.push_back({ports_file, i + 1, e.what()});
        }
    }

    auto voyages = csv::read_file(voyages_file);
    std::size_t c_vid = voyages.col("voyage_id", voyages_file);
    std::size_t c_ves = voyages.col("vessel_id", voyages_file);
    std::size_t c_vt = voyages.col("vessel_type", voyages_file);
    std::size_t c_dwt = voyages.col("dwt", voyages_file);
    std::size_t c_orig = voyages.col("origin_port", voyages_file);
    std::size_t c_dest = voyages.col("dest_port", voyages_file);
    std::size_t c_sail = voyages.col("sail_date", voyages_file);
    std::size_t c_arr = voyages.col("arrival_date", voyages_file);
    std::size_t c_dis = voyages.col("discharge_tonnes", voyages_file);
    for (std::size_t i = 0; i < voyages.rows.size(); ++i) {
        const auto& r = voyages.rows[i];
        try {
            VoyageRecord v;
            v.voyage_id = r.at(c_vid);
            v.vessel_id = r.at(c_ves);
            v.vessel_type = parse_vessel_type(r.at(c_vt));
            v.dwt = detail::to_double(r.at(c_dwt), "dwt");
            v.origin_port = r.at(c_orig);
            v.dest_port = r.at(c_dest);
            v.sail_day = parse_date(r.at(c_sail));
            v.arrival_day = parse_date(r.at(c_arr));
            v.discharge_tonnes = detail::to_double(r.at(c_dis), "discharge_tonnes");
            detail::check_voyage(v, ds);
            ds.voyages.push_back(std::move(v));
        } catch (const Error& e) {
            if (strict)
                throw InvariantViolation(voyages_file + " row " + std::to_string(i + 1) + ": " +
                                         e.what());
            ds.rejected.push_back({voyages_file, i + 1, e.what()});
        }
    }

    if (ds.ports.empty()) throw EmptyDataset(ports_file + ": no valid ports");
    if (ds.voyages.empty()) throw EmptyDataset(voyages_file + ": no valid voyages");
    return ds;
}

inline Dataset load_dataset(const std::string& ports_file, const std::string& voyages_file,
                            const std::string& regions_file, const std::string& params_file,
                            bool strict = false) {
    return load_dataset(ports_file, voyages_file, regions_file, load_params(params_file), strict);
}

// Deterministic synthetic dataset: a desk-scale stand-in for proprietary
// voyage data. Vessels make chained multi-leg itineraries so carry-forward
// paths exist. Ports span 4 ecoregions and 4 regions.
inline Dataset synth_dataset(std::uint64_t seed, std::size_t n_ports, std::size_t n_voyages) {
    if (n_ports < 2) throw InvariantViolation("synth_dataset needs n_ports >= 2");
    std::mt19937_64 rng(seed);
    Dataset ds;

    const std::size_t n_regions = std::min<std::size_t>(4, n_ports);
    for (std::size_t r = 0; r < n_regions; ++r) {
        RegionRecord reg;
        reg.region_id = "R" + std::to_string(r);
        reg.region_name = "Region " + std::to_string(r);
        reg.gdp_per_capita_usd = 2000.0 + 15000.0 * double(r);
        reg.is_sids = (r == 1);
        reg.is_ldc = (r == 2);
        ds.regions.push_back(std::move(reg));
    }

    const std::size_t n_eco = std::min<std::size_t>(4, n_ports);
    std::uniform_real_distribution<double> utemp(2.0, 30.0);
    std::uniform_real_distribution<double> usal(20.0, 38.0);
    std::uniform_real_distribution<double> ulat(-60.0, 60.0);
    std::uniform_real_distribution<double> ulon(-180.0, 180.0);
    for (std::size_t i = 0; i < n_ports; ++i) {
        PortRecord p;
        p.port_id = "P" + std::to_string(i);
        p.name = "Port " + std::to_string(i);
        p.country = "C" + std::to_string(i % 26);
        p.region_id = "R" + std::to_string(i % n_regions);
        p.latitude = ulat(rng);
        p.longitude = ulon(rng);
        p.temperature_c = utemp(rng);
        p.salinity_ppt = usal(rng);
        p.ecoregion_id = "E" + std::to_string(i % n_eco);
        ds.ports.push_back(std::move(p));
    }

    // Itineraries: each vessel walks ~6 legs with consecutive dates.
    std::uniform_int_distribution<std::size_t> uport(0, n_ports - 1);
    std::uniform_int_distribution<int> udur(2, 20);
    std::uniform_int_distribution<int> ustay(0, 3);
    std::uniform_real_distribution<double> udis(0.0, 1.0);
    std::uniform_int_distribution<int> utype(0, 3);
    std::size_t voyage_count = 0;
    std::size_t vessel = 0;
    std::int64_t year_start = parse_date("2019-01-01");
    while (voyage_count < n_voyages) {
        std::string vessel_id = "V" + std::to_string(vessel++);
        VesselType vt = static_cast<VesselType>(utype(rng));
        double dwt = 20000.0 + 80000.0 * udis(rng);
        std::size_t here = uport(rng);
        std::int64_t day = year_start + std::int64_t(30 * (vessel % 10));
        std::size_t legs = 3 + (rng() % 6);
        for (std::size_t l = 0; l < legs && voyage_count < n_voyages; ++l) {
            std::size_t next = uport(rng);
            if (next == here) next = (next + 1) % n_ports;
            VoyageRecord v;
            v.voyage_id = "Y" + std::to_string(voyage_count);
            v.vessel_id = vessel_id;
            v.vessel_type = vt;
            v.dwt = dwt;
            v.origin_port = ds.ports[here].port_id;
            v.dest_port = ds.ports[next].port_id;
            v.sail_day = day;
            int dur = udur(rng);
            v.arrival_day = day + dur;
            double frac = udis(rng);
            v.discharge_tonnes = frac < 0.15 ? 0.0 : 0.4 * frac * dwt;
            ds.voyages.push_back(std::move(v));
            ++voyage_count;
            here = next;
            day = v.arrival_day + ustay(rng);
        }
    }

    ds.params.cost.daily_cost_usd = {{VesselType::containership, 30000.0},
                                     {VesselType::bulker, 10000.0},
                                     {VesselType::tanker, 24000.0},
                                     {VesselType::other, 15000.0}};
    ds.build_indexes();
    return ds;
}

}  // namespace balhon
