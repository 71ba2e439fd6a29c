// balhon: ballast-water invasion risk and compliance-cost simulator.
// Subcommands: run | synth | gini | validate.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "balhon/balhon.hpp"

namespace fs = std::filesystem;

namespace {

struct RunArgs {
    std::string ports, voyages, regions, scenario, compare, out = ".";
    bool strict = false;
    unsigned threads = 0;
};

int cmd_run(const RunArgs& a) {
    auto cfg = balhon::load_scenario(a.scenario);
    cfg.threads = a.threads;
    auto ds = balhon::load_dataset(a.ports, a.voyages, a.regions, cfg.params, a.strict);
    for (const auto& r : ds.rejected)
        std::cerr << "rejected " << r.file << " row " << r.row << ": " << r.reason << "\n";
    std::cout << "ports=" << ds.ports.size() << " voyages=" << ds.voyages.size()
              << " regions=" << ds.regions.size() << " rejected=" << ds.rejected.size() << "\n";

    auto res = balhon::run_scenario(ds, cfg);

    fs::create_directories(a.out);
    const std::string region_csv = a.out + "/region_risk.csv";
    const std::string cost_csv = a.out + "/cost_matrix.csv";
    const std::string lorenz_csv = a.out + "/lorenz.csv";
    const std::string manifest = a.out + "/manifest.json";

    std::vector<balhon::RegionRiskSummary> region_rows;
    std::vector<balhon::RegionDatum> lorenz_data;
    if (!a.compare.empty()) {
        auto cfg2 = balhon::load_scenario(a.compare);
        cfg2.threads = a.threads;
        auto res2 = balhon::run_scenario(ds, cfg2);
        auto rep = balhon::compare_scenarios(res, res2, ds);
        region_rows = rep.regions;
        for (const auto& r : rep.regions) {
            if (r.empty_region) continue;
            lorenz_data.push_back({r.region_id, ds.regions[ds.region_index.at(r.region_id)].gdp_per_capita_usd,
                                   r.risk_no_policy - r.risk_policy});
        }
    } else {
        // Single scenario: report its region means; no reduction columns.
        std::map<std::string, double> same = res.port_risks;
        region_rows = balhon::region_risk_summary(res.port_risks, same, ds);
        for (auto& r : region_rows) r.reduction_defined = false;
        for (const auto& r : region_rows) {
            if (r.empty_region) continue;
            lorenz_data.push_back({r.region_id, ds.regions[ds.region_index.at(r.region_id)].gdp_per_capita_usd,
                                   r.risk_no_policy});
        }
    }

    balhon::write_region_risk_csv(region_rows, region_csv);
    balhon::write_cost_matrix_csv(res.cost_matrix, cost_csv);
    auto curve = balhon::lorenz_points(lorenz_data);
    balhon::write_lorenz_csv(curve, lorenz_csv);
    balhon::write_manifest_json(cfg, res.dataset_hash,
                                {"region_risk.csv", "cost_matrix.csv", "lorenz.csv"}, manifest);
    std::cout << "wrote " << a.out << "/{region_risk.csv,cost_matrix.csv,lorenz.csv,manifest.json}"
              << "\n";
    return 0;
}

int cmd_synth(std::uint64_t seed, std::size_t n_ports, std::size_t n_voyages,
              const std::string& out) {
    auto ds = balhon::synth_dataset(seed, n_ports, n_voyages);
    fs::create_directories(out);
    balhon::write_dataset_csvs(ds, out);
    std::cout << "wrote " << out << "/{ports.csv,voyages.csv,regions.csv}\n";
    return 0;
}

int cmd_gini(const std::string& data, const std::string& metric_col,
             const std::string& income_col, const std::string& out, const std::string& sort) {
    auto table = balhon::csv::read_file(data);
    std::size_t c_id = table.col_index.count("region_id") ? table.col("region_id", data) : 0;
    std::size_t c_metric = table.col(metric_col, data);
    std::size_t c_income = table.col(income_col, data);
    std::vector<balhon::RegionDatum> rows;
    for (const auto& r : table.rows) {
        double metric = balhon::detail::to_double(r.at(c_metric), metric_col);
        rows.push_back({r.at(c_id), balhon::detail::to_double(r.at(c_income), income_col),
                        std::abs(metric)});
    }
    auto curve = balhon::lorenz_points(
        rows, sort == "income" ? balhon::LorenzSort::income : balhon::LorenzSort::intensity);
    if (!out.empty()) balhon::write_lorenz_csv(curve, out);
    std::cout << balhon::fmt_fixed6(curve.gini) << "\n";
    return 0;
}

int cmd_validate(const RunArgs& a) {
    auto cfg = balhon::load_scenario(a.scenario);
    auto ds = balhon::load_dataset(a.ports, a.voyages, a.regions, cfg.params, a.strict);
    for (const auto& r : ds.rejected)
        std::cerr << "rejected " << r.file << " row " << r.row << ": " << r.reason << "\n";
    std::cout << "ports=" << ds.ports.size() << " voyages=" << ds.voyages.size()
              << " regions=" << ds.regions.size() << " rejected=" << ds.rejected.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ballast-water invasion risk and compliance cost simulator"};
    app.set_config("--config");
    app.require_subcommand(1);

    RunArgs ra;
    auto* run = app.add_subcommand("run", "run a scenario through the full pipeline");
    run->add_option("--ports", ra.ports)->required();
    run->add_option("--voyages", ra.voyages)->required();
    run->add_option("--regions", ra.regions)->required();
    run->add_option("--scenario", ra.scenario)->required();
    run->add_option("--compare", ra.compare);
    run->add_option("--out", ra.out);
    run->add_flag("--strict", ra.strict);
    run->add_option("--threads", ra.threads)->envname("BALHON_THREADS");

    std::uint64_t seed = 1;
    std::size_t n_ports = 10, n_voyages = 100;
    std::string synth_out = ".";
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--seed", seed);
    synth->add_option("--ports", n_ports);
    synth->add_option("--voyages", n_voyages);
    synth->add_option("--out", synth_out);

    std::string gdata, gmetric, gincome, gout = "lorenz.csv", gsort = "intensity";
    auto* gini = app.add_subcommand("gini", "Lorenz curve and Gini coefficient");
    gini->add_option("--data", gdata)->required();
    gini->add_option("--metric-col", gmetric)->required();
    gini->add_option("--income-col", gincome)->required();
    gini->add_option("--out", gout);
    gini->add_option("--sort", gsort)->check(CLI::IsMember({"intensity", "income"}));

    RunArgs va;
    auto* validate = app.add_subcommand("validate", "load and validate inputs");
    validate->add_option("--ports", va.ports)->required();
    validate->add_option("--voyages", va.voyages)->required();
    validate->add_option("--regions", va.regions)->required();
    validate->add_option("--scenario", va.scenario)->required();
    validate->add_flag("--strict", va.strict);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(ra);
        if (synth->parsed()) {
            if (n_ports < 2) {
                std::cerr << "error: need at least 2 ports\n";
                return 1;
            }
            return cmd_synth(seed, n_ports, n_voyages, synth_out);
        }
        if (gini->parsed()) return cmd_gini(gdata, gmetric, gincome, gout, gsort);
        if (validate->parsed()) return cmd_validate(va);
    } catch (const balhon::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
