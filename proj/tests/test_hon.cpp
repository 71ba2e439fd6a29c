#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>

#include "balhon/hon.hpp"

using namespace balhon;

namespace {

// Three ports with identical environments in pairwise distinct,
// non-neighboring ecoregions; vessel V1 calls A -> B -> C.
Dataset chain_dataset() {
    Dataset ds;
    ds.regions.push_back({"R0", "r0", 10000, false, false});
    for (std::string id : {"A", "B", "C"}) {
        PortRecord p;
        p.port_id = id;
        p.name = id;
        p.country = "XXX";
        p.region_id = "R0";
        p.temperature_c = 15;
        p.salinity_ppt = 33;
        p.ecoregion_id = "E" + id;
        ds.ports.push_back(p);
    }
    auto leg = [](std::string id, std::string o, std::string d, std::int64_t sail,
                  std::int64_t arrive, double discharge) {
        VoyageRecord v;
        v.voyage_id = id;
        v.vessel_id = "V1";
        v.vessel_type = VesselType::bulker;
        v.dwt = 50000;
        v.origin_port = o;
        v.dest_port = d;
        v.sail_day = sail;
        v.arrival_day = arrive;
        v.discharge_tonnes = discharge;
        return v;
    };
    ds.voyages.push_back(leg("Y1", "A", "B", 0, 5, 10000));
    ds.voyages.push_back(leg("Y2", "B", "C", 7, 14, 8000));
    ds.build_indexes();
    return ds;
}

double eq2_weight(double discharge, double days, const RiskParams& p) {
    return p.rho * (-std::expm1(-p.lambda * discharge)) * std::exp(-p.mu * days) * p.alpha;
}

std::vector<PathObservation> repeat_path(std::vector<std::string> seq, double w, int times) {
    std::vector<PathObservation> out;
    for (int i = 0; i < times; ++i) out.push_back({seq, w});
    return out;
}

}  // namespace

TEST_CASE("extract_paths apportions discharge over the carry-forward horizon") {
    auto ds = chain_dataset();
    DischargeProfile profile;  // [0.5, 0.3, 0.2]
    RiskParams params;

    auto paths = extract_paths(ds, profile, params);
    REQUIRE(paths.size() == 3);

    // Uptake at A: two subsequent calls; profile truncated to [0.5, 0.3]
    // and rescaled by 1/0.8 so the original mass is preserved.
    CHECK(paths[0].port_sequence == PortContext{"A", "B"});
    CHECK_THAT(paths[0].weight,
               Catch::Matchers::WithinRel(eq2_weight(10000 * 0.625, 5, params), 1e-12));
    CHECK(paths[1].port_sequence == PortContext{"A", "B", "C"});
    CHECK_THAT(paths[1].weight,
               Catch::Matchers::WithinRel(eq2_weight(10000 * 0.375, 12, params), 1e-12));
    // Uptake at B: single call, full mass.
    CHECK(paths[2].port_sequence == PortContext{"B", "C"});
    CHECK_THAT(paths[2].weight,
               Catch::Matchers::WithinRel(eq2_weight(8000, 7, params), 1e-12));
}

TEST_CASE("extract_paths on a single-voyage vessel emits one full-discharge path") {
    auto ds = chain_dataset();
    ds.voyages.resize(1);
    auto paths = extract_paths(ds, DischargeProfile{}, RiskParams{});
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].port_sequence == PortContext{"A", "B"});
    CHECK_THAT(paths[0].weight,
               Catch::Matchers::WithinRel(eq2_weight(10000, 5, RiskParams{}), 1e-12));
}

TEST_CASE("zero-discharge voyages keep their paths with weight zero") {
    auto ds = chain_dataset();
    for (auto& v : ds.voyages) v.discharge_tonnes = 0;
    auto paths = extract_paths(ds, DischargeProfile{}, RiskParams{});
    REQUIRE(paths.size() == 3);
    for (const auto& p : paths) CHECK(p.weight == 0.0);
}

TEST_CASE("same-ecoregion legs carry zero weight") {
    auto ds = chain_dataset();
    for (auto& p : ds.ports) p.ecoregion_id = "E0";
    auto paths = extract_paths(ds, DischargeProfile{}, RiskParams{});
    for (const auto& p : paths) CHECK(p.weight == 0.0);
}

TEST_CASE("declared neighboring ecoregions also gate to zero") {
    auto ds = chain_dataset();
    ds.params.eco.add("EA", "EB");
    auto paths = extract_paths(ds, DischargeProfile{}, RiskParams{});
    REQUIRE(paths.size() == 3);
    CHECK(paths[0].weight == 0.0);  // A -> B gated
    CHECK(paths[1].weight > 0.0);   // A -> C not neighboring
}

TEST_CASE("grow_rules keeps genuinely second-order dependencies") {
    // B -> C always follows A -> B; B -> E always follows D -> B.
    auto paths = repeat_path({"A", "B", "C"}, 0.5, 10);
    auto more = repeat_path({"D", "B", "E"}, 0.5, 10);
    paths.insert(paths.end(), more.begin(), more.end());

    HonParams hp;  // max_order 3, min_support 5, scale 1
    auto rules = grow_rules(paths, hp);

    std::map<std::pair<std::string, std::string>, double> second_order;
    for (const auto& r : rules)
        if (r.context.size() == 2)
            second_order[{r.context[0], r.next_port}] = r.probability;

    REQUIRE(second_order.size() == 2);
    CHECK_THAT(second_order.at({"A", "C"}), Catch::Matchers::WithinAbs(1.0, 1e-9));
    CHECK_THAT(second_order.at({"D", "E"}), Catch::Matchers::WithinAbs(1.0, 1e-9));

    // The ambiguous first-order view of B splits evenly.
    for (const auto& r : rules)
        if (r.context == PortContext{"B"})
            CHECK_THAT(r.probability, Catch::Matchers::WithinAbs(0.5, 1e-9));
}

TEST_CASE("memoryless corpus yields only first-order rules") {
    std::mt19937 rng(23);
    const std::vector<std::string> ports = {"A", "B", "C", "D", "E"};
    std::uniform_int_distribution<std::size_t> up(0, ports.size() - 1);
    std::vector<PathObservation> paths;
    for (int i = 0; i < 10000; ++i) {
        PortContext seq;
        seq.push_back(ports[up(rng)]);
        while (seq.size() < 4) {
            auto next = ports[up(rng)];
            if (next == seq.back()) continue;
            seq.push_back(next);
        }
        paths.push_back({seq, 1.0});
    }
    auto rules = grow_rules(paths, HonParams{});
    for (const auto& r : rules) CHECK(r.context.size() == 1);
}

TEST_CASE("max_order=1 reproduces the first-order transition table") {
    std::mt19937 rng(29);
    const std::vector<std::string> ports = {"A", "B", "C", "D"};
    std::uniform_int_distribution<std::size_t> up(0, ports.size() - 1);
    std::uniform_real_distribution<double> uw(0.0, 0.3);
    std::vector<PathObservation> paths;
    std::map<std::pair<std::string, std::string>, double> log_complement;
    for (int i = 0; i < 500; ++i) {
        PortContext seq;
        seq.push_back(ports[up(rng)]);
        while (seq.size() < 3) {
            auto next = ports[up(rng)];
            if (next == seq.back()) continue;
            seq.push_back(next);
        }
        double w = uw(rng);
        paths.push_back({seq, w});
        for (std::size_t t = 1; t < seq.size(); ++t)
            log_complement[{seq[t - 1], seq[t]}] += std::log1p(-w);
    }

    HonParams hp;
    hp.max_order = 1;
    auto rules = grow_rules(paths, hp);
    for (const auto& r : rules) REQUIRE(r.context.size() == 1);

    auto adj = project_physical(build_hon_network(rules));
    for (const auto& [pair, lc] : log_complement) {
        double expected = -std::expm1(lc);  // complement product over transitions
        REQUIRE_THAT(adj.at(pair.first, pair.second),
                     Catch::Matchers::WithinAbs(expected, 1e-12));
    }
}

TEST_CASE("rewiring targets the highest-order matching context") {
    auto mk = [](PortContext ctx, std::string next) {
        HonRule r;
        r.context = std::move(ctx);
        r.next_port = std::move(next);
        r.weight = 1;
        r.probability = 1;
        r.risk = 0.5;
        return r;
    };
    std::vector<HonRule> rules = {mk({"A"}, "B"), mk({"B"}, "C"), mk({"C"}, "A"),
                                  mk({"A", "B"}, "C"), mk({"B", "C"}, "A")};
    auto net = build_hon_network(rules);

    bool found = false;
    for (const auto& e : net.edges)
        if (e.source == PortContext{"A", "B"}) {
            // full history (A,B,C); (B,C) is the longest valid suffix
            CHECK(e.target == PortContext{"B", "C"});
            found = true;
        }
    CHECK(found);
}

TEST_CASE("second-order contexts become distinct states") {
    auto paths = repeat_path({"A", "B", "C"}, 0.5, 10);
    auto more = repeat_path({"D", "B", "E"}, 0.5, 10);
    paths.insert(paths.end(), more.begin(), more.end());
    auto net = build_hon_network(grow_rules(paths, HonParams{}));

    CHECK(net.nodes.count(PortContext{"A", "B"}) == 1);
    CHECK(net.nodes.count(PortContext{"D", "B"}) == 1);
    std::map<PortContext, std::string> out_port;
    for (const auto& e : net.edges)
        if (e.source.size() == 2) out_port[e.source] = e.target.back();
    CHECK(out_port.at(PortContext{"A", "B"}) == "C");
    CHECK(out_port.at(PortContext{"D", "B"}) == "E");
}

TEST_CASE("terminal ports materialize as first-order sink states") {
    HonRule r;
    r.context = {"A", "B"};
    r.next_port = "C";
    r.weight = 1;
    r.probability = 1;
    auto net = build_hon_network({r});
    REQUIRE(net.edges.size() == 1);
    CHECK(net.edges[0].target == PortContext{"C"});
    CHECK(net.nodes.count(PortContext{"C"}) == 1);
}

TEST_CASE("malformed rules are rejected") {
    HonRule r;
    r.context = {};
    r.next_port = "C";
    r.weight = 1;
    r.probability = 1;
    CHECK_THROWS_AS(build_hon_network({r}), DanglingRule);
}

TEST_CASE("projection averages edges sharing a physical pair") {
    HonNetwork net;
    net.edges.push_back({{"A", "B"}, {"C"}, 0.4, 1.0});
    net.edges.push_back({{"D", "B"}, {"C"}, 0.2, 1.0});
    auto adj = project_physical(net);
    CHECK_THAT(adj.at("B", "C"), Catch::Matchers::WithinAbs(0.3, 1e-15));
    CHECK(adj.at("A", "B") == 0.0);  // absent pair
}

TEST_CASE("single-edge projection is the identity") {
    HonNetwork net;
    net.edges.push_back({{"A"}, {"B"}, 0.7, 1.0});
    auto adj = project_physical(net);
    CHECK(adj.at("A", "B") == 0.7);
    CHECK(adj.max_edge == 0.7);
}

TEST_CASE("normalize_edges") {
    PhysicalAdjacency adj;
    adj.entries[{"A", "B"}] = 0.2;
    adj.entries[{"B", "C"}] = 0.1;
    adj.entries[{"C", "A"}] = 0.05;
    adj.max_edge = 0.2;

    auto norm = normalize_edges(adj);
    CHECK(norm.normalized);
    CHECK(norm.at("A", "B") == 1.0);
    CHECK(norm.at("B", "C") == 0.5);
    CHECK(norm.at("C", "A") == 0.25);

    SECTION("double normalization is rejected") {
        CHECK_THROWS_AS(normalize_edges(norm), InvariantViolation);
    }
    SECTION("all-zero matrix passes through") {
        PhysicalAdjacency zero;
        zero.entries[{"A", "B"}] = 0.0;
        auto out = normalize_edges(zero);
        CHECK(out.normalized);
        CHECK(out.at("A", "B") == 0.0);
    }
    SECTION("single nonzero entry becomes 1") {
        PhysicalAdjacency one;
        one.entries[{"A", "B"}] = 0.37;
        one.max_edge = 0.37;
        CHECK(normalize_edges(one).at("A", "B") == 1.0);
    }
}

TEST_CASE("conditional probabilities sum to 1 for every kept context") {
    for (std::uint64_t seed : {1, 2, 3}) {
        auto ds = synth_dataset(seed, 12, 400);
        auto paths = extract_paths(ds, ds.params.discharge, ds.params.risk);
        auto rules = grow_rules(paths, ds.params.hon);
        std::map<PortContext, double> sums;
        for (const auto& r : rules) sums[r.context] += r.probability;
        REQUIRE(!sums.empty());
        for (const auto& [ctx, s] : sums)
            REQUIRE_THAT(s, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("flow conservation under higher-order rewiring") {
    for (std::uint64_t seed : {1, 5, 9}) {
        auto ds = synth_dataset(seed, 10, 300);
        auto paths = extract_paths(ds, ds.params.discharge, ds.params.risk);
        auto rules = grow_rules(paths, ds.params.hon);
        auto net = build_hon_network(rules);

        std::map<std::string, double> before, after;
        for (const auto& r : rules) before[r.context.back()] += r.risk;
        for (const auto& e : net.edges) after[e.source.back()] += e.weight;
        REQUIRE(before.size() == after.size());
        for (const auto& [port, w] : before)
            REQUIRE_THAT(after.at(port), Catch::Matchers::WithinAbs(w, 1e-9));
    }
}

TEST_CASE("path extraction is schedule-independent") {
    auto ds = synth_dataset(4, 20, 500);
    auto one = extract_paths(ds, ds.params.discharge, ds.params.risk, 1);
    auto four = extract_paths(ds, ds.params.discharge, ds.params.risk, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        REQUIRE(one[i].port_sequence == four[i].port_sequence);
        REQUIRE(one[i].weight == four[i].weight);
    }
}

TEST_CASE("rule dump format") {
    auto rules = grow_rules(repeat_path({"A", "B"}, 0.5, 3), HonParams{});
    std::ostringstream os;
    dump_rules(rules, os);
    CHECK(os.str().find("context|next|support|probability") == 0);
    CHECK(os.str().find("A|B|1.5|1") != std::string::npos);
}
