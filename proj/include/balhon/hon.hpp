#pragma once

// Higher-order network of species flow. Ballast carry-forward paths are
// extracted per vessel, variable-order dependency rules are grown with a
// KL-divergence test against the parent context, rules are rewired into a
// higher-order graph, and the graph is projected back onto a physical
// port x port adjacency.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "balhon/aggregate.hpp"
#include "balhon/dataset.hpp"
#include "balhon/errors.hpp"
#include "balhon/riskcore.hpp"

namespace balhon {

using PortContext = std::vector<std::string>;  // oldest first, current port last

struct PathObservation {
    PortContext port_sequence;  // length >= 2, no immediate self-loops
    double weight = 0;          // spread probability mass for source -> sink
};

struct HonRule {
    PortContext context;    // length in [1, max_order], most recent last
    std::string next_port;
    double weight = 0;       // accumulated path mass (support)
    double probability = 0;  // conditional next-step probability
    double risk = 0;         // complement-product aggregate of observation masses
};

struct HonEdge {
    PortContext source;  // context state
    PortContext target;  // rewired context state, ends at next_port
    double weight = 0;   // risk carried by the rule
    double probability = 0;
};

struct HonNetwork {
    std::set<PortContext> nodes;
    std::vector<HonEdge> edges;
};

struct PhysicalAdjacency {
    std::map<std::pair<std::string, std::string>, double> entries;
    bool normalized = false;
    double max_edge = 0;

    double at(const std::string& i, const std::string& j) const {
        auto it = entries.find({i, j});
        return it == entries.end() ? 0.0 : it->second;
    }
};

namespace detail {

struct VesselLegs {
    std::string vessel_id;
    std::vector<const VoyageRecord*> legs;  // ordered by sail date
};

inline std::vector<VesselLegs> group_by_vessel(const Dataset& ds) {
    std::map<std::string, std::vector<const VoyageRecord*>> by_vessel;
    for (const auto& v : ds.voyages) by_vessel[v.vessel_id].push_back(&v);
    std::vector<VesselLegs> out;
    for (auto& [vid, legs] : by_vessel) {
        std::sort(legs.begin(), legs.end(), [](const VoyageRecord* a, const VoyageRecord* b) {
            if (a->sail_day != b->sail_day) return a->sail_day < b->sail_day;
            return a->voyage_id < b->voyage_id;
        });
        out.push_back({vid, std::move(legs)});
    }
    return out;
}

inline void extract_vessel_paths(const VesselLegs& vl, const Dataset& ds,
                                 const DischargeProfile& profile, const RiskParams& params,
                                 std::vector<PathObservation>& out) {
    const auto& fr = profile.fractions;
    const double total_frac = std::accumulate(fr.begin(), fr.end(), 0.0);
    for (std::size_t k = 0; k < vl.legs.size(); ++k) {
        const PortRecord& source = ds.port(vl.legs[k]->origin_port);
        const double mass = vl.legs[k]->discharge_tonnes;

        // Subsequent distinct calls within the profile horizon, with the
        // cumulative voyage duration up to each call.
        std::vector<const PortRecord*> calls;
        std::vector<double> durations;
        double dur = 0;
        std::string last = source.port_id;
        for (std::size_t l = k; l < vl.legs.size() && calls.size() < fr.size(); ++l) {
            dur += voyage_duration(*vl.legs[l]);
            const std::string& dest = vl.legs[l]->dest_port;
            if (dest == last) continue;
            calls.push_back(&ds.port(dest));
            durations.push_back(dur);
            last = dest;
        }
        if (calls.empty()) continue;

        // Fewer calls than the profile: truncate and renormalize so the
        // profile's total mass is preserved.
        double used_frac = 0;
        for (std::size_t h = 0; h < calls.size(); ++h) used_frac += fr[h];
        const double scale = used_frac > 0 ? total_frac / used_frac : 0.0;

        PortContext seq{source.port_id};
        for (std::size_t h = 0; h < calls.size(); ++h) {
            const PortRecord& sink = *calls[h];
            seq.push_back(sink.port_id);
            LegContext ctx;
            ctx.discharge_tonnes = mass * fr[h] * scale;
            ctx.duration_days = durations[h];
            ctx.temp_diff = std::abs(source.temperature_c - sink.temperature_c);
            ctx.sal_diff = std::abs(source.salinity_ppt - sink.salinity_ppt);
            ctx.same_or_neighbor_ecoregion =
                ds.params.eco.neighboring(source.ecoregion_id, sink.ecoregion_id);
            ctx.params = params;
            out.push_back({seq, spread_probability(ctx)});
        }
    }
}

}  // namespace detail

// Emits, for each vessel and each ballast-uptake port, the carry-forward
// paths to the next calling ports with discharge apportioned per profile.
// Deterministic for any thread count: vessels are partitioned in canonical
// order and results concatenated in that same order.
inline std::vector<PathObservation> extract_paths(const Dataset& ds,
                                                  const DischargeProfile& profile,
                                                  const RiskParams& params,
                                                  unsigned n_threads = 1) {
    profile.validate();
    auto vessels = detail::group_by_vessel(ds);
    if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, std::max<std::size_t>(1, vessels.size()));

    std::vector<std::vector<PathObservation>> partial(vessels.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < vessels.size(); ++i)
            detail::extract_vessel_paths(vessels[i], ds, profile, params, partial[i]);
    } else {
        std::vector<std::thread> workers;
        for (unsigned t = 0; t < n_threads; ++t) {
            workers.emplace_back([&, t] {
                for (std::size_t i = t; i < vessels.size(); i += n_threads)
                    detail::extract_vessel_paths(vessels[i], ds, profile, params, partial[i]);
            });
        }
        for (auto& w : workers) w.join();
    }

    std::vector<PathObservation> out;
    for (auto& p : partial)
        for (auto& obs : p) out.push_back(std::move(obs));
    return out;
}

namespace detail {

struct NextStats {
    double weight = 0;
    double count = 0;
    double log_complement = 0;  // sum of log1p(-w) over observations
    bool saturated = false;     // some observation had w == 1
};

struct ContextStats {
    std::map<std::string, NextStats> next;
    double total_weight = 0;
    double total_count = 0;

    // Weighted next-step distribution; falls back to raw counts when all
    // mass is zero so topology-only paths still yield valid rules.
    std::map<std::string, double> distribution() const {
        std::map<std::string, double> d;
        const bool by_weight = total_weight > 0;
        const double denom = by_weight ? total_weight : total_count;
        for (const auto& [n, s] : next) d[n] = (by_weight ? s.weight : s.count) / denom;
        return d;
    }
};

inline double kl_divergence_bits(const std::map<std::string, double>& p,
                                 const std::map<std::string, double>& q) {
    double kl = 0;
    for (const auto& [x, px] : p) {
        if (px <= 0) continue;
        auto it = q.find(x);
        double qx = it == q.end() ? 0.0 : it->second;
        if (qx <= 0) return std::numeric_limits<double>::infinity();
        kl += px * std::log2(px / qx);
    }
    return std::max(0.0, kl);
}

}  // namespace detail

// Grows variable-order rules from the path corpus. First-order rules are
// always kept; an extended context survives iff its summed-weight support
// reaches min_support and the KL divergence of its next-step distribution
// from its parent's exceeds scale * order / log2(1 + support). Extensions
// are only attempted on kept contexts, up to max_order.
inline std::vector<HonRule> grow_rules(const std::vector<PathObservation>& paths,
                                       const HonParams& hp) {
    hp.validate();
    std::map<PortContext, detail::ContextStats> stats;
    for (const auto& obs : paths) {
        const auto& seq = obs.port_sequence;
        for (std::size_t t = 1; t < seq.size(); ++t) {
            std::size_t max_len = std::min<std::size_t>(hp.max_order, t);
            for (std::size_t len = 1; len <= max_len; ++len) {
                PortContext ctx(seq.begin() + (t - len), seq.begin() + t);
                auto& cs = stats[ctx];
                auto& ns = cs.next[seq[t]];
                ns.weight += obs.weight;
                ns.count += 1;
                if (obs.weight >= 1.0)
                    ns.saturated = true;
                else
                    ns.log_complement += std::log1p(-obs.weight);
                cs.total_weight += obs.weight;
                cs.total_count += 1;
            }
        }
    }

    std::set<PortContext> kept;
    for (const auto& [ctx, cs] : stats)
        if (ctx.size() == 1) kept.insert(ctx);

    for (int order = 2; order <= hp.max_order; ++order) {
        for (const auto& [ctx, cs] : stats) {
            if (int(ctx.size()) != order) continue;
            PortContext parent(ctx.begin() + 1, ctx.end());
            if (!kept.count(parent)) continue;
            double support = cs.total_weight;
            if (support < hp.min_support) continue;
            double kl = detail::kl_divergence_bits(cs.distribution(),
                                                   stats.at(parent).distribution());
            double threshold =
                hp.divergence_threshold_scale * double(order) / std::log2(1.0 + support);
            if (kl > threshold) kept.insert(ctx);
        }
    }

    std::vector<HonRule> rules;
    for (const auto& ctx : kept) {
        const auto& cs = stats.at(ctx);
        auto dist = cs.distribution();
        for (const auto& [next, ns] : cs.next) {
            HonRule r;
            r.context = ctx;
            r.next_port = next;
            r.weight = ns.weight;
            r.probability = dist.at(next);
            r.risk = ns.saturated ? 1.0 : -std::expm1(ns.log_complement);
            rules.push_back(std::move(r));
        }
    }
    return rules;
}

// Rewires each rule's target to the highest-order kept context ending at the
// next port. Terminal ports that never act as a context materialize as
// first-order sink states.
inline HonNetwork build_hon_network(const std::vector<HonRule>& rules) {
    std::set<PortContext> valid;
    for (const auto& r : rules) {
        if (r.context.empty() || r.next_port.empty())
            throw DanglingRule("rule with empty context or next port");
        valid.insert(r.context);
    }

    HonNetwork net;
    net.nodes = valid;
    for (const auto& r : rules) {
        PortContext full = r.context;
        full.push_back(r.next_port);
        PortContext target{r.next_port};  // first-order sink fallback
        for (std::size_t len = full.size(); len >= 2; --len) {
            PortContext suffix(full.end() - len, full.end());
            if (valid.count(suffix)) {
                target = std::move(suffix);
                break;
            }
        }
        net.nodes.insert(target);
        net.edges.push_back({r.context, target, r.risk, r.probability});
    }
    return net;
}

// Physical port x port adjacency: entry (i,j) is the arithmetic mean of all
// HON edge weights whose source state sits at port i and target state at j.
inline PhysicalAdjacency project_physical(const HonNetwork& hon) {
    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> acc;
    for (const auto& e : hon.edges) {
        auto& slot = acc[{e.source.back(), e.target.back()}];
        slot.first += e.weight;
        slot.second += 1;
    }
    PhysicalAdjacency adj;
    for (const auto& [pair, sum_count] : acc) {
        double v = sum_count.first / double(sum_count.second);
        adj.entries[pair] = v;
        adj.max_edge = std::max(adj.max_edge, v);
    }
    return adj;
}

// Divides every entry by the maximum edge weight. All-zero matrices pass
// through untouched with the flag set.
inline PhysicalAdjacency normalize_edges(const PhysicalAdjacency& adj) {
    if (adj.normalized) throw InvariantViolation("adjacency already normalized");
    PhysicalAdjacency out = adj;
    out.normalized = true;
    if (adj.max_edge <= 0) return out;
    for (auto& [pair, v] : out.entries) v /= adj.max_edge;
    return out;
}

inline std::string context_label(const PortContext& ctx) {
    std::string s = ctx.back();
    if (ctx.size() > 1) {
        s += '|';
        for (std::size_t i = 0; i + 1 < ctx.size(); ++i) {
            if (i) s += ',';
            s += ctx[i];
        }
    }
    return s;
}

// Debug dump: context|next|support|probability
inline void dump_rules(const std::vector<HonRule>& rules, std::ostream& os) {
    os << "context|next|support|probability\n";
    for (const auto& r : rules) {
        os << context_label(r.context) << '|' << r.next_port << '|' << r.weight << '|'
           << r.probability << '\n';
    }
}

}  // namespace balhon
