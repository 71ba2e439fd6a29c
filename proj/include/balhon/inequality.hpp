#pragma once

// Lorenz curves and Gini coefficients of a burden or benefit metric against
// regional income.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "balhon/errors.hpp"

namespace balhon {

struct RegionDatum {
    std::string region_id;
    double income = 0;  // per-capita GDP, > 0
    double metric = 0;  // nonnegative burden/benefit magnitude
};

struct LorenzPoint {
    double cum_income_share = 0;
    double cum_metric_share = 0;
};

struct LorenzCurve {
    std::vector<LorenzPoint> points;  // (0,0) .. (1,1)
    double gini = 0;
};

enum class LorenzSort { intensity, income };

inline double gini_from_points(const std::vector<LorenzPoint>& points) {
    double area = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        double dx = points[i].cum_income_share - points[i - 1].cum_income_share;
        area += dx * (points[i].cum_metric_share + points[i - 1].cum_metric_share) / 2.0;
    }
    return 1.0 - 2.0 * area;
}

// Concentration-curve construction: regions sorted ascending by
// metric/income intensity (or by income), cumulative shares accumulated in
// that order. Negative metrics must be folded by the caller.
inline LorenzCurve lorenz_points(std::vector<RegionDatum> data,
                                 LorenzSort sort = LorenzSort::intensity) {
    if (data.size() < 2) throw DegenerateInput("need at least 2 regions");
    double total_income = 0, total_metric = 0;
    for (const auto& d : data) {
        if (d.income <= 0) throw InvariantViolation("income must be > 0 for " + d.region_id);
        if (d.metric < 0) throw InvariantViolation("metric must be >= 0 for " + d.region_id);
        total_income += d.income;
        total_metric += d.metric;
    }
    if (total_metric <= 0) throw DegenerateInput("all metrics are zero");

    std::sort(data.begin(), data.end(), [&](const RegionDatum& a, const RegionDatum& b) {
        if (sort == LorenzSort::intensity) {
            double ia = a.metric / a.income, ib = b.metric / b.income;
            if (ia != ib) return ia < ib;
        } else {
            if (a.income != b.income) return a.income < b.income;
        }
        return a.region_id < b.region_id;
    });

    LorenzCurve curve;
    curve.points.push_back({0.0, 0.0});
    double ci = 0, cm = 0;
    for (const auto& d : data) {
        ci += d.income;
        cm += d.metric;
        curve.points.push_back({ci / total_income, cm / total_metric});
    }
    curve.points.back() = {1.0, 1.0};  // pin endpoints against rounding
    curve.gini = gini_from_points(curve.points);
    return curve;
}

inline double gini(const LorenzCurve& curve) { return curve.gini; }

}  // namespace balhon
