#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vlcnoma/link.hpp"
#include "vlcnoma/math.hpp"

namespace vlcnoma {

/// Piecewise-constant map from the received sample to the stage-decision
/// trace of a cascade receiver. Interval i covers [breakpoints[i-1],
/// breakpoints[i]) with the convention that a sample exactly on a
/// breakpoint belongs to the interval on the decide-1 side, matching
/// sic_decode's tie rule.
struct DecisionMap {
    std::vector<double> breakpoints;  // strictly increasing interior bounds
    std::vector<uint32_t> traces;     // traces.size() == breakpoints.size() + 1

    uint32_t trace_at(double y) const {
        size_t lo = 0, hi = breakpoints.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (y >= breakpoints[mid])
                lo = mid + 1;
            else
                hi = mid;
        }
        return traces[lo];
    }
};

/// Build the decision map for the receiver at decoding order k. Stage j
/// splits every current interval at the threshold implied by that
/// interval's reconstruction so far.
inline DecisionMap decision_map(int order, const PowerAllocation& alloc, double estimated_gain,
                                double responsivity) {
    const int users = alloc.user_count();
    if (users > 12) throw std::invalid_argument("decision_map: more than 12 users");
    if (order < 1 || order > users)
        throw std::invalid_argument("decision_map: order outside allocation");

    struct Region {
        double lo, hi;
        uint32_t trace;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<Region> regions{{-inf, inf, 0}};
    for (int j = 1; j <= order; ++j) {
        std::vector<Region> next;
        next.reserve(regions.size() * 2);
        for (const auto& r : regions) {
            double reconstructed = 0.0;
            for (int m = 0; m < j - 1; ++m)
                if ((r.trace >> m) & 1) reconstructed += alloc.powers[m];
            double thr =
                responsivity * estimated_gain * (reconstructed + alloc.powers[j - 1] / 2.0);
            uint32_t one = r.trace | (1u << (j - 1));
            if (thr <= r.lo) {
                next.push_back({r.lo, r.hi, one});
            } else if (thr >= r.hi) { // a bound exactly on hi belongs to the next region
                next.push_back({r.lo, r.hi, r.trace});
            } else {
                next.push_back({r.lo, thr, r.trace});
                next.push_back({thr, r.hi, one});
            }
        }
        regions = std::move(next);
    }
    DecisionMap map;
    map.traces.reserve(regions.size());
    for (size_t i = 0; i < regions.size(); ++i) {
        map.traces.push_back(regions[i].trace);
        if (i + 1 < regions.size()) map.breakpoints.push_back(regions[i].hi);
    }
    return map;
}

/// Per-payload error probability of the cascade receiver at the given
/// decoding order: entry s is the Gaussian measure of the wrong-decision
/// region when payload bit pattern s was superimposed.
inline std::vector<double> exact_payload_error_probabilities(int order,
                                                             const PowerAllocation& alloc,
                                                             double gain, double estimated_gain,
                                                             double responsivity, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("exact_ber: sigma <= 0");
    const int users = alloc.user_count();
    auto map = decision_map(order, alloc, estimated_gain, responsivity);
    const uint32_t own_bit = 1u << (order - 1);
    std::vector<double> out;
    out.reserve(1u << users);
    for (uint32_t s = 0; s < (1u << users); ++s) {
        double mean = 0.0;
        for (int i = 0; i < users; ++i)
            if ((s >> i) & 1) mean += alloc.powers[i];
        mean *= responsivity * gain;
        const bool sent_one = (s & own_bit) != 0;
        CompensatedSum err;
        double lo = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < map.traces.size(); ++i) {
            double hi = i < map.breakpoints.size() ? map.breakpoints[i]
                                                   : std::numeric_limits<double>::infinity();
            bool decided_one = (map.traces[i] & own_bit) != 0;
            if (decided_one != sent_one && hi - lo > 1e-300) {
                double a = std::isinf(lo) ? 1.0 : q_function((lo - mean) / sigma);
                double b = std::isinf(hi) ? 0.0 : q_function((hi - mean) / sigma);
                err.add(a - b);
            }
            lo = hi;
        }
        out.push_back(err.value());
    }
    return out;
}

/// Exact bit-error probability of the cascade receiver: average over all
/// 2^N payloads of the Gaussian measure of the wrong-decision region.
inline double exact_ber(int order, const PowerAllocation& alloc, double gain,
                        double estimated_gain, double responsivity, double sigma) {
    auto per_payload =
        exact_payload_error_probabilities(order, alloc, gain, estimated_gain, responsivity, sigma);
    CompensatedSum total;
    for (double p : per_payload) total.add(p);
    return total.value() / static_cast<double>(per_payload.size());
}

} // namespace vlcnoma
