#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "vlcnoma/ber.hpp"
#include "vlcnoma/mc.hpp"

namespace vlcnoma {

namespace detail {

struct MobilityBlockCounts {
    std::vector<long long> errors;   // per label
    std::vector<double> bound_sum;   // per decoding order
    long long epochs = 0;
    long long preserved = 0;
    long long clamped = 0;
};

inline MobilityBlockCounts run_mobility_block(const MobilityConfig& cfg,
                                              const PowerAllocation& alloc, int point,
                                              long long block, long long epochs) {
    const int users = cfg.users;
    const double snr = cfg.snr_grid_db[point];
    const double sigma = snr_to_sigma(snr, cfg.total_power, cfg.responsivity);
    const double displacement = cfg.max_velocity * cfg.update_interval;
    const double lumped = lumped_constant(cfg.frontend, cfg.height);
    const double order_m = cfg.frontend.lambertian();

    RandomStream rng(RandomStream::derive_key(cfg.seed, static_cast<uint64_t>(point),
                                              static_cast<uint64_t>(block), 1));
    MobilityBlockCounts out;
    out.errors.assign(users, 0);
    out.bound_sum.assign(users, 0.0);

    std::vector<double> stale(users), truth(users);
    std::vector<int> order(users), true_rank(users), bits(users);
    for (long long ep = 0; ep < epochs; ++ep) {
        auto events = simulate_mobility_epoch(cfg, rng);
        for (int u = 0; u < users; ++u) {
            stale[u] = channel_gain(LinkGeometry::vertical(events[u].start_radius, cfg.height),
                                    cfg.frontend);
            if (stale[u] < kEstimatedGainFloor) {
                stale[u] = kEstimatedGainFloor;
                ++out.clamped;
            }
            truth[u] =
                channel_gain(LinkGeometry::vertical(events[u].end_radius, cfg.height), cfg.frontend);
        }
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return stale[a] < stale[b]; });
        std::vector<int> by_truth(order.size());
        std::iota(by_truth.begin(), by_truth.end(), 0);
        std::stable_sort(by_truth.begin(), by_truth.end(),
                         [&](int a, int b) { return truth[a] < truth[b]; });
        for (int i = 0; i < users; ++i) true_rank[by_truth[i]] = i;
        bool preserved = true;
        for (int i = 0; i < users; ++i)
            if (true_rank[order[i]] != i) preserved = false;
        out.preserved += preserved;
        ++out.epochs;

        for (int i = 0; i < users; ++i) {
            int u = order[i];
            double bound_e;
            if (cfg.bound_mode == ErrorBoundMode::gain_difference) {
                bound_e = worst_case_error_bound(cfg.frontend, cfg.height,
                                                 events[u].start_radius, displacement);
            } else {
                MobilityEvent toward{events[u].start_radius,
                                     std::max(0.0, events[u].start_radius - displacement),
                                     cfg.max_velocity, cfg.update_interval, cfg.height};
                MobilityEvent away{events[u].start_radius, events[u].start_radius + displacement,
                                   cfg.max_velocity, cfg.update_interval, cfg.height};
                bound_e = std::max(error_bound(toward, lumped, order_m, cfg.bound_mode),
                                   error_bound(away, lumped, order_m, cfg.bound_mode));
            }
            out.bound_sum[i] += std::min(
                1.0, ber_outdated(i + 1, alloc, stale[u], cfg.responsivity, sigma, bound_e));
        }

        for (int s = 0; s < cfg.symbols_per_epoch; ++s) {
            for (int i = 0; i < users; ++i) bits[i] = rng.next_bit();
            double x = superimpose(bits, alloc);
            for (int i = 0; i < users; ++i) {
                int u = order[i];
                double y = cfg.responsivity * truth[u] * x + sigma * rng.next_gauss();
                UserChannel self{u + 1, truth[u], i + 1, stale[u]};
                SicDecision d = sic_decode(y, self, alloc, cfg.responsivity);
                int label = cfg.label_by_true_rank ? true_rank[u] : i;
                out.errors[label] += d.bit != bits[i];
            }
        }
    }
    return out;
}

} // namespace detail

/// Mobility Monte Carlo: stale-gain ordering, allocation and decoding; the
/// move happens between the CSI update and the data. Also accumulates the
/// epoch-mean worst-case bound curve at maximum velocity.
inline MobilityResult run_mobility(const MobilityConfig& cfg) {
    cfg.validate();
    const int users = cfg.users;
    PowerAllocation alloc = fpa_allocate(cfg.total_power, cfg.rho, users);
    const long long epochs_total =
        (cfg.bits_per_user + cfg.symbols_per_epoch - 1) / cfg.symbols_per_epoch;
    const long long epochs_per_block =
        std::max<long long>(1, 50'000 / std::max(1, cfg.symbols_per_epoch));
    const long long blocks = (epochs_total + epochs_per_block - 1) / epochs_per_block;

    MobilityResult res;
    res.mc.snr_db = cfg.snr_grid_db;
    res.mc.provenance = "monte_carlo";
    res.mc.seed = cfg.seed;
    res.bound.snr_db = cfg.snr_grid_db;
    res.bound.provenance = "bound";
    res.bound.seed = cfg.seed;

    long long preserved = 0, epochs_seen = 0;
    for (int p = 0; p < static_cast<int>(cfg.snr_grid_db.size()); ++p) {
        std::vector<detail::MobilityBlockCounts> results(blocks);
        detail::parallel_blocks(blocks, cfg.threads, [&](long long b) {
            long long first = b * epochs_per_block;
            long long count = std::min(epochs_per_block, epochs_total - first);
            results[b] = detail::run_mobility_block(cfg, alloc, p, b, count);
        });
        std::vector<long long> errs(users, 0);
        std::vector<double> bound(users, 0.0);
        long long ep = 0;
        for (const auto& r : results) {
            for (int u = 0; u < users; ++u) {
                errs[u] += r.errors[u];
                bound[u] += r.bound_sum[u];
            }
            ep += r.epochs;
            preserved += r.preserved;
            res.mc.clamped_estimates += r.clamped;
        }
        epochs_seen += ep;
        const double bits = static_cast<double>(ep) * cfg.symbols_per_epoch;
        std::vector<double> mc_row(users), bound_row(users);
        for (int u = 0; u < users; ++u) {
            mc_row[u] = static_cast<double>(errs[u]) / bits;
            bound_row[u] = bound[u] / static_cast<double>(ep);
        }
        res.mc.error_count.push_back(errs);
        res.mc.ber.push_back(mc_row);
        res.bound.error_count.push_back(std::vector<long long>(users, 0));
        res.bound.ber.push_back(bound_row);
    }
    finalize_curve(res.mc, epochs_total * cfg.symbols_per_epoch);
    finalize_curve(res.bound, epochs_total * cfg.symbols_per_epoch);
    res.order_preserved_fraction =
        epochs_seen > 0 ? static_cast<double>(preserved) / static_cast<double>(epochs_seen) : 0.0;
    return res;
}

} // namespace vlcnoma
