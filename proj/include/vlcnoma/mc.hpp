#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "vlcnoma/channel.hpp"
#include "vlcnoma/link.hpp"
#include "vlcnoma/rng.hpp"

namespace vlcnoma {

/// Transmit SNR in dB referenced to the total LED power: the noise standard
/// deviation that realizes it is sigma = resp * total / 10^(snr/20).
inline double snr_to_sigma(double snr_db, double total_power, double responsivity) {
    if (!(total_power > 0.0)) throw std::invalid_argument("snr_to_sigma: total_power <= 0");
    return responsivity * total_power / std::pow(10.0, snr_db / 20.0);
}

inline double sigma_to_snr(double sigma, double total_power, double responsivity) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma_to_snr: sigma <= 0");
    return 20.0 * std::log10(responsivity * total_power / sigma);
}

/// Channel-knowledge model used when injecting gain estimates.
struct CsiErrorModel {
    enum class Kind { perfect, noisy_fixed, noisy_snr_dependent, outdated };

    Kind kind = Kind::perfect;
    double eps_var = 0.0;       // noisy_fixed: variance of the additive error
    double kappa = 2e5;         // noisy_snr_dependent: eps_var = kappa / linear SNR
    double max_velocity = 2.0;  // outdated: m/s
    double update_interval = 1.0; // outdated: seconds

    double variance_at(double snr_db) const {
        switch (kind) {
            case Kind::noisy_fixed: return eps_var;
            case Kind::noisy_snr_dependent: return kappa / std::pow(10.0, snr_db / 10.0);
            default: return 0.0;
        }
    }

    static CsiErrorModel perfect() { return {}; }
    static CsiErrorModel noisy_fixed(double var) {
        CsiErrorModel m;
        m.kind = Kind::noisy_fixed;
        m.eps_var = var;
        return m;
    }
    static CsiErrorModel noisy_snr(double kappa) {
        CsiErrorModel m;
        m.kind = Kind::noisy_snr_dependent;
        m.kappa = kappa;
        return m;
    }
    static CsiErrorModel outdated(double v, double t) {
        CsiErrorModel m;
        m.kind = Kind::outdated;
        m.max_velocity = v;
        m.update_interval = t;
        return m;
    }
};

/// One user's move in the horizontal receiver plane between CSI updates.
struct MobilityEvent {
    double start_radius = 0.0;
    double end_radius = 0.0;
    double speed = 0.0;
    double elapsed = 0.0;
    double height = 0.0;

    double start_distance() const { return std::hypot(start_radius, height); }
    double end_distance() const { return std::hypot(end_radius, height); }
};

enum class ErrorBoundMode { gain_difference, literal };

/// Bound on the gain change implied by a move. The default mode differences
/// the power-law gains at the two distances; the literal mode differences
/// the raised distances themselves.
inline double error_bound(const MobilityEvent& ev, double lumped, double order,
                          ErrorBoundMode mode = ErrorBoundMode::gain_difference) {
    if (ev.elapsed < 0.0 || ev.speed < 0.0)
        throw std::invalid_argument("error_bound: negative speed or time");
    double d1 = ev.start_distance(), d2 = ev.end_distance();
    if (mode == ErrorBoundMode::literal)
        return lumped * std::fabs(std::pow(d2, order + 3.0) - std::pow(d1, order + 3.0));
    return std::fabs(lumped / std::pow(d2, order + 3.0) - lumped / std::pow(d1, order + 3.0));
}

/// Worst-case gain deviation for a user at radius r that may move up to
/// `displacement` in any horizontal direction, honoring the FOV cutoff.
inline double worst_case_error_bound(const ReceiverFrontEnd& fe, double height, double radius,
                                     double displacement) {
    double h0 = channel_gain(LinkGeometry::vertical(radius, height), fe);
    double toward = channel_gain(
        LinkGeometry::vertical(std::max(0.0, radius - displacement), height), fe);
    double away = channel_gain(LinkGeometry::vertical(radius + displacement, height), fe);
    return std::max(toward - h0, h0 - away);
}

/// Result of a gain-estimate injection.
struct CsiInjection {
    std::vector<double> estimates;
    long long clamped = 0; // estimates raised to the positive floor
};

/// Draw estimated gains for each user under the given model. Noisy errors
/// are i.i.d. across users; the outdated kind is handled by the mobility
/// runner, which knows the geometry.
inline CsiInjection inject_csi(const std::vector<double>& true_gains, const CsiErrorModel& model,
                               RandomStream& rng, double snr_db = 0.0) {
    for (double g : true_gains)
        if (!(g > 0.0)) throw std::invalid_argument("inject_csi: nonpositive gain");
    CsiInjection out;
    out.estimates.reserve(true_gains.size());
    switch (model.kind) {
        case CsiErrorModel::Kind::perfect:
            out.estimates = true_gains;
            break;
        case CsiErrorModel::Kind::noisy_fixed:
        case CsiErrorModel::Kind::noisy_snr_dependent: {
            double sd = std::sqrt(model.variance_at(snr_db));
            for (double g : true_gains) {
                double est = g + sd * rng.next_gauss();
                if (est < kEstimatedGainFloor) {
                    est = kEstimatedGainFloor;
                    ++out.clamped;
                }
                out.estimates.push_back(est);
            }
            break;
        }
        case CsiErrorModel::Kind::outdated:
            throw std::invalid_argument("inject_csi: outdated model needs the mobility runner");
    }
    return out;
}

/// Digital dimming settings for the Monte Carlo runners.
struct McDimming {
    DimmingConfig::Scheme scheme = DimmingConfig::Scheme::none;
    double factor = 1.0;
};

/// Per-user, per-point Monte Carlo result with provenance.
struct BerCurve {
    std::vector<double> snr_db;
    std::vector<std::vector<double>> ber;            // [point][user]
    std::vector<std::vector<double>> stderr_;        // [point][user]
    std::vector<std::vector<long long>> error_count; // [point][user]
    std::vector<std::vector<char>> unreliable;       // fewer than 10 error events
    std::string provenance;                          // analytic | bound | monte_carlo | oracle
    long long trials = 0;                            // bits per (point, user)
    uint64_t seed = 0;
    long long clamped_estimates = 0;

    int points() const { return static_cast<int>(snr_db.size()); }
    int users() const { return ber.empty() ? 0 : static_cast<int>(ber[0].size()); }
};

inline void finalize_curve(BerCurve& c, long long trials) {
    c.trials = trials;
    c.stderr_.assign(c.ber.size(), {});
    c.unreliable.assign(c.ber.size(), {});
    for (size_t p = 0; p < c.ber.size(); ++p) {
        for (size_t u = 0; u < c.ber[p].size(); ++u) {
            double pe = c.ber[p][u];
            c.stderr_[p].push_back(std::sqrt(pe * (1.0 - pe) / static_cast<double>(trials)));
            c.unreliable[p].push_back(c.error_count[p][u] < 10 ? 1 : 0);
        }
    }
}

/// Static-geometry Monte Carlo configuration: fixed ascending gains, one
/// allocation, perfect or noisy channel knowledge, optional dimming.
struct TrialConfig {
    std::vector<double> gains;         // ascending; index = decoding order - 1
    double total_power = 0.25;
    double rho = 0.3;
    double responsivity = 1.0;
    std::vector<double> snr_grid_db;
    long long bits_per_user = 10'000'000;
    uint64_t seed = 1;
    CsiErrorModel csi{};
    McDimming dimming{};
    int block_symbols = 100'000;
    int threads = 0; // 0 = hardware concurrency

    void validate() const {
        if (gains.empty()) throw std::invalid_argument("TrialConfig: no users");
        for (size_t i = 1; i < gains.size(); ++i)
            if (gains[i] < gains[i - 1])
                throw std::invalid_argument("TrialConfig: gains must be ascending");
        if (snr_grid_db.empty()) throw std::invalid_argument("TrialConfig: empty SNR grid");
        if (bits_per_user < 10'000)
            throw std::invalid_argument("TrialConfig: fewer than 1e4 bits per user");
        if (csi.kind == CsiErrorModel::Kind::outdated)
            throw std::invalid_argument("TrialConfig: outdated CSI uses MobilityConfig");
    }
};

namespace detail {

struct BlockCounts {
    std::vector<long long> errors; // per user
    long long clamped = 0;
};

/// One block of symbols at one SNR point. The stream key depends only on
/// (seed, point, block), so scheduling cannot change the tally.
inline BlockCounts run_block(const TrialConfig& cfg, const PowerAllocation& alloc, int point,
                             long long block, long long symbols) {
    const int users = static_cast<int>(cfg.gains.size());
    const double snr = cfg.snr_grid_db[point];
    const double sigma = snr_to_sigma(snr, cfg.total_power, cfg.responsivity);
    const bool analog = cfg.dimming.scheme == DimmingConfig::Scheme::analog;
    const PowerAllocation live =
        analog ? apply_analog_dimming(alloc, cfg.dimming.factor) : alloc;
    const bool vook = cfg.dimming.scheme == DimmingConfig::Scheme::vook;
    const int reps = vook ? DimmingConfig{DimmingConfig::Scheme::vook, cfg.dimming.factor}
                                .redundancy()
                          : 1;
    if (vook && reps < 1) throw std::invalid_argument("run_block: vook factor carries no data");

    RandomStream rng(RandomStream::derive_key(cfg.seed, static_cast<uint64_t>(point),
                                              static_cast<uint64_t>(block)));
    BlockCounts out;
    out.errors.assign(users, 0);
    std::vector<int> bits(users);
    std::vector<int> wrong(users);
    for (long long s = 0; s < symbols; ++s) {
        for (int u = 0; u < users; ++u) bits[u] = rng.next_bit();
        CsiInjection inj = inject_csi(cfg.gains, cfg.csi, rng, snr);
        out.clamped += inj.clamped;
        std::fill(wrong.begin(), wrong.end(), 0);
        for (int rep = 0; rep < reps; ++rep) {
            double x = superimpose(bits, live);
            for (int u = 0; u < users; ++u) {
                double y = cfg.responsivity * cfg.gains[u] * x + sigma * rng.next_gauss();
                UserChannel self{u + 1, cfg.gains[u], u + 1, inj.estimates[u]};
                SicDecision d = sic_decode(y, self, live, cfg.responsivity);
                wrong[u] += d.bit != bits[u];
            }
        }
        for (int u = 0; u < users; ++u)
            out.errors[u] += vook ? (wrong[u] >= (reps + 1) / 2) : wrong[u];
    }
    return out;
}

template <class BlockFn>
void parallel_blocks(long long blocks, int threads, BlockFn&& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    int t = threads > 0 ? threads : static_cast<int>(hw ? hw : 1);
    t = static_cast<int>(std::min<long long>(t, blocks));
    if (t <= 1) {
        for (long long b = 0; b < blocks; ++b) fn(b);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (int i = 0; i < t; ++i)
        pool.emplace_back([&, i] {
            for (long long b = i; b < blocks; b += t) fn(b);
        });
    for (auto& th : pool) th.join();
}

} // namespace detail

/// Run the static-geometry Monte Carlo over the SNR grid. Blocks execute
/// concurrently; identical (config, seed) reproduce identical counts on any
/// thread count.
inline BerCurve run_trials(const TrialConfig& cfg) {
    cfg.validate();
    const int users = static_cast<int>(cfg.gains.size());
    PowerAllocation alloc = fpa_allocate(cfg.total_power, cfg.rho, users);
    BerCurve curve;
    curve.snr_db = cfg.snr_grid_db;
    curve.provenance = "monte_carlo";
    curve.seed = cfg.seed;
    const long long blocks =
        (cfg.bits_per_user + cfg.block_symbols - 1) / cfg.block_symbols;
    for (int p = 0; p < static_cast<int>(cfg.snr_grid_db.size()); ++p) {
        std::vector<detail::BlockCounts> results(blocks);
        detail::parallel_blocks(blocks, cfg.threads, [&](long long b) {
            long long first = b * cfg.block_symbols;
            long long count = std::min<long long>(cfg.block_symbols, cfg.bits_per_user - first);
            results[b] = detail::run_block(cfg, alloc, p, b, count);
        });
        std::vector<long long> errs(users, 0);
        for (const auto& r : results) { // fixed reduction order
            for (int u = 0; u < users; ++u) errs[u] += r.errors[u];
            curve.clamped_estimates += r.clamped;
        }
        curve.error_count.push_back(errs);
        std::vector<double> row(users);
        for (int u = 0; u < users; ++u)
            row[u] = static_cast<double>(errs[u]) / static_cast<double>(cfg.bits_per_user);
        curve.ber.push_back(row);
    }
    finalize_curve(curve, cfg.bits_per_user);
    return curve;
}

/// Start-position rule for mobility epochs.
struct MobilityLayout {
    enum class Kind { uniform_disk, anchored_radii };
    Kind kind = Kind::uniform_disk;
    double disk_radius = 0.0;          // uniform_disk: max start radius
    std::vector<double> anchor_radii;  // anchored_radii: one per user, any order
};

/// Mobility Monte Carlo configuration. Users sit on the receiver plane
/// `height` below the LED; every epoch re-draws positions, applies one move
/// per user (shared in group mode), and runs symbols with the transmitter
/// and receivers using the pre-move gains.
struct MobilityConfig {
    int users = 3;
    double height = 2.25;
    ReceiverFrontEnd frontend{};
    MobilityLayout layout{};
    bool group_motion = true;          // shared displacement; order premise
    bool label_by_true_rank = false;   // tally per post-move rank instead of stale rank
    double max_velocity = 2.0;         // m/s
    double update_interval = 1.0;      // s
    double room_half_width = 2.0;      // walls clip positions to +-this
    double total_power = 0.25;
    double rho = 0.3;
    double responsivity = 1.0;
    std::vector<double> snr_grid_db;
    long long bits_per_user = 10'000'000;
    uint64_t seed = 1;
    int symbols_per_epoch = 500;
    int threads = 0;
    ErrorBoundMode bound_mode = ErrorBoundMode::gain_difference;

    void validate() const {
        if (users < 1) throw std::invalid_argument("MobilityConfig: users < 1");
        if (!(height > 0.0)) throw std::invalid_argument("MobilityConfig: height <= 0");
        if (snr_grid_db.empty()) throw std::invalid_argument("MobilityConfig: empty SNR grid");
        if (bits_per_user < 10'000)
            throw std::invalid_argument("MobilityConfig: fewer than 1e4 bits per user");
        if (layout.kind == MobilityLayout::Kind::anchored_radii &&
            static_cast<int>(layout.anchor_radii.size()) != users)
            throw std::invalid_argument("MobilityConfig: anchor count != users");
    }
};

/// Draw one epoch of start/end positions. Group mode applies a single
/// speed and heading to every user. Walls clip the end positions.
inline std::vector<MobilityEvent> simulate_mobility_epoch(const MobilityConfig& cfg,
                                                          RandomStream& rng,
                                                          std::vector<double>* start_xy = nullptr,
                                                          std::vector<double>* end_xy = nullptr) {
    std::vector<MobilityEvent> events(cfg.users);
    double gspeed = cfg.max_velocity * rng.next_uniform();
    double ghead = 2.0 * kPi * rng.next_uniform();
    if (start_xy) start_xy->assign(cfg.users * 2, 0.0);
    if (end_xy) end_xy->assign(cfg.users * 2, 0.0);
    for (int u = 0; u < cfg.users; ++u) {
        double r0, theta = 2.0 * kPi * rng.next_uniform();
        if (cfg.layout.kind == MobilityLayout::Kind::uniform_disk)
            r0 = cfg.layout.disk_radius * std::sqrt(rng.next_uniform());
        else
            r0 = cfg.layout.anchor_radii[u];
        double x0 = r0 * std::cos(theta), y0 = r0 * std::sin(theta);
        double speed = cfg.group_motion ? gspeed : cfg.max_velocity * rng.next_uniform();
        double head = cfg.group_motion ? ghead : 2.0 * kPi * rng.next_uniform();
        double x1 = std::clamp(x0 + speed * cfg.update_interval * std::cos(head),
                               -cfg.room_half_width, cfg.room_half_width);
        double y1 = std::clamp(y0 + speed * cfg.update_interval * std::sin(head),
                               -cfg.room_half_width, cfg.room_half_width);
        events[u] = MobilityEvent{r0, std::hypot(x1, y1), speed, cfg.update_interval, cfg.height};
        if (start_xy) { (*start_xy)[2 * u] = x0; (*start_xy)[2 * u + 1] = y0; }
        if (end_xy) { (*end_xy)[2 * u] = x1; (*end_xy)[2 * u + 1] = y1; }
    }
    return events;
}

/// Output of the mobility runner: the Monte Carlo curve plus the epoch-mean
/// stale-CSI upper-bound curve evaluated at maximum velocity.
struct MobilityResult {
    BerCurve mc;
    BerCurve bound;
    double order_preserved_fraction = 0.0; // epochs whose gain ranking survived the move
};

} // namespace vlcnoma
