#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "vlcnoma/ber.hpp"
#include "vlcnoma/csv.hpp"
#include "vlcnoma/mobility.hpp"
#include "vlcnoma/oracle.hpp"

namespace vlcnoma {

inline constexpr const char* kVersion = "vlcnoma 0.1.0";
inline constexpr const char* kOutDirEnv = "VLCNOMA_OUT_DIR";

/// Reference link constants used by the canned scenarios: three users with
/// the stock indoor gain set, quarter-watt LED, geometric allocation.
struct ReferenceSetup {
    static std::vector<double> gains() { return {0.2835e-4, 0.4787e-4, 0.5272e-4}; }
    static constexpr double total_power = 0.25;
    static constexpr double rho = 0.3;
    static constexpr double responsivity = 1.0;
    static constexpr double receiver_plane_drop = 2.25; // metres below the LED
};

inline std::vector<double> snr_range(double start, double stop, double step) {
    std::vector<double> g;
    for (double s = start; s <= stop + 1e-9; s += step) g.push_back(s);
    return g;
}

// ---------------------------------------------------------------------------
// Analytic curve builders
// ---------------------------------------------------------------------------

namespace detail {

template <class PerUser>
BerCurve build_curve(const std::vector<double>& grid, int users, const std::string& provenance,
                     PerUser&& f) {
    BerCurve c;
    c.snr_db = grid;
    c.provenance = provenance;
    for (double snr : grid) {
        std::vector<double> row(users);
        for (int u = 0; u < users; ++u) row[u] = f(snr, u + 1);
        c.ber.push_back(row);
        c.error_count.push_back(std::vector<long long>(users, 0));
    }
    c.stderr_.assign(c.ber.size(), std::vector<double>(users, 0.0));
    c.unreliable.assign(c.ber.size(), std::vector<char>(users, 0));
    return c;
}

} // namespace detail

struct AnalyticOptions {
    McDimming dimming{};
    // Noisy evaluation controls; unused for other models.
    bool force_quadrature = false;
    NoisyEvalCounters* counters = nullptr;
};

/// Closed-form BER curve for the given channel-knowledge model. Dimming is
/// applied as a power scale (analog) or a repetition transform (vook).
inline BerCurve analytic_curve(const std::vector<double>& gains, double total_power, double rho,
                               double responsivity, const std::vector<double>& grid,
                               const CsiErrorModel& model, const AnalyticOptions& opt = {}) {
    const int users = static_cast<int>(gains.size());
    PowerAllocation alloc = fpa_allocate(total_power, rho, users);
    if (opt.dimming.scheme == DimmingConfig::Scheme::analog)
        alloc = apply_analog_dimming(alloc, opt.dimming.factor);
    int reps = 1;
    if (opt.dimming.scheme == DimmingConfig::Scheme::vook)
        reps = vook_redundancy(opt.dimming.factor);
    const QExpFit& fit = canonical_q_fit();

    std::string provenance = "analytic";
    if (model.kind == CsiErrorModel::Kind::noisy_fixed ||
        model.kind == CsiErrorModel::Kind::noisy_snr_dependent)
        provenance = opt.force_quadrature ? "analytic_quadrature" : "analytic_approx";

    auto curve = detail::build_curve(grid, users, provenance, [&](double snr, int k) {
        double sigma = snr_to_sigma(snr, total_power, responsivity);
        double raw;
        switch (model.kind) {
            case CsiErrorModel::Kind::perfect:
                raw = ber_perfect(k, alloc, gains[k - 1], responsivity, sigma);
                break;
            case CsiErrorModel::Kind::noisy_fixed:
            case CsiErrorModel::Kind::noisy_snr_dependent:
                raw = ber_noisy(k, alloc, gains[k - 1], responsivity, sigma,
                                model.variance_at(snr), fit, opt.counters, opt.force_quadrature);
                break;
            case CsiErrorModel::Kind::outdated:
                throw std::invalid_argument("analytic_curve: outdated uses outdated_bound_curve");
            default:
                raw = 0.0;
        }
        return reps > 1 ? vook_ber(raw, reps) : raw;
    });
    return curve;
}

/// Exact decision-region BER curve (perfect CSI), the brute-force reference.
inline BerCurve oracle_curve(const std::vector<double>& gains, double total_power, double rho,
                             double responsivity, const std::vector<double>& grid,
                             const McDimming& dimming = {}) {
    const int users = static_cast<int>(gains.size());
    PowerAllocation alloc = fpa_allocate(total_power, rho, users);
    if (dimming.scheme == DimmingConfig::Scheme::analog)
        alloc = apply_analog_dimming(alloc, dimming.factor);
    int reps = dimming.scheme == DimmingConfig::Scheme::vook ? vook_redundancy(dimming.factor) : 1;
    auto curve = detail::build_curve(grid, users, "oracle", [&](double snr, int k) {
        double sigma = snr_to_sigma(snr, total_power, responsivity);
        double raw = exact_ber(k, alloc, gains[k - 1], gains[k - 1], responsivity, sigma);
        return reps > 1 ? vook_ber(raw, reps) : raw;
    });
    return curve;
}

/// Worst-case stale-CSI bound curve for users pinned at fixed radii.
inline BerCurve outdated_bound_curve(const ReceiverFrontEnd& fe, double height,
                                     const std::vector<double>& radii_ascending_gain,
                                     double total_power, double rho, double responsivity,
                                     const std::vector<double>& grid, double displacement) {
    const int users = static_cast<int>(radii_ascending_gain.size());
    PowerAllocation alloc = fpa_allocate(total_power, rho, users);
    std::vector<double> gains(users), bounds(users);
    for (int u = 0; u < users; ++u) {
        gains[u] = channel_gain(LinkGeometry::vertical(radii_ascending_gain[u], height), fe);
        bounds[u] = worst_case_error_bound(fe, height, radii_ascending_gain[u], displacement);
    }
    return detail::build_curve(grid, users, "bound", [&](double snr, int k) {
        double sigma = snr_to_sigma(snr, total_power, responsivity);
        return std::min(1.0, ber_outdated(k, alloc, gains[k - 1], responsivity, sigma, bounds[k - 1]));
    });
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::string scenario = "custom";
    std::vector<double> snr_grid_db = snr_range(105.0, 130.0, 2.5);
    std::vector<double> gains = ReferenceSetup::gains();
    double total_power = ReferenceSetup::total_power;
    double rho = ReferenceSetup::rho;
    double responsivity = ReferenceSetup::responsivity;
    long long trials = 10'000'000;
    uint64_t seed = 1;
    int threads = 0;
    CsiErrorModel csi{};
    McDimming dimming{};
    ErrorBoundMode bound_mode = ErrorBoundMode::gain_difference;
    std::vector<std::string> curves{"analytic", "mc"};
    // rho sweep (fig3-style runs)
    std::vector<double> rho_values;
    // dimming sweeps (fig10/fig11-style runs)
    std::vector<double> mc_dimming_factors;
    std::vector<double> analytic_dimming_factors;
    // mobility (fig8/fig9-style runs)
    double mobility_height = ReferenceSetup::receiver_plane_drop;
    std::string mobility_layout = "uniform_disk"; // or "anchored"
    double mobility_disk_radius = 0.0;            // 0 = 0.95 * FOV radius
    std::vector<double> mobility_anchor_radii;
    bool mobility_group = true;
    bool mobility_label_true_rank = false;
    double mobility_velocity = 2.0;
    double mobility_interval = 1.0;
    int symbols_per_epoch = 500;
    bool mobility_baseline_twin = false; // also run the group-motion twin
    std::string out_prefix;

    void validate() const {
        if (snr_grid_db.empty()) throw std::invalid_argument("config: empty SNR grid");
        if (!(rho > 0.0) || !(rho < 1.0)) throw std::invalid_argument("config: rho outside (0,1)");
        if (trials < 10'000) throw std::invalid_argument("config: trials < 1e4");
        if (gains.empty()) throw std::invalid_argument("config: no users");
    }
};

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    j = nlohmann::json{
        {"scenario", c.scenario},
        {"snr_grid_db", c.snr_grid_db},
        {"gains", c.gains},
        {"total_power", c.total_power},
        {"rho", c.rho},
        {"responsivity", c.responsivity},
        {"trials", c.trials},
        {"seed", c.seed},
        {"threads", c.threads},
        {"csi",
         {{"kind",
           c.csi.kind == CsiErrorModel::Kind::perfect ? "perfect"
           : c.csi.kind == CsiErrorModel::Kind::noisy_fixed ? "noisy_fixed"
           : c.csi.kind == CsiErrorModel::Kind::noisy_snr_dependent ? "noisy_snr" : "outdated"},
          {"eps_var", c.csi.eps_var},
          {"kappa", c.csi.kappa},
          {"velocity", c.csi.max_velocity},
          {"interval", c.csi.update_interval}}},
        {"dimming",
         {{"scheme", c.dimming.scheme == DimmingConfig::Scheme::none ? "none"
                     : c.dimming.scheme == DimmingConfig::Scheme::analog ? "analog" : "vook"},
          {"factor", c.dimming.factor}}},
        {"bound_mode",
         c.bound_mode == ErrorBoundMode::gain_difference ? "gain_difference" : "literal"},
        {"curves", c.curves},
        {"rho_values", c.rho_values},
        {"mc_dimming_factors", c.mc_dimming_factors},
        {"analytic_dimming_factors", c.analytic_dimming_factors},
        {"mobility",
         {{"height", c.mobility_height},
          {"layout", c.mobility_layout},
          {"disk_radius", c.mobility_disk_radius},
          {"anchor_radii", c.mobility_anchor_radii},
          {"group", c.mobility_group},
          {"label_true_rank", c.mobility_label_true_rank},
          {"velocity", c.mobility_velocity},
          {"interval", c.mobility_interval},
          {"symbols_per_epoch", c.symbols_per_epoch},
          {"baseline_twin", c.mobility_baseline_twin}}},
        {"out_prefix", c.out_prefix}};
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    auto get = [&](const char* k, auto& v) {
        if (j.contains(k)) j.at(k).get_to(v);
    };
    get("scenario", c.scenario);
    if (j.contains("snr_grid_db")) {
        if (j["snr_grid_db"].is_object()) {
            const auto& r = j["snr_grid_db"];
            c.snr_grid_db = snr_range(r.at("start").get<double>(), r.at("stop").get<double>(),
                                      r.at("step").get<double>());
        } else {
            j.at("snr_grid_db").get_to(c.snr_grid_db);
        }
    }
    get("gains", c.gains);
    get("total_power", c.total_power);
    get("rho", c.rho);
    get("responsivity", c.responsivity);
    get("trials", c.trials);
    get("seed", c.seed);
    get("threads", c.threads);
    if (j.contains("csi")) {
        const auto& cs = j["csi"];
        std::string kind = cs.value("kind", "perfect");
        if (kind == "perfect") c.csi = CsiErrorModel::perfect();
        else if (kind == "noisy_fixed") c.csi = CsiErrorModel::noisy_fixed(cs.value("eps_var", 2e-6));
        else if (kind == "noisy_snr") c.csi = CsiErrorModel::noisy_snr(cs.value("kappa", 2e5));
        else if (kind == "outdated")
            c.csi = CsiErrorModel::outdated(cs.value("velocity", 2.0), cs.value("interval", 1.0));
        else throw std::invalid_argument("config: unknown csi kind " + kind);
    }
    if (j.contains("dimming")) {
        const auto& d = j["dimming"];
        std::string s = d.value("scheme", "none");
        c.dimming.scheme = s == "none" ? DimmingConfig::Scheme::none
                           : s == "analog" ? DimmingConfig::Scheme::analog
                           : DimmingConfig::Scheme::vook;
        c.dimming.factor = d.value("factor", 1.0);
    }
    if (j.contains("bound_mode"))
        c.bound_mode = j["bound_mode"].get<std::string>() == "literal"
                           ? ErrorBoundMode::literal
                           : ErrorBoundMode::gain_difference;
    get("curves", c.curves);
    get("rho_values", c.rho_values);
    get("mc_dimming_factors", c.mc_dimming_factors);
    get("analytic_dimming_factors", c.analytic_dimming_factors);
    if (j.contains("mobility")) {
        const auto& m = j["mobility"];
        c.mobility_height = m.value("height", c.mobility_height);
        c.mobility_layout = m.value("layout", c.mobility_layout);
        c.mobility_disk_radius = m.value("disk_radius", c.mobility_disk_radius);
        if (m.contains("anchor_radii")) m.at("anchor_radii").get_to(c.mobility_anchor_radii);
        c.mobility_group = m.value("group", c.mobility_group);
        c.mobility_label_true_rank = m.value("label_true_rank", c.mobility_label_true_rank);
        c.mobility_velocity = m.value("velocity", c.mobility_velocity);
        c.mobility_interval = m.value("interval", c.mobility_interval);
        c.symbols_per_epoch = m.value("symbols_per_epoch", c.symbols_per_epoch);
        c.mobility_baseline_twin = m.value("baseline_twin", c.mobility_baseline_twin);
    }
    get("out_prefix", c.out_prefix);
}

// ---------------------------------------------------------------------------
// Canned scenarios
// ---------------------------------------------------------------------------

inline std::vector<std::string> scenario_names() {
    return {"fig3", "fig4", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "custom"};
}

/// Fixed additive gain-error variance exercised by the fig6 error-floor run.
inline constexpr double kFloorScenarioEpsVar = 2.5e-11;
/// SNR-tracking error coefficient for the fig6 decreasing-variance run.
inline constexpr double kFloorScenarioKappa = 2.5;
/// Additive gain-error variance named by the fig7 comparison.
inline constexpr double kNoisyScenarioEpsVar = 2e-6;
/// Start radii of the similar-gain user triplet in the fig9 run.
inline const std::vector<double> kOrderChangeAnchors{0.65, 0.60, 0.55};
/// CSI update interval of the fig9 run (seconds).
inline constexpr double kOrderChangeInterval = 0.1;

inline ExperimentConfig expand_scenario(const std::string& tag) {
    ExperimentConfig c;
    c.scenario = tag;
    c.out_prefix = tag;
    if (tag == "custom") return c;
    if (tag == "fig3") {
        c.snr_grid_db = {110.0, 115.0, 120.0};
        c.curves = {"analytic"};
        c.rho_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        return c;
    }
    if (tag == "fig4") {
        c.curves = {"analytic", "mc", "oracle"};
        return c;
    }
    if (tag == "fig6") {
        c.curves = {"mc_fixed", "mc_snrdep", "analytic_perfect"};
        c.csi = CsiErrorModel::noisy_fixed(kFloorScenarioEpsVar);
        return c;
    }
    if (tag == "fig7") {
        c.curves = {"mc", "analytic_approx", "analytic_quadrature"};
        c.csi = CsiErrorModel::noisy_fixed(kNoisyScenarioEpsVar);
        return c;
    }
    if (tag == "fig8") {
        c.curves = {"mc", "bound"};
        c.csi = CsiErrorModel::outdated(2.0, 1.0);
        c.mobility_layout = "uniform_disk";
        c.mobility_group = true;
        c.mobility_velocity = 2.0;
        c.mobility_interval = 1.0;
        return c;
    }
    if (tag == "fig9") {
        c.curves = {"mc", "bound"};
        c.csi = CsiErrorModel::outdated(2.0, kOrderChangeInterval);
        c.mobility_layout = "anchored";
        c.mobility_anchor_radii = kOrderChangeAnchors;
        c.mobility_group = false;
        c.mobility_label_true_rank = true;
        c.mobility_velocity = 2.0;
        c.mobility_interval = kOrderChangeInterval;
        c.mobility_baseline_twin = true;
        return c;
    }
    if (tag == "fig10") {
        c.snr_grid_db = {120.0};
        c.curves = {"dimming_analog"};
        c.mc_dimming_factors = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        c.analytic_dimming_factors = c.mc_dimming_factors;
        return c;
    }
    if (tag == "fig11") {
        c.snr_grid_db = {110.0};
        c.curves = {"dimming_vook"};
        c.mc_dimming_factors = {0.1, 0.5};
        c.analytic_dimming_factors = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        return c;
    }
    throw std::invalid_argument("unknown scenario: " + tag);
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

struct RunSummary {
    std::vector<std::string> files;
    double wall_seconds = 0.0;
    long long clamped_estimates = 0;
    long long noisy_fallback_terms = 0;
    long long noisy_clamped = 0;
    double order_preserved_fraction = -1.0;
    std::string metadata_path;
};

namespace detail {

inline TrialConfig trial_config_from(const ExperimentConfig& c) {
    TrialConfig t;
    t.gains = c.gains;
    t.total_power = c.total_power;
    t.rho = c.rho;
    t.responsivity = c.responsivity;
    t.snr_grid_db = c.snr_grid_db;
    t.bits_per_user = c.trials;
    t.seed = c.seed;
    t.csi = c.csi;
    t.dimming = c.dimming;
    t.threads = c.threads;
    return t;
}

inline MobilityConfig mobility_config_from(const ExperimentConfig& c) {
    MobilityConfig m;
    m.users = static_cast<int>(c.gains.size());
    m.height = c.mobility_height;
    m.frontend = ReceiverFrontEnd{};
    if (c.mobility_layout == "anchored") {
        m.layout.kind = MobilityLayout::Kind::anchored_radii;
        m.layout.anchor_radii = c.mobility_anchor_radii;
    } else {
        m.layout.kind = MobilityLayout::Kind::uniform_disk;
        double rfov = c.mobility_height * std::tan(m.frontend.fov);
        m.layout.disk_radius =
            c.mobility_disk_radius > 0.0 ? c.mobility_disk_radius : 0.95 * rfov;
    }
    m.group_motion = c.mobility_group;
    m.label_by_true_rank = c.mobility_label_true_rank;
    m.max_velocity = c.mobility_velocity;
    m.update_interval = c.mobility_interval;
    m.total_power = c.total_power;
    m.rho = c.rho;
    m.responsivity = c.responsivity;
    m.snr_grid_db = c.snr_grid_db;
    m.bits_per_user = c.trials;
    m.seed = c.seed;
    m.symbols_per_epoch = c.symbols_per_epoch;
    m.threads = c.threads;
    m.bound_mode = c.bound_mode;
    return m;
}

inline std::string dim_tag(double gd) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", gd);
    return buf;
}

} // namespace detail

/// Run one experiment into out_dir. Every produced CSV is listed in the
/// metadata sidecar; the sidecar exists (marked incomplete) from the moment
/// any output may exist.
inline RunSummary run_experiment(const ExperimentConfig& cfg_in, const std::string& out_dir) {
    ExperimentConfig cfg = cfg_in;
    cfg.validate();
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string prefix = cfg.out_prefix.empty() ? cfg.scenario : cfg.out_prefix;
    RunSummary summary;
    summary.metadata_path = (fs::path(out_dir) / (prefix + "_meta.json")).string();

    nlohmann::json meta;
    meta["version"] = kVersion;
    meta["config"] = cfg;
    meta["seed"] = cfg.seed;
    meta["status"] = "incomplete";
    write_text_file(summary.metadata_path, meta.dump(2) + "\n");

    auto t0 = std::chrono::steady_clock::now();
    NoisyEvalCounters noisy_counters;

    auto emit = [&](const std::string& name, const std::vector<CsvRow>& rows) {
        std::string path = (fs::path(out_dir) / (prefix + "_" + name + ".csv")).string();
        write_text_file(path, curve_csv_body(rows));
        summary.files.push_back(path);
    };

    auto has_curve = [&](const std::string& n) {
        return std::find(cfg.curves.begin(), cfg.curves.end(), n) != cfg.curves.end();
    };

    if (!cfg.rho_values.empty()) {
        // Allocation-factor sweep: one file per rho, per-user plus average rows.
        for (double rho : cfg.rho_values) {
            BerCurve a = analytic_curve(cfg.gains, cfg.total_power, rho, cfg.responsivity,
                                        cfg.snr_grid_db, CsiErrorModel::perfect());
            emit("analytic_rho" + detail::dim_tag(rho), rows_from_curve(a, true));
        }
    } else if (!cfg.mc_dimming_factors.empty() || !cfg.analytic_dimming_factors.empty()) {
        const bool vook = has_curve("dimming_vook");
        auto scheme = vook ? DimmingConfig::Scheme::vook : DimmingConfig::Scheme::analog;
        for (double gd : cfg.analytic_dimming_factors) {
            AnalyticOptions opt;
            opt.dimming = {scheme, gd};
            opt.counters = &noisy_counters;
            BerCurve a = analytic_curve(cfg.gains, cfg.total_power, cfg.rho, cfg.responsivity,
                                        cfg.snr_grid_db, cfg.csi, opt);
            emit("analytic_gd" + detail::dim_tag(gd), rows_from_curve(a));
        }
        for (double gd : cfg.mc_dimming_factors) {
            TrialConfig t = detail::trial_config_from(cfg);
            t.dimming = {scheme, gd};
            BerCurve m = run_trials(t);
            summary.clamped_estimates += m.clamped_estimates;
            emit("mc_gd" + detail::dim_tag(gd), rows_from_curve(m));
        }
    } else if (cfg.csi.kind == CsiErrorModel::Kind::outdated) {
        MobilityConfig m = detail::mobility_config_from(cfg);
        MobilityResult r = run_mobility(m);
        summary.clamped_estimates += r.mc.clamped_estimates;
        summary.order_preserved_fraction = r.order_preserved_fraction;
        if (has_curve("mc")) emit("mc", rows_from_curve(r.mc));
        if (has_curve("bound")) emit("bound", rows_from_curve(r.bound));
        if (cfg.mobility_baseline_twin) {
            MobilityConfig twin = m;
            twin.group_motion = true;
            twin.label_by_true_rank = false;
            MobilityResult rt = run_mobility(twin);
            emit("baseline_mc", rows_from_curve(rt.mc));
        }
        meta["order_preserved_fraction"] = r.order_preserved_fraction;
    } else {
        if (has_curve("analytic") || has_curve("analytic_perfect")) {
            BerCurve a = analytic_curve(cfg.gains, cfg.total_power, cfg.rho, cfg.responsivity,
                                        cfg.snr_grid_db, CsiErrorModel::perfect());
            emit("analytic", rows_from_curve(a));
        }
        if (has_curve("analytic_approx")) {
            AnalyticOptions opt;
            opt.counters = &noisy_counters;
            BerCurve a = analytic_curve(cfg.gains, cfg.total_power, cfg.rho, cfg.responsivity,
                                        cfg.snr_grid_db, cfg.csi, opt);
            emit("approx", rows_from_curve(a));
        }
        if (has_curve("analytic_quadrature")) {
            AnalyticOptions opt;
            opt.force_quadrature = true;
            opt.counters = &noisy_counters;
            BerCurve a = analytic_curve(cfg.gains, cfg.total_power, cfg.rho, cfg.responsivity,
                                        cfg.snr_grid_db, cfg.csi, opt);
            emit("quadrature", rows_from_curve(a));
        }
        if (has_curve("oracle")) {
            BerCurve o = oracle_curve(cfg.gains, cfg.total_power, cfg.rho, cfg.responsivity,
                                      cfg.snr_grid_db);
            emit("oracle", rows_from_curve(o));
        }
        if (has_curve("mc")) {
            TrialConfig t = detail::trial_config_from(cfg);
            BerCurve m = run_trials(t);
            summary.clamped_estimates += m.clamped_estimates;
            emit("mc", rows_from_curve(m));
        }
        if (has_curve("mc_fixed")) {
            TrialConfig t = detail::trial_config_from(cfg);
            t.csi = CsiErrorModel::noisy_fixed(kFloorScenarioEpsVar);
            BerCurve m = run_trials(t);
            summary.clamped_estimates += m.clamped_estimates;
            emit("fixed_mc", rows_from_curve(m));
        }
        if (has_curve("mc_snrdep")) {
            TrialConfig t = detail::trial_config_from(cfg);
            t.csi = CsiErrorModel::noisy_snr(kFloorScenarioKappa);
            BerCurve m = run_trials(t);
            summary.clamped_estimates += m.clamped_estimates;
            emit("snrdep_mc", rows_from_curve(m));
        }
    }

    auto t1 = std::chrono::steady_clock::now();
    summary.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    summary.noisy_fallback_terms = noisy_counters.fallback_terms;
    summary.noisy_clamped = noisy_counters.clamped;

    meta["status"] = "complete";
    meta["wall_seconds"] = summary.wall_seconds;
    meta["files"] = summary.files;
    meta["counters"] = {{"clamped_estimates", summary.clamped_estimates},
                        {"noisy_fallback_terms", summary.noisy_fallback_terms},
                        {"noisy_clamped", summary.noisy_clamped}};
    write_text_file(summary.metadata_path, meta.dump(2) + "\n");
    return summary;
}

// ---------------------------------------------------------------------------
// Curve comparison
// ---------------------------------------------------------------------------

struct CompareRule {
    enum class Kind { three_sigma, factor, bound_ge_ref };
    Kind kind = Kind::three_sigma;
    double factor = 2.0;   // for Kind::factor
    double min_ber = 0.0;  // evaluate only where the reference exceeds this
    double sigmas = 3.0;
};

struct ComparePoint {
    double snr_db;
    int user;
    double a, b;
    double deviation; // rule-specific figure of merit
    bool pass;
    bool skipped;
};

struct CompareReport {
    bool pass = true;
    int evaluated = 0;
    int failed = 0;
    double worst_deviation = 0.0;
    std::vector<ComparePoint> points;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["pass"] = pass;
        j["evaluated"] = evaluated;
        j["failed"] = failed;
        j["worst_deviation"] = worst_deviation;
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : points)
            pts.push_back({{"snr_db", p.snr_db},
                           {"user", p.user},
                           {"a", p.a},
                           {"b", p.b},
                           {"deviation", p.deviation},
                           {"pass", p.pass},
                           {"skipped", p.skipped}});
        j["points"] = pts;
        return j;
    }
};

/// Point-by-point comparison of curve A against reference curve B over the
/// shared (snr, user) grid. Grids must match exactly.
inline CompareReport compare_curves(const std::vector<CsvRow>& a, const std::vector<CsvRow>& b,
                                    const CompareRule& rule) {
    auto key = [](const CsvRow& r) { return std::make_pair(r.snr_db, r.user); };
    std::map<std::pair<double, int>, CsvRow> bm;
    for (const auto& r : b) bm[key(r)] = r;
    if (a.size() != b.size()) throw std::runtime_error("compare: row counts differ");
    CompareReport rep;
    for (const auto& ra : a) {
        auto it = bm.find(key(ra));
        if (it == bm.end()) throw std::runtime_error("compare: grids differ");
        const CsvRow& rb = it->second;
        ComparePoint p{ra.snr_db, ra.user, ra.ber, rb.ber, 0.0, true, false};
        if (rb.ber <= rule.min_ber) {
            p.skipped = true;
            rep.points.push_back(p);
            continue;
        }
        switch (rule.kind) {
            case CompareRule::Kind::three_sigma: {
                double s = std::sqrt(ra.stderr_ * ra.stderr_ + rb.stderr_ * rb.stderr_);
                double d = std::fabs(ra.ber - rb.ber);
                p.deviation = s > 0.0 ? d / s : (d > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
                p.pass = p.deviation <= rule.sigmas;
                break;
            }
            case CompareRule::Kind::factor: {
                double hi = std::max(ra.ber, rb.ber), lo = std::min(ra.ber, rb.ber);
                p.deviation = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
                p.pass = p.deviation <= rule.factor;
                break;
            }
            case CompareRule::Kind::bound_ge_ref: {
                p.deviation = rb.ber > 0.0 ? rb.ber / std::max(ra.ber, 1e-300) : 0.0;
                p.pass = ra.ber >= rb.ber;
                break;
            }
        }
        ++rep.evaluated;
        rep.worst_deviation = std::max(rep.worst_deviation, p.deviation);
        if (!p.pass) {
            ++rep.failed;
            rep.pass = false;
        }
        rep.points.push_back(p);
    }
    return rep;
}

} // namespace vlcnoma
