#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlcnoma/experiment.hpp"

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv(vlcnoma::kOutDirEnv)) return env;
    return "out";
}

int cmd_run(const std::string& scenario, const std::string& config_path,
            const std::string& out_dir, const std::vector<double>& snr_override,
            double rho, long long trials, uint64_t seed, int threads, const std::string& csi,
            double eps_var, double kappa, const std::string& dimming, double dimming_factor,
            bool literal_bound) {
    vlcnoma::ExperimentConfig cfg = vlcnoma::expand_scenario(scenario);
    if (!config_path.empty()) {
        nlohmann::json j = nlohmann::json::parse(vlcnoma::read_text_file(config_path));
        if (j.contains("scenario") && scenario == "custom")
            cfg = vlcnoma::expand_scenario(j["scenario"].get<std::string>());
        vlcnoma::from_json(j, cfg);
    }
    if (!snr_override.empty()) {
        if (snr_override.size() == 3 && snr_override[2] > 0 && snr_override[1] > snr_override[0])
            cfg.snr_grid_db =
                vlcnoma::snr_range(snr_override[0], snr_override[1], snr_override[2]);
        else
            cfg.snr_grid_db = snr_override;
    }
    if (rho > 0.0) cfg.rho = rho;
    if (trials > 0) cfg.trials = trials;
    if (seed != 0) cfg.seed = seed;
    if (threads > 0) cfg.threads = threads;
    if (!csi.empty()) {
        if (csi == "perfect") cfg.csi = vlcnoma::CsiErrorModel::perfect();
        else if (csi == "noisy_fixed") cfg.csi = vlcnoma::CsiErrorModel::noisy_fixed(eps_var);
        else if (csi == "noisy_snr") cfg.csi = vlcnoma::CsiErrorModel::noisy_snr(kappa);
        else if (csi == "outdated")
            cfg.csi = vlcnoma::CsiErrorModel::outdated(cfg.mobility_velocity,
                                                       cfg.mobility_interval);
        else {
            std::cerr << "unknown --csi value: " << csi << "\n";
            return 2;
        }
    }
    if (!dimming.empty()) {
        if (dimming == "none") cfg.dimming = {vlcnoma::DimmingConfig::Scheme::none, 1.0};
        else if (dimming == "analog")
            cfg.dimming = {vlcnoma::DimmingConfig::Scheme::analog, dimming_factor};
        else if (dimming == "vook")
            cfg.dimming = {vlcnoma::DimmingConfig::Scheme::vook, dimming_factor};
        else {
            std::cerr << "unknown --dimming value: " << dimming << "\n";
            return 2;
        }
    }
    if (literal_bound) cfg.bound_mode = vlcnoma::ErrorBoundMode::literal;

    try {
        vlcnoma::RunSummary s = vlcnoma::run_experiment(cfg, out_dir);
        std::cout << "scenario " << cfg.scenario << ": " << s.files.size() << " file(s) in "
                  << out_dir << " (" << s.wall_seconds << " s)\n";
        for (const auto& f : s.files) std::cout << "  " << f << "\n";
        std::cout << "  " << s.metadata_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const std::string& rule,
                double factor, double min_ber, double sigmas, const std::string& report_path) {
    try {
        auto a = vlcnoma::parse_curve_csv(vlcnoma::read_text_file(a_path));
        auto b = vlcnoma::parse_curve_csv(vlcnoma::read_text_file(b_path));
        vlcnoma::CompareRule r;
        if (rule == "three-sigma") r.kind = vlcnoma::CompareRule::Kind::three_sigma;
        else if (rule == "factor") r.kind = vlcnoma::CompareRule::Kind::factor;
        else if (rule == "bound-ge-ref") r.kind = vlcnoma::CompareRule::Kind::bound_ge_ref;
        else {
            std::cerr << "unknown --rule: " << rule << "\n";
            return 2;
        }
        r.factor = factor;
        r.min_ber = min_ber;
        r.sigmas = sigmas;
        vlcnoma::CompareReport rep = vlcnoma::compare_curves(a, b, r);
        nlohmann::json j = rep.to_json();
        j["a"] = a_path;
        j["b"] = b_path;
        j["rule"] = rule;
        if (!report_path.empty()) vlcnoma::write_text_file(report_path, j.dump(2) + "\n");
        std::cout << j.dump(2) << "\n";
        return rep.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "compare failed: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"NOMA visible-light link simulator and BER calculator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a scenario and write CSV curves");
    std::string scenario = "custom", config_path, out_dir = default_out_dir();
    std::vector<double> snr;
    double rho = -1.0;
    long long trials = -1;
    uint64_t seed = 0;
    int threads = 0;
    std::string csi, dimming;
    double eps_var = 2e-6, kappa = 2e5, dimming_factor = 1.0;
    bool literal_bound = false;
    run->add_option("--scenario", scenario, "scenario tag (see list-scenarios)");
    run->add_option("--config", config_path, "JSON config file; command-line flags win");
    run->add_option("--out-dir", out_dir, "output directory (default $VLCNOMA_OUT_DIR or ./out)");
    run->add_option("--snr", snr, "SNR grid: explicit list, or start stop step triple");
    run->add_option("--rho", rho, "allocation factor in (0,1)");
    run->add_option("--trials", trials, "bits per user per grid point");
    run->add_option("--seed", seed, "random seed (nonzero)");
    run->add_option("--threads", threads, "worker threads (0 = hardware)");
    run->add_option("--csi", csi, "perfect | noisy_fixed | noisy_snr | outdated");
    run->add_option("--eps-var", eps_var, "gain-error variance for noisy_fixed");
    run->add_option("--kappa", kappa, "gain-error coefficient for noisy_snr");
    run->add_option("--dimming", dimming, "none | analog | vook");
    run->add_option("--dimming-factor", dimming_factor, "brightness target in [0,1]");
    run->add_flag("--literal-bound", literal_bound, "use the literal error-bound form");

    // compare
    auto* cmp = app.add_subcommand("compare", "compare two curve CSVs");
    std::string a_path, b_path, rule = "three-sigma", report_path;
    double factor = 2.0, min_ber = 0.0, sigmas = 3.0;
    cmp->add_option("a", a_path, "curve under test")->required();
    cmp->add_option("b", b_path, "reference curve")->required();
    cmp->add_option("--rule", rule, "three-sigma | factor | bound-ge-ref");
    cmp->add_option("--factor", factor, "allowed ratio for --rule factor");
    cmp->add_option("--min-ber", min_ber, "skip points where the reference is at or below this");
    cmp->add_option("--sigmas", sigmas, "sigma multiple for --rule three-sigma");
    cmp->add_option("--report", report_path, "also write the JSON report here");

    // list-scenarios
    auto* ls = app.add_subcommand("list-scenarios", "list canned scenario tags");

    CLI11_PARSE(app, argc, argv);

    if (ls->parsed()) {
        for (const auto& s : vlcnoma::scenario_names()) std::cout << s << "\n";
        return 0;
    }
    if (run->parsed())
        return cmd_run(scenario, config_path, out_dir, snr, rho, trials, seed, threads, csi,
                       eps_var, kappa, dimming, dimming_factor, literal_bound);
    if (cmp->parsed())
        return cmd_compare(a_path, b_path, rule, factor, min_ber, sigmas, report_path);
    return 2;
}
