// jcs_cli.cpp - command-line front end: beta sweeps, single trials with grid
// dumps, and a resolutions table. Configuration comes from an optional JSON
// file; every field falls back to the built-in defaults.

#include "jcs/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct CaseDims {
    std::size_t M;
    std::size_t N;
};

CaseDims parse_case(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= s.size())
        throw std::invalid_argument("case must look like 1024x128, got: " + s);
    return {std::stoull(s.substr(0, x)), std::stoull(s.substr(x + 1))};
}

void load_config(const std::string& path, jcs::SystemConfig& cfg, jcs::UserScenario& scen) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    json j;
    f >> j;

    if (j.contains("system")) {
        const json& s = j["system"];
        cfg.f_c = s.value("f_c", cfg.f_c);
        cfg.delta_f = s.value("delta_f", cfg.delta_f);
        cfg.T = s.value("T", cfg.T);
        cfg.M = s.value("M", cfg.M);
        cfg.N = s.value("N", cfg.N);
        cfg.P_tot_ft = s.value("P_tot_ft", cfg.P_tot_ft);
        cfg.noise_psd = s.value("noise_psd", cfg.noise_psd);
        cfg.noise_figure_db = s.value("noise_figure_db", cfg.noise_figure_db);
        cfg.rng_seed = s.value("rng_seed", cfg.rng_seed);
    }
    if (j.contains("scenario")) {
        const json& sc = j["scenario"];
        scen.qam_order = sc.value("qam_order", scen.qam_order);
        if (sc.contains("users")) {
            scen.users.clear();
            for (const json& ju : sc["users"]) {
                jcs::UserSpec u;
                u.range_m = ju.value("range_m", u.range_m);
                u.velocity_ms = ju.value("velocity_ms", u.velocity_ms);
                u.motion_angle_rad = ju.value("motion_angle_rad", u.motion_angle_rad);
                u.num_paths = ju.value("num_paths", u.num_paths);
                u.M_cu = ju.value("M_cu", u.M_cu);
                u.N_cu = ju.value("N_cu", u.N_cu);
                scen.users.push_back(u);
            }
        }
    }
}

void print_resolutions(const jcs::SystemConfig& cfg) {
    const jcs::Resolutions r = jcs::resolutions(cfg);
    std::printf("M=%zu N=%zu\n", cfg.M, cfg.N);
    std::printf("  delay bin   %.6e s    (range    %.5f m)\n", r.delta_tau, r.delta_R);
    std::printf("  doppler bin %.6e Hz   (velocity %.5f m/s)\n", r.delta_nu, r.delta_V);
    std::printf("  unambiguous range    %.3f m\n", r.R_max_unambiguous);
    std::printf("  unambiguous velocity +-%.3f m/s\n", r.V_max_unambiguous);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-domain joint communication and sensing simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> cases{"1024x128"};
    double beta_min = -5e-3, beta_max = -1e-4;
    std::size_t beta_points = 12, trials = 100;
    std::uint64_t seed = 1;
    std::string out_path = "sweep.csv";
    bool serial = false;

    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over the power split");
    sweep->add_option("--config", config_path, "JSON config file");
    sweep->add_option("--cases", cases, "grid cases, e.g. 1024x128 2048x256");
    sweep->add_option("--beta-min", beta_min, "most negative beta");
    sweep->add_option("--beta-max", beta_max, "least negative beta");
    sweep->add_option("--beta-points", beta_points, "number of beta points");
    sweep->add_option("--trials", trials, "trials per beta point");
    sweep->add_option("--seed", seed, "master RNG seed");
    sweep->add_option("--out", out_path, "output CSV path");
    sweep->add_flag("--serial", serial, "disable the parallel kernels");

    double beta = -5e-3;
    std::size_t trial_index = 0;
    std::string trial_case, dump_txft, dump_ydd;
    CLI::App* trial = app.add_subcommand("trial", "run one trial and optionally dump grids");
    trial->add_option("--config", config_path, "JSON config file");
    trial->add_option("--case", trial_case, "grid case, e.g. 1024x128");
    trial->add_option("--beta", beta, "power split exponent (negative)");
    trial->add_option("--trial", trial_index, "trial index");
    trial->add_option("--seed", seed, "master RNG seed");
    trial->add_option("--dump-txft", dump_txft, "write the transmitted FT grid here");
    trial->add_option("--dump-ydd", dump_ydd, "write the sensing DD grid here");
    trial->add_flag("--serial", serial, "disable the parallel kernels");

    CLI::App* resol = app.add_subcommand("resolutions", "print delay/Doppler resolutions");
    resol->add_option("--config", config_path, "JSON config file");
    resol->add_option("--cases", cases, "grid cases, e.g. 1024x128 2048x256");

    CLI11_PARSE(app, argc, argv);

    try {
        jcs::SystemConfig cfg;
        jcs::UserScenario scen = jcs::default_scenario();
        if (!config_path.empty()) load_config(config_path, cfg, scen);
        const jcs::Exec exec = serial ? jcs::Exec::serial : jcs::Exec::parallel;

        if (resol->parsed()) {
            for (const std::string& c : cases) {
                const CaseDims d = parse_case(c);
                cfg.M = d.M;
                cfg.N = d.N;
                print_resolutions(cfg);
            }
            return 0;
        }

        if (trial->parsed()) {
            cfg.rng_seed = seed;
            if (!trial_case.empty()) {
                const CaseDims d = parse_case(trial_case);
                cfg.M = d.M;
                cfg.N = d.N;
            }
            jcs::TrialArtifacts art;
            const jcs::TrialResult r =
                jcs::run_trial(cfg, scen, beta, trial_index, exec, &art);
            std::printf("beta=%.6g trial=%zu mean_ber=%.6g snr_ft=%.3f dB snr_dd=%.3f dB\n",
                        r.beta, r.trial_index, r.mean_ber, jcs::to_db(r.snr_ft_lin),
                        jcs::to_db(r.snr_dd_lin));
            for (std::size_t u = 0; u < r.user_ber.size(); ++u)
                std::printf("  user %zu: ber=%.6g err_range=%.4f m err_velocity=%.4f m/s\n",
                            u, r.user_ber[u], r.err_range_m[u], r.err_velocity_ms[u]);
            if (!dump_txft.empty()) {
                jcs::dump_grid(art.x_ft, dump_txft);
                jcs::dump_power_csv(art.x_ft, dump_txft + ".pow.csv");
            }
            if (!dump_ydd.empty()) {
                jcs::dump_grid(art.y_dd, dump_ydd);
                jcs::dump_power_csv(art.y_dd, dump_ydd + ".pow.csv");
            }
            return 0;
        }

        // sweep
        std::string csv;
        for (const std::string& c : cases) {
            const CaseDims d = parse_case(c);
            jcs::SweepSpec spec;
            spec.cfg = cfg;
            spec.cfg.M = d.M;
            spec.cfg.N = d.N;
            spec.cfg.rng_seed = seed;
            spec.scenario = scen;
            spec.betas = jcs::default_betas(beta_min, beta_max, beta_points);
            spec.trials = trials;
            spec.exec = exec;
            const jcs::SweepResult res = jcs::run_sweep(spec);
            const std::string s = jcs::sweep_csv(res);
            if (csv.empty())
                csv = s;
            else
                csv += s.substr(s.find('\n') + 1);  // drop the repeated header
            std::fprintf(stderr, "case %zux%zu done (%zu betas x %zu trials)\n", d.M, d.N,
                         spec.betas.size(), trials);
        }
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output: " + out_path);
        f << csv;
        std::fprintf(stderr, "wrote %s\n", out_path.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
