// experiments.cpp - trial workspace, per-beta evaluation, Monte Carlo sweep.
//
// A trial draws its placement, payload, pilots, pulse phase, channels, and
// noise exactly once (streams keyed by trial and user, never by beta), then
// every beta point reuses those draws with only the power scaling changed.
// The received grids are linear in the two transmit amplitudes, so each trial
// precomputes three components (pulse, comm, noise) per receiver and combines
// them per beta: y = sqrt(P) * pulse + sqrt(P_c) * comm + noise.

#include "jcs/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace jcs {

namespace {

/// Beta-independent per-trial state.
struct Workspace {
    std::vector<UserAllocation> allocs;
    std::vector<QamFrame> frames;
    // Per-user received-block components (unit transmit amplitudes).
    std::vector<ComplexGrid> b_comm;
    std::vector<ComplexGrid> b_pulse;
    std::vector<ComplexGrid> b_noise;
    std::vector<double> gain_ft;
    // Sensing receiver components, already in the DD domain.
    ComplexGrid ydd_pulse;
    ComplexGrid ydd_comm;
    ComplexGrid ydd_noise;
    double gain_dd = 0.0;
    // Unit-amplitude transmit images, kept for the dump hooks.
    ComplexGrid x_c_unit;
    ComplexGrid s_ft_unit;
    std::size_t num_pulses = 1;
};

Workspace build_workspace(const SystemConfig& cfg, const UserScenario& scenario,
                          std::size_t trial, Exec exec) {
    const std::size_t M = cfg.M;
    const std::size_t N = cfg.N;
    const double p_n = noise_power_per_bin(cfg);
    const RandomSource src(cfg.rng_seed);

    Workspace ws;
    {
        RandomStream rng = src.stream("placement", trial);
        ws.allocs = allocate_users(scenario, cfg, rng);
    }

    const std::size_t U = ws.allocs.size();
    ws.frames.reserve(U);
    for (std::size_t u = 0; u < U; ++u) {
        RandomStream data = src.stream("data", trial, u);
        RandomStream pilots = src.stream("pilots", trial, u);
        ws.frames.push_back(
            make_user_frame(ws.allocs[u].m_size, ws.allocs[u].n_size, data, pilots));
    }

    // Unit-power pulse at the fixed origin with a random phase.
    ComplexGrid x_s_dd(M, N);
    {
        RandomStream rng = src.stream("pulse", trial);
        const double phase = 2.0 * M_PI * rng.uniform();
        x_s_dd(kPulseL0, N / 2) = std::polar(1.0, phase);
    }
    ws.s_ft_unit = isfft(x_s_dd, exec);

    // Per-user downlink: channel block, data and pulse components, own noise.
    ws.b_comm.resize(U);
    ws.b_pulse.resize(U);
    ws.b_noise.resize(U);
    ws.gain_ft.resize(U);
    for (std::size_t u = 0; u < U; ++u) {
        const UserAllocation& a = ws.allocs[u];
        RandomStream rng_ch = src.stream("chan_comm", trial, u);
        const std::vector<PathParams> paths =
            comm_paths_for_user(scenario.users[u], cfg, rng_ch);
        const ComplexGrid h = comm_channel_ft(paths, a, cfg, exec);
        ws.gain_ft[u] = mean_power(h);

        ComplexGrid bc(a.m_size, a.n_size), bp(a.m_size, a.n_size), bn(a.m_size, a.n_size);
        for (std::size_t m = 0; m < a.m_size; ++m) {
            for (std::size_t n = 0; n < a.n_size; ++n) {
                bc(m, n) = h(m, n) * ws.frames[u].symbols(m, n);
                bp(m, n) = h(m, n) * ws.s_ft_unit(a.m_offset + m, a.n_offset + n);
            }
        }
        RandomStream rng_noise = src.stream("noise_comm", trial, u);
        for (std::size_t i = 0; i < bn.size(); ++i) bn.data[i] = rng_noise.cnormal(p_n);
        ws.b_comm[u] = std::move(bc);
        ws.b_pulse[u] = std::move(bp);
        ws.b_noise[u] = std::move(bn);
    }

    // Sensing receiver: echo channel applied to both transmit components.
    ComplexGrid h_s;
    {
        RandomStream rng = src.stream("chan_sens", trial);
        h_s = sensing_channel_ft(scenario, cfg, rng, exec);
    }
    ws.gain_dd = mean_power(h_s);
    ws.x_c_unit = build_comm_grid(ws.allocs, ws.frames, 1.0, M, N);

    ComplexGrid yp(M, N), yc(M, N);
    for (std::size_t i = 0; i < h_s.size(); ++i) {
        yp.data[i] = h_s.data[i] * ws.s_ft_unit.data[i];
        yc.data[i] = h_s.data[i] * ws.x_c_unit.data[i];
    }
    ws.ydd_pulse = sfft(yp, exec);
    ws.ydd_comm = sfft(yc, exec);

    ComplexGrid w_s(M, N);
    {
        RandomStream rng = src.stream("noise_sens", trial);
        for (std::size_t i = 0; i < w_s.size(); ++i) w_s.data[i] = rng.cnormal(p_n);
    }
    ws.ydd_noise = sfft(w_s, exec);
    return ws;
}

TrialResult eval_beta(const Workspace& ws, const SystemConfig& cfg,
                      const UserScenario& scenario, double beta, std::size_t trial,
                      Exec exec, TrialArtifacts* artifacts) {
    (void)exec;  // the combine loops are elementwise; kernels already ran in build
    const std::size_t M = cfg.M;
    const std::size_t N = cfg.N;
    const std::size_t U = ws.allocs.size();
    const double p_n = noise_power_per_bin(cfg);
    const auto [p_c, p_s] = power_split(beta, cfg);
    const double p_s_dd =
        p_s * static_cast<double>(M * N) / static_cast<double>(ws.num_pulses);
    const double amp_c = std::sqrt(p_c);
    const double amp_p = std::sqrt(p_s_dd);
    const RandomSource src(cfg.rng_seed);

    TrialResult r;
    r.beta = beta;
    r.trial_index = trial;

    // Communication side, one receiver per user.
    r.user_ber.resize(U);
    double snr_acc = 0.0;
    for (std::size_t u = 0; u < U; ++u) {
        const UserAllocation& a = ws.allocs[u];
        ComplexGrid y(a.m_size, a.n_size);
        for (std::size_t i = 0; i < y.size(); ++i)
            y.data[i] = amp_c * ws.b_comm[u].data[i] + amp_p * ws.b_pulse[u].data[i] +
                        ws.b_noise[u].data[i];
        const ComplexGrid h_hat = estimate_channel(y, ws.frames[u], p_c);
        RandomStream erasure = src.stream("erasure", trial, u);
        const auto [bits, erased] = equalize_demap(y, h_hat, ws.frames[u], p_c, erasure);
        (void)erased;
        r.user_ber[u] = ber(ws.frames[u].bits, bits);
        r.mean_ber += r.user_ber[u];
        snr_acc += p_c * ws.gain_ft[u] / (p_s * ws.gain_ft[u] + p_n);
    }
    r.mean_ber /= static_cast<double>(U);
    r.snr_ft_lin = snr_acc / static_cast<double>(U);

    // Sensing side: combine the DD components, detect, estimate, associate.
    ComplexGrid y_dd(M, N);
    for (std::size_t i = 0; i < y_dd.size(); ++i)
        y_dd.data[i] = amp_p * ws.ydd_pulse.data[i] + amp_c * ws.ydd_comm.data[i] +
                       ws.ydd_noise.data[i];

    const auto peaks = detect_peaks(y_dd, U, kPeakWinL, kPeakWinK);
    std::vector<SensingEstimate> est = estimate_params(peaks, kPulseL0, N / 2, cfg);
    for (SensingEstimate& e : est) e.peak_power = std::norm(y_dd(e.l, e.k));

    std::vector<double> true_ranges(U);
    for (std::size_t u = 0; u < U; ++u) true_ranges[u] = scenario.users[u].range_m;
    const std::vector<std::size_t> assoc = associate_nearest_range(est, true_ranges);

    r.err_range_m.resize(U);
    r.err_velocity_ms.resize(U);
    r.peak_l.resize(U);
    r.peak_k.resize(U);
    double p_c_dd_total = 0.0;
    for (std::size_t u = 0; u < U; ++u) {
        const SensingEstimate& e = est[assoc[u]];
        const UserSpec& spec_u = scenario.users[u];
        r.err_range_m[u] = e.range_m - spec_u.range_m;
        r.err_velocity_ms[u] =
            e.velocity_ms - spec_u.velocity_ms * std::cos(spec_u.motion_angle_rad);
        r.peak_l[u] = est[u].l;
        r.peak_k[u] = est[u].k;
        p_c_dd_total += p_c * static_cast<double>(spec_u.M_cu * spec_u.N_cu) /
                        static_cast<double>(M * N);
    }
    r.snr_dd_lin = sensing_snr(ws.gain_dd, p_s_dd, p_c_dd_total, p_n);

    if (artifacts) {
        ComplexGrid x(M, N);
        for (std::size_t i = 0; i < x.size(); ++i)
            x.data[i] = amp_c * ws.x_c_unit.data[i] + amp_p * ws.s_ft_unit.data[i];
        artifacts->x_ft = std::move(x);
        artifacts->y_dd = std::move(y_dd);
    }
    return r;
}

} // namespace

std::vector<double> default_betas(double beta_min, double beta_max, std::size_t points) {
    if (!(beta_min < 0.0) || !(beta_max < 0.0) || beta_min >= beta_max || points < 2)
        throw std::invalid_argument("default_betas: need beta_min < beta_max < 0, points >= 2");
    const double lo = std::log(-beta_min);
    const double hi = std::log(-beta_max);
    std::vector<double> betas(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        betas[i] = -std::exp(lo + (hi - lo) * t);
    }
    return betas;
}

TrialResult run_trial(const SystemConfig& cfg, const UserScenario& scenario, double beta,
                      std::size_t trial_index, Exec exec, TrialArtifacts* artifacts) {
    validate_or_throw(cfg, scenario);
    const Workspace ws = build_workspace(cfg, scenario, trial_index, exec);
    return eval_beta(ws, cfg, scenario, beta, trial_index, exec, artifacts);
}

SweepResult run_sweep(const SweepSpec& spec) {
    validate_or_throw(spec.cfg, spec.scenario);
    if (spec.betas.empty()) throw std::invalid_argument("run_sweep: no beta points");
    if (spec.trials == 0) throw std::invalid_argument("run_sweep: no trials");
    for (double b : spec.betas)
        if (!(b < 0.0)) throw std::invalid_argument("run_sweep: beta must be negative");

    const std::size_t B = spec.betas.size();
    SweepResult out;
    out.raw.assign(B, std::vector<TrialResult>(spec.trials));

    // Preassigned slots: each trial writes only its own column, so the result
    // is independent of scheduling; aggregation below is serial and ordered.
    bool failed = false;
    std::string error;
#pragma omp parallel for schedule(dynamic) if (spec.exec == Exec::parallel)
    for (long long t = 0; t < static_cast<long long>(spec.trials); ++t) {
        try {
            const Workspace ws = build_workspace(spec.cfg, spec.scenario,
                                                 static_cast<std::size_t>(t), spec.exec);
            for (std::size_t b = 0; b < B; ++b)
                out.raw[b][static_cast<std::size_t>(t)] =
                    eval_beta(ws, spec.cfg, spec.scenario, spec.betas[b],
                              static_cast<std::size_t>(t), spec.exec, nullptr);
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed = true;
                error = e.what();
            }
        }
    }
    if (failed) throw std::runtime_error("run_sweep: trial failed: " + error);

    const std::size_t U = spec.scenario.users.size();
    out.points.resize(B);
    for (std::size_t b = 0; b < B; ++b) {
        SweepPoint& p = out.points[b];
        p.beta = spec.betas[b];
        p.M = spec.cfg.M;
        p.N = spec.cfg.N;
        p.trials = spec.trials;

        double ber_acc = 0.0, ft_acc = 0.0, dd_acc = 0.0;
        std::vector<std::vector<double>> er(U), ev(U);
        for (const TrialResult& r : out.raw[b]) {
            ber_acc += r.mean_ber;
            ft_acc += r.snr_ft_lin;
            dd_acc += r.snr_dd_lin;
            for (std::size_t u = 0; u < U; ++u) {
                er[u].push_back(r.err_range_m[u]);
                ev[u].push_back(r.err_velocity_ms[u]);
            }
        }
        const double nt = static_cast<double>(spec.trials);
        p.mean_ber = ber_acc / nt;
        p.rmse_range_m = rmse(er);
        p.rmse_velocity_ms = rmse(ev);
        p.mean_snr_ft_db = to_db(ft_acc / nt);
        p.mean_snr_dd_db = to_db(dd_acc / nt);
    }
    return out;
}

std::string sweep_csv(const SweepResult& result) {
    std::string s =
        "beta,M,N,mean_ber,rmse_range_m,rmse_velocity_ms,mean_snr_ft_db,mean_snr_dd_db,trials\n";
    char buf[512];
    for (const SweepPoint& p : result.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%zu\n",
                      p.beta, p.M, p.N, p.mean_ber, p.rmse_range_m, p.rmse_velocity_ms,
                      p.mean_snr_ft_db, p.mean_snr_dd_db, p.trials);
        s += buf;
    }
    return s;
}

void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
    f << sweep_csv(result);
}

} // namespace jcs
