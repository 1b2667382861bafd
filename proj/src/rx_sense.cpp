// rx_sense.cpp - DD peak detection and parameter estimation.

#include "jcs/rx_sense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jcs {

ComplexGrid to_dd(const ComplexGrid& y_ft, Exec exec) { return sfft(y_ft, exec); }

std::vector<std::pair<std::size_t, std::size_t>> detect_peaks(const ComplexGrid& y_dd,
                                                              std::size_t num_targets,
                                                              std::size_t w_l,
                                                              std::size_t w_k) {
    const std::size_t M = y_dd.rows;
    const std::size_t N = y_dd.cols;
    if (M == 0 || N == 0) throw std::invalid_argument("detect_peaks: empty grid");
    if (2 * w_l + 1 > M || 2 * w_k + 1 > N)
        throw std::invalid_argument("detect_peaks: exclusion window exceeds grid");

    std::vector<std::uint8_t> masked(M * N, 0);
    std::size_t unmasked = M * N;
    std::vector<std::pair<std::size_t, std::size_t>> peaks;
    peaks.reserve(num_targets);

    for (std::size_t t = 0; t < num_targets; ++t) {
        if (unmasked == 0)
            throw std::invalid_argument("detect_peaks: exclusion masked every bin");
        double best = -1.0;
        std::size_t best_l = 0, best_k = 0;
        // Row-major scan with strict > keeps ties at the smallest (l, k).
        for (std::size_t l = 0; l < M; ++l) {
            for (std::size_t k = 0; k < N; ++k) {
                if (masked[l * N + k]) continue;
                const double p = std::norm(y_dd(l, k));
                if (p > best) {
                    best = p;
                    best_l = l;
                    best_k = k;
                }
            }
        }
        peaks.emplace_back(best_l, best_k);
        for (std::size_t dl = 0; dl <= 2 * w_l; ++dl) {
            const std::size_t l = (best_l + M - w_l + dl) % M;
            for (std::size_t dk = 0; dk <= 2 * w_k; ++dk) {
                const std::size_t k = (best_k + N - w_k + dk) % N;
                if (!masked[l * N + k]) {
                    masked[l * N + k] = 1;
                    --unmasked;
                }
            }
        }
    }
    return peaks;
}

std::vector<SensingEstimate> estimate_params(
    const std::vector<std::pair<std::size_t, std::size_t>>& peaks, std::size_t l0,
    std::size_t k0, const SystemConfig& cfg) {
    const std::size_t M = cfg.M;
    const std::size_t N = cfg.N;
    const Resolutions res = resolutions(cfg);

    std::vector<SensingEstimate> out;
    out.reserve(peaks.size());
    for (const auto& [l, k] : peaks) {
        if (l >= M || k >= N)
            throw std::invalid_argument("estimate_params: peak outside grid");
        SensingEstimate e;
        e.l = l;
        e.k = k;
        const std::size_t dl = (l + M - (l0 % M)) % M;
        // Doppler wraps to the signed half-open interval [-N/2, N/2) bins.
        long long dk = static_cast<long long>((k + N - (k0 % N)) % N);
        if (dk >= static_cast<long long>(N / 2)) dk -= static_cast<long long>(N);
        e.tau_s = static_cast<double>(dl) * res.delta_tau;
        e.nu_hz = static_cast<double>(dk) * res.delta_nu;
        e.range_m = cfg.c * e.tau_s / 2.0;
        e.velocity_ms = cfg.c * e.nu_hz / (2.0 * cfg.f_c);
        out.push_back(e);
    }
    return out;
}

std::vector<std::size_t> associate_nearest_range(const std::vector<SensingEstimate>& estimates,
                                                 const std::vector<double>& true_ranges) {
    const std::size_t U = true_ranges.size();
    if (estimates.size() != U)
        throw std::invalid_argument("associate_nearest_range: size mismatch");

    std::vector<std::size_t> assignment(U, 0);
    std::vector<std::uint8_t> est_used(U, 0), tgt_used(U, 0);
    for (std::size_t round = 0; round < U; ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bu = 0, be = 0;
        for (std::size_t u = 0; u < U; ++u) {
            if (tgt_used[u]) continue;
            for (std::size_t e = 0; e < U; ++e) {
                if (est_used[e]) continue;
                const double d = std::abs(estimates[e].range_m - true_ranges[u]);
                if (d < best) {
                    best = d;
                    bu = u;
                    be = e;
                }
            }
        }
        assignment[bu] = be;
        tgt_used[bu] = 1;
        est_used[be] = 1;
    }
    return assignment;
}

double rmse(const std::vector<std::vector<double>>& per_target_errors) {
    if (per_target_errors.empty())
        throw std::invalid_argument("rmse: no targets");
    double acc = 0.0;
    for (const auto& errs : per_target_errors) {
        if (errs.empty()) throw std::invalid_argument("rmse: target with no samples");
        double mse = 0.0;
        for (double e : errs) mse += e * e;
        acc += mse / static_cast<double>(errs.size());
    }
    return std::sqrt(acc) / static_cast<double>(per_target_errors.size());
}

double mean_power(const ComplexGrid& g) {
    if (g.size() == 0) throw std::invalid_argument("mean_power: empty grid");
    return g.energy() / static_cast<double>(g.size());
}

double sensing_snr(double gain_dd, double p_s_dd, double p_c_dd_total, double p_n) {
    return p_s_dd * gain_dd / (p_c_dd_total * gain_dd + p_n);
}

} // namespace jcs
