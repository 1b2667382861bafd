// rx_sense.hpp - sensing receiver: SFFT to the DD domain, iterative peak
// detection with a circular exclusion window, delay/Doppler read-off with the
// pulse origin removed, range/velocity conversion, RMSE and DD SNR metrics.

#pragma once

#include "jcs/config.hpp"
#include "jcs/numerics.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace jcs {

/// One detected target.
struct SensingEstimate {
    std::size_t l = 0;           ///< detected delay bin
    std::size_t k = 0;           ///< detected Doppler bin
    double tau_s = 0.0;          ///< two-way delay estimate, s
    double nu_hz = 0.0;          ///< Doppler estimate, Hz
    double range_m = 0.0;        ///< range estimate, m
    double velocity_ms = 0.0;    ///< radial velocity estimate, m/s
    double peak_power = 0.0;     ///< |y_dd|^2 at the peak
};

/// Scenario-level sensing figures for one trial.
struct SensingMetrics {
    double gain_dd = 0.0;        ///< mean |H_dd|^2 over the grid
    double snr_dd = 0.0;         ///< linear DD SINR
    double snr_dd_db = 0.0;
};

/// FT -> DD: the full received grid through the SFFT. The superimposed data
/// symbols come along and spread into a noise-like DD floor; nothing is removed.
ComplexGrid to_dd(const ComplexGrid& y_ft, Exec exec = Exec::parallel);

/**
 * @brief Iterative peak picking: repeatedly take the strongest unmasked bin,
 *        then mask the circular (2*w_l+1) x (2*w_k+1) window around it.
 *        Magnitude ties resolve to the smallest (l, k) in row-major order.
 * @throws std::invalid_argument if masking leaves fewer unmasked bins than
 *         targets still to find
 */
std::vector<std::pair<std::size_t, std::size_t>> detect_peaks(const ComplexGrid& y_dd,
                                                              std::size_t num_targets,
                                                              std::size_t w_l = 2,
                                                              std::size_t w_k = 2);

/**
 * @brief Convert peak bins to physical estimates relative to the pulse origin
 *        (l0, k0): delay offsets wrap mod M (non-negative), Doppler offsets
 *        wrap to [-N/2, N/2) bins; then tau = offset * delta_tau,
 *        nu = offset * delta_nu, R = c tau / 2, V = c nu / (2 f_c).
 */
std::vector<SensingEstimate> estimate_params(
    const std::vector<std::pair<std::size_t, std::size_t>>& peaks, std::size_t l0,
    std::size_t k0, const SystemConfig& cfg);

/**
 * @brief Greedy association of estimates to true ranges: closest |dR| pair
 *        first, both sides removed, repeat. Returns est index per true target.
 * @throws std::invalid_argument if sizes differ
 */
std::vector<std::size_t> associate_nearest_range(const std::vector<SensingEstimate>& estimates,
                                                 const std::vector<double>& true_ranges);

/**
 * @brief Scenario RMSE from per-target error samples:
 *        (1/U) * sqrt(sum_u mean(e_u^2)).
 * @throws std::invalid_argument on empty input
 */
double rmse(const std::vector<std::vector<double>>& per_target_errors);

/// Mean per-bin power of a grid (used as the DD channel gain G).
double mean_power(const ComplexGrid& g);

/**
 * @brief DD-domain SINR: gamma = P_s_dd G / (P_c_dd_total G + P_n), where
 *        P_c_dd_total is the summed per-bin DD image power of all comm blocks.
 */
double sensing_snr(double gain_dd, double p_s_dd, double p_c_dd_total, double p_n);

} // namespace jcs
