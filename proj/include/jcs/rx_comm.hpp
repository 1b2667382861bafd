// rx_comm.hpp - per-user communication receiver: LS pilot channel estimation,
// DFT interpolation along frequency, cubic-spline interpolation along time,
// one-tap zero-forcing equalization, hard 16-QAM demapping, BER and FT SNR.

#pragma once

#include "jcs/config.hpp"
#include "jcs/numerics.hpp"
#include "jcs/waveform.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace jcs {

struct CommRxResult {
    double ber = 0.0;
    std::vector<std::uint8_t> bits_decided;
    double snr_ft_db = 0.0;
    double gain_ft = 0.0;
    std::size_t erased_bins = 0;
};

/**
 * @brief LS channel estimate on the pilot lattice, interpolated to the full
 *        block: per pilot column, divide by the known pilots (comb-2 rows) and
 *        DFT-interpolate to all subcarriers; then spline each subcarrier row
 *        across the pilot columns.
 * @throws std::invalid_argument on a zero pilot value
 */
ComplexGrid estimate_channel(const ComplexGrid& y_block, const QamFrame& frame,
                             double P_c_ft);

/**
 * @brief One-tap equalization a_hat = Y / (H_hat sqrt(P_c)) on data bins and
 *        minimum-distance Gray demapping. Data bins where |H_hat| falls below
 *        1e-12 * max|H_hat| are erased: their bits come from the erasure
 *        stream so they count as random guesses in the BER.
 */
std::pair<std::vector<std::uint8_t>, std::size_t> equalize_demap(const ComplexGrid& y_block,
                                                                 const ComplexGrid& h_hat,
                                                                 const QamFrame& frame,
                                                                 double P_c_ft,
                                                                 RandomStream& erasure_rng);

/// Bit error rate: Hamming distance / length.
/// @throws std::invalid_argument on length mismatch
double ber(const std::vector<std::uint8_t>& tx, const std::vector<std::uint8_t>& rx);

/**
 * @brief Per-user FT metrics: G = mean |H|^2 over the block and the per-bin
 *        SINR gamma = P_c G / (P_s G + P_n) (the superimposed sensing signal
 *        is treated as noise, no cancellation).
 * @return (gain_ft, snr linear)
 */
std::pair<double, double> comm_metrics(const ComplexGrid& h_ft_block, double p_c_ft,
                                       double p_s_ft, double p_n);

/// 10 log10(x).
double to_db(double x);

} // namespace jcs
