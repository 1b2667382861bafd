// rx_comm.cpp - LS + DFT/spline channel estimation, ZF equalization, BER.

#include "jcs/rx_comm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace jcs {

ComplexGrid estimate_channel(const ComplexGrid& y_block, const QamFrame& frame,
                             double P_c_ft) {
    const std::size_t m_size = y_block.rows;
    const std::size_t n_size = y_block.cols;
    if (frame.symbols.rows != m_size || frame.symbols.cols != n_size)
        throw std::invalid_argument("estimate_channel: frame/block shape mismatch");
    if (P_c_ft <= 0.0)
        throw std::invalid_argument("estimate_channel: P_c_ft must be positive");

    const std::vector<std::size_t> pcols = pilot_columns(n_size);
    const double amp = std::sqrt(P_c_ft);

    // LS at the comb-2 pilot rows of each pilot column, then DFT-interpolate
    // up the frequency axis. h_cols[j] has m_size entries for pilot column j.
    std::vector<std::vector<cplx>> h_cols(pcols.size());
    for (std::size_t j = 0; j < pcols.size(); ++j) {
        const std::size_t c = pcols[j];
        std::vector<cplx> ls;
        ls.reserve((m_size + 1) / 2);
        for (std::size_t m = 0; m < m_size; m += 2) {
            const cplx p = frame.symbols(m, c);
            if (std::abs(p) == 0.0)
                throw std::invalid_argument("estimate_channel: zero pilot symbol");
            ls.push_back(y_block(m, c) / (amp * p));
        }
        h_cols[j] = dft_interpolate_columns(ls, m_size);
    }

    // Spline each subcarrier across the pilot columns (time axis).
    std::vector<double> x_pilot(pcols.size());
    for (std::size_t j = 0; j < pcols.size(); ++j) x_pilot[j] = static_cast<double>(pcols[j]);

    ComplexGrid h_hat(m_size, n_size);
    std::vector<cplx> row(pcols.size());
    for (std::size_t m = 0; m < m_size; ++m) {
        for (std::size_t j = 0; j < pcols.size(); ++j) row[j] = h_cols[j][m];
        const std::vector<cplx> interp = spline_interpolate_rows(x_pilot, row, n_size);
        for (std::size_t n = 0; n < n_size; ++n) h_hat(m, n) = interp[n];
    }
    return h_hat;
}

std::pair<std::vector<std::uint8_t>, std::size_t> equalize_demap(const ComplexGrid& y_block,
                                                                 const ComplexGrid& h_hat,
                                                                 const QamFrame& frame,
                                                                 double P_c_ft,
                                                                 RandomStream& erasure_rng) {
    const std::size_t m_size = y_block.rows;
    const std::size_t n_size = y_block.cols;
    if (h_hat.rows != m_size || h_hat.cols != n_size)
        throw std::invalid_argument("equalize_demap: estimate/block shape mismatch");

    double h_max = 0.0;
    for (const cplx& h : h_hat.data) h_max = std::max(h_max, std::abs(h));
    const double erase_below = 1e-12 * h_max;

    const double amp = std::sqrt(P_c_ft);
    std::vector<std::uint8_t> bits;
    bits.reserve(4 * m_size * n_size);
    std::size_t erased = 0;
    std::uint8_t b4[4];

    // Row-major over data bins, the same order the payload was written.
    for (std::size_t m = 0; m < m_size; ++m) {
        for (std::size_t n = 0; n < n_size; ++n) {
            if (frame.pilot_mask[m * n_size + n]) continue;
            const cplx h = h_hat(m, n);
            if (std::abs(h) < erase_below) {
                for (int b = 0; b < 4; ++b)
                    bits.push_back(static_cast<std::uint8_t>(erasure_rng.uniform_int(2)));
                ++erased;
                continue;
            }
            qam16_demap(y_block(m, n) / (amp * h), b4);
            bits.insert(bits.end(), b4, b4 + 4);
        }
    }
    return {std::move(bits), erased};
}

double ber(const std::vector<std::uint8_t>& tx, const std::vector<std::uint8_t>& rx) {
    if (tx.size() != rx.size())
        throw std::invalid_argument("ber: bit vector length mismatch");
    if (tx.empty()) return 0.0;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx.size(); ++i)
        if ((tx[i] != 0) != (rx[i] != 0)) ++errors;
    return static_cast<double>(errors) / static_cast<double>(tx.size());
}

std::pair<double, double> comm_metrics(const ComplexGrid& h_ft_block, double p_c_ft,
                                       double p_s_ft, double p_n) {
    if (h_ft_block.size() == 0)
        throw std::invalid_argument("comm_metrics: empty channel block");
    double g = 0.0;
    for (const cplx& h : h_ft_block.data) g += std::norm(h);
    g /= static_cast<double>(h_ft_block.size());
    const double gamma = p_c_ft * g / (p_s_ft * g + p_n);
    return {g, gamma};
}

double to_db(double x) { return 10.0 * std::log10(x); }

} // namespace jcs
