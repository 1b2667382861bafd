#include "jcs/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace jcs {

// Gray levels indexed by the bit pair (b_hi b_lo): 00 01 10 11 -> -3 -1 +3 +1,
// so adjacent amplitudes always differ in exactly one bit.
static const double kQamLevel[4] = {-3.0, -1.0, 3.0, 1.0};
static const double kQamScale = 1.0 / std::sqrt(10.0);

cplx qam16_map(const std::uint8_t* b) {
    double i = kQamLevel[(b[0] << 1) | b[1]];
    double q = kQamLevel[(b[2] << 1) | b[3]];
    return {i * kQamScale, q * kQamScale};
}

static inline void demap_axis(double v, std::uint8_t* b2) {
    // nearest of {-3,-1,+1,+3}/sqrt(10); thresholds at 0 and +-2/sqrt(10)
    int idx;
    if (v < 0.0)
        idx = (v < -2.0 * kQamScale) ? 0 : 1;  // -3 : -1
    else
        idx = (v > 2.0 * kQamScale) ? 2 : 3;   // +3 : +1
    b2[0] = static_cast<std::uint8_t>(idx >> 1);
    b2[1] = static_cast<std::uint8_t>(idx & 1);
}

void qam16_demap(cplx s, std::uint8_t* b) {
    demap_axis(s.real(), b);
    demap_axis(s.imag(), b + 2);
}

std::vector<cplx> qam16_modulate(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 4 != 0)
        throw std::invalid_argument("qam16_modulate: bit count not divisible by 4");
    std::vector<cplx> out(bits.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = qam16_map(&bits[4 * i]);
    return out;
}

std::vector<std::uint8_t> qam16_demodulate(const std::vector<cplx>& symbols) {
    std::vector<std::uint8_t> out(symbols.size() * 4);
    for (std::size_t i = 0; i < symbols.size(); ++i) qam16_demap(symbols[i], &out[4 * i]);
    return out;
}

std::vector<std::size_t> pilot_columns(std::size_t n_size) {
    if (n_size < 2) throw std::invalid_argument("pilot_columns: block too narrow");
    // anchor pattern {0, 5, 8, 13} on 14 symbols, scaled to other block widths
    static const double kFrac[4] = {0.0, 5.0 / 13.0, 8.0 / 13.0, 1.0};
    std::vector<std::size_t> cols;
    for (double f : kFrac) {
        auto c = static_cast<std::size_t>(std::lround(f * static_cast<double>(n_size - 1)));
        if (cols.empty() || cols.back() != c) cols.push_back(c);
    }
    return cols;
}

bool is_pilot_row(std::size_t m_rel) { return m_rel % 2 == 0; }

std::vector<UserAllocation> allocate_users(const UserScenario& scenario,
                                           const SystemConfig& cfg, RandomStream& rng) {
    const std::size_t kMaxAttempts = 10000;
    std::vector<UserAllocation> placed;
    placed.reserve(scenario.users.size());
    for (std::size_t u = 0; u < scenario.users.size(); ++u) {
        const UserSpec& s = scenario.users[u];
        if (s.M_cu > cfg.M || s.N_cu > cfg.N || s.M_cu == 0 || s.N_cu == 0)
            throw std::invalid_argument("allocate_users: block does not fit the grid");
        bool ok = false;
        for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
            UserAllocation a;
            a.user_id = u;
            a.m_size = s.M_cu;
            a.n_size = s.N_cu;
            a.m_offset = rng.uniform_int(cfg.M - s.M_cu + 1);
            a.n_offset = rng.uniform_int(cfg.N - s.N_cu + 1);
            bool overlap = false;
            for (const auto& b : placed) {
                bool sep_m = a.m_offset + a.m_size <= b.m_offset ||
                             b.m_offset + b.m_size <= a.m_offset;
                bool sep_n = a.n_offset + a.n_size <= b.n_offset ||
                             b.n_offset + b.n_size <= a.n_offset;
                if (!sep_m && !sep_n) {
                    overlap = true;
                    break;
                }
            }
            if (!overlap) {
                placed.push_back(a);
                ok = true;
                break;
            }
        }
        if (!ok)
            throw std::runtime_error("allocate_users: no disjoint placement found");
    }
    return placed;
}

QamFrame make_user_frame(std::size_t m_size, std::size_t n_size, RandomStream& data_rng,
                         RandomStream& pilot_rng) {
    QamFrame f;
    f.symbols = ComplexGrid(m_size, n_size);
    f.pilot_mask.assign(m_size * n_size, 0);
    for (std::size_t c : pilot_columns(n_size))
        for (std::size_t m = 0; m < m_size; ++m)
            if (is_pilot_row(m)) f.pilot_mask[m * n_size + c] = 1;

    // known unit-power QPSK pilots, drawn column-major over the pilot lattice
    for (std::size_t c : pilot_columns(n_size))
        for (std::size_t m = 0; m < m_size; m += 2) {
            auto q = pilot_rng.uniform_int(4);
            f.symbols(m, c) = std::polar(1.0, M_PI / 4.0 + M_PI / 2.0 * double(q));
        }

    // random payload bits on the data bins, row-major order
    std::size_t n_data = 0;
    for (std::size_t i = 0; i < f.pilot_mask.size(); ++i)
        if (!f.pilot_mask[i]) ++n_data;
    f.bits.resize(4 * n_data);
    for (auto& b : f.bits) b = static_cast<std::uint8_t>(data_rng.next_u64() & 1);
    std::size_t pos = 0;
    for (std::size_t m = 0; m < m_size; ++m)
        for (std::size_t n = 0; n < n_size; ++n)
            if (!f.pilot_mask[m * n_size + n]) {
                f.symbols(m, n) = qam16_map(&f.bits[4 * pos]);
                ++pos;
            }
    return f;
}

ComplexGrid build_comm_grid(const std::vector<UserAllocation>& allocations,
                            const std::vector<QamFrame>& frames, double P_c_ft,
                            std::size_t M, std::size_t N) {
    if (allocations.size() != frames.size())
        throw std::invalid_argument("build_comm_grid: allocation/frame count mismatch");
    ComplexGrid g(M, N);
    double amp = std::sqrt(P_c_ft);
    for (std::size_t u = 0; u < allocations.size(); ++u) {
        const UserAllocation& a = allocations[u];
        const QamFrame& f = frames[u];
        if (f.symbols.rows != a.m_size || f.symbols.cols != a.n_size)
            throw std::invalid_argument("build_comm_grid: frame size mismatch");
        for (std::size_t m = 0; m < a.m_size; ++m)
            for (std::size_t n = 0; n < a.n_size; ++n)
                g(a.m_offset + m, a.n_offset + n) = amp * f.symbols(m, n);
    }
    return g;
}

std::pair<SensingPulseSet, ComplexGrid> build_sensing_dd(const PulseSpec& spec,
                                                         const SystemConfig& cfg,
                                                         double P_s_ft) {
    if (spec.coords.empty())
        throw std::invalid_argument("build_sensing_dd: no pulses");
    if (spec.amplitudes.size() != spec.coords.size())
        throw std::invalid_argument("build_sensing_dd: coordinate/amplitude count mismatch");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& c : spec.coords) {
        if (c.first >= cfg.M || c.second >= cfg.N)
            throw std::invalid_argument("build_sensing_dd: pulse outside the grid");
        if (!seen.insert(c).second)
            throw std::invalid_argument("build_sensing_dd: duplicate pulse coordinates");
    }
    SensingPulseSet set;
    // equi-powered pulses summing to P_s_ft per FT bin after the ISFFT spread
    set.P_s_dd = P_s_ft * static_cast<double>(cfg.M) * static_cast<double>(cfg.N) /
                 static_cast<double>(spec.coords.size());
    ComplexGrid g(cfg.M, cfg.N);
    double amp = std::sqrt(set.P_s_dd);
    for (std::size_t i = 0; i < spec.coords.size(); ++i) {
        SensingPulse p;
        p.l = spec.coords[i].first;
        p.k = spec.coords[i].second;
        p.amplitude = spec.amplitudes[i];
        set.pulses.push_back(p);
        g(p.l, p.k) = amp * p.amplitude;
    }
    return {set, g};
}

ComplexGrid superimpose(const ComplexGrid& x_c_ft, const ComplexGrid& x_s_dd, Exec exec) {
    if (x_c_ft.rows != x_s_dd.rows || x_c_ft.cols != x_s_dd.cols)
        throw std::invalid_argument("superimpose: dimension mismatch");
    ComplexGrid out = isfft(x_s_dd, exec);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += x_c_ft.data[i];
    return out;
}

} // namespace jcs
