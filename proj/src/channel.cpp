#include "jcs/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace jcs {

std::pair<double, double> two_way_params(double range_m, double velocity_ms,
                                         double motion_angle_rad, const SystemConfig& cfg) {
    if (!(range_m > 0)) throw std::invalid_argument("two_way_params: range must be positive");
    double tau = 2.0 * range_m / cfg.c;
    double nu = 2.0 * cfg.f_c / cfg.c * velocity_ms * std::cos(motion_angle_rad);
    return {tau, nu};
}

double path_gain_comm(double range_m, const SystemConfig& cfg) {
    if (!(range_m > 0)) throw std::invalid_argument("path_gain_comm: range must be positive");
    double lam = wavelength(cfg);
    double g = lam / (4.0 * M_PI * range_m);
    return g * g;
}

double path_gain_sens(double range_m, const SystemConfig& cfg, double sigma_rcs) {
    if (!(range_m > 0)) throw std::invalid_argument("path_gain_sens: range must be positive");
    double lam = wavelength(cfg);
    double four_pi = 4.0 * M_PI;
    return lam * lam * sigma_rcs / (four_pi * four_pi * four_pi * std::pow(range_m, 4));
}

std::vector<PathParams> comm_paths_for_user(const UserSpec& user, const SystemConfig& cfg,
                                            RandomStream& rng) {
    std::vector<PathParams> paths;
    double omega_total = path_gain_comm(user.range_m, cfg);
    double omega = omega_total / static_cast<double>(user.num_paths);
    // LoS: one-way downlink delay and Doppler
    PathParams los;
    los.omega = omega;
    los.tau = user.range_m / cfg.c;
    los.nu = cfg.f_c / cfg.c * user.velocity_ms * std::cos(user.motion_angle_rad);
    los.alpha = rng.cnormal(omega);
    paths.push_back(los);
    for (std::size_t q = 1; q < user.num_paths; ++q) {
        PathParams p;
        p.omega = omega;
        p.tau = los.tau + rng.uniform() * 400e-9;  // excess delay up to 400 ns
        double psi = rng.uniform() * 2.0 * M_PI;
        p.nu = cfg.f_c / cfg.c * user.velocity_ms * std::cos(psi);
        p.alpha = rng.cnormal(omega);
        paths.push_back(p);
    }
    return paths;
}

// Rank-1 accumulation: each path contributes u[m] * v[n] with
// u[m] = exp(-j2pi m delta_f tau), v[n] = alpha exp(+j2pi nu n T).
static void add_path(ComplexGrid& h, const PathParams& p, std::size_t m0, std::size_t n0,
                     const SystemConfig& cfg, Exec exec) {
    const std::size_t rows = h.rows, cols = h.cols;
    std::vector<cplx> u(rows), v(cols);
    for (std::size_t m = 0; m < rows; ++m)
        u[m] = std::polar(1.0, -2.0 * M_PI * double(m0 + m) * cfg.delta_f * p.tau);
    for (std::size_t n = 0; n < cols; ++n)
        v[n] = p.alpha * std::polar(1.0, 2.0 * M_PI * p.nu * double(n0 + n) * cfg.T);
    const std::int64_t r64 = static_cast<std::int64_t>(rows);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
    for (std::int64_t m = 0; m < r64; ++m) {
        cplx um = u[static_cast<std::size_t>(m)];
        cplx* row = h.data.data() + static_cast<std::size_t>(m) * cols;
        for (std::size_t n = 0; n < cols; ++n) row[n] += um * v[n];
    }
}

ComplexGrid comm_channel_ft(const std::vector<PathParams>& paths, const UserAllocation& block,
                            const SystemConfig& cfg, Exec exec) {
    if (paths.empty()) throw std::invalid_argument("comm_channel_ft: no paths");
    ComplexGrid h(block.m_size, block.n_size);
    for (const auto& p : paths) add_path(h, p, block.m_offset, block.n_offset, cfg, exec);
    return h;
}

ComplexGrid comm_channel_ft_fullgrid(const std::vector<PathParams>& paths,
                                     const SystemConfig& cfg, Exec exec) {
    UserAllocation full;
    full.m_offset = 0;
    full.n_offset = 0;
    full.m_size = cfg.M;
    full.n_size = cfg.N;
    return comm_channel_ft(paths, full, cfg, exec);
}

// Dirichlet kernel W_K(y) = sum_{i=0}^{K-1} exp(j2pi i y / K)
//                        = exp(+j pi r (K-1)/K) sin(pi r)/sin(pi r/K),
// with r = y reduced into [-K/2, K/2); the reduction leaves the product
// invariant because phase and ratio flip sign together.
static cplx dirichlet(double y, std::size_t K) {
    double k = static_cast<double>(K);
    double r = std::remainder(y, k);  // [-K/2, K/2]
    cplx phase = std::polar(1.0, M_PI * r * (k - 1.0) / k);
    if (std::abs(r) < 1e-9) return k * phase;  // removable singularity -> K
    return phase * (std::sin(M_PI * r) / std::sin(M_PI * r / k));
}

ComplexGrid comm_channel_dd(const std::vector<PathParams>& paths, const SystemConfig& cfg,
                            Exec exec) {
    if (paths.empty()) throw std::invalid_argument("comm_channel_dd: no paths");
    const std::size_t M = cfg.M, N = cfg.N;
    const double T_s = 1.0 / (static_cast<double>(M) * cfg.delta_f);
    ComplexGrid h(M, N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M) * static_cast<double>(N));
    for (const auto& p : paths) {
        std::vector<cplx> wl(M), wk(N);
        for (std::size_t l = 0; l < M; ++l)
            wl[l] = dirichlet(static_cast<double>(l) - p.tau / T_s, M);
        for (std::size_t k = 0; k < N; ++k)
            wk[k] = dirichlet(p.nu * static_cast<double>(N) * cfg.T - static_cast<double>(k), N);
        const std::int64_t m64 = static_cast<std::int64_t>(M);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
        for (std::int64_t l = 0; l < m64; ++l) {
            cplx a = scale * p.alpha * wl[static_cast<std::size_t>(l)];
            cplx* row = h.data.data() + static_cast<std::size_t>(l) * N;
            for (std::size_t k = 0; k < N; ++k) row[k] += a * wk[k];
        }
    }
    return h;
}

ComplexGrid sensing_channel_ft(const UserScenario& scenario, const SystemConfig& cfg,
                               RandomStream& rng, Exec exec) {
    ComplexGrid h(cfg.M, cfg.N);
    for (const auto& user : scenario.users) {
        auto [tau, nu] = two_way_params(user.range_m, user.velocity_ms,
                                        user.motion_angle_rad, cfg);
        PathParams p;
        p.omega = path_gain_sens(user.range_m, cfg);
        p.tau = tau;
        p.nu = nu;
        // nonfluctuating echo: deterministic magnitude, random phase
        p.alpha = std::sqrt(p.omega) * std::polar(1.0, 2.0 * M_PI * rng.uniform());
        add_path(h, p, 0, 0, cfg, exec);
    }
    return h;
}

ComplexGrid apply_channel(const ComplexGrid& x, const ComplexGrid& h, double P_n,
                          RandomStream& rng, Exec exec) {
    if (x.rows != h.rows || x.cols != h.cols)
        throw std::invalid_argument("apply_channel: dimension mismatch");
    ComplexGrid y(x.rows, x.cols);
    for (auto& v : y.data) v = rng.cnormal(P_n);  // noise first, fixed draw order
    const std::int64_t n = static_cast<std::int64_t>(y.data.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        auto idx = static_cast<std::size_t>(i);
        y.data[idx] += h.data[idx] * x.data[idx];
    }
    return y;
}

} // namespace jcs
