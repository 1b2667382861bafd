#include "jcs/config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace jcs {

std::vector<std::string> validate(const SystemConfig& cfg, const UserScenario& scenario) {
    std::vector<std::string> errs;
    auto fail = [&](const std::string& msg) { errs.push_back(msg); };

    if (cfg.M < 1) fail("M must be >= 1");
    if (cfg.N < 1) fail("N must be >= 1");
    if (!(cfg.delta_f > 0)) fail("delta_f must be positive");
    if (!(cfg.T > 0)) fail("T must be positive");
    if (!(cfg.P_tot_ft > 0)) fail("P_tot_ft must be positive");
    if (!(cfg.f_c > 0)) fail("f_c must be positive");
    if (cfg.delta_f > 0 && cfg.T > 0 && cfg.T < 1.0 / cfg.delta_f)
        fail("T must be >= 1/delta_f (symbol duration includes the CP)");
    if (cfg.noise_psd < 0) fail("noise_psd must be non-negative");

    std::size_t total_bins = 0;
    double tau_max = 0.0;
    for (std::size_t u = 0; u < scenario.users.size(); ++u) {
        const UserSpec& s = scenario.users[u];
        std::ostringstream tag;
        tag << "user " << u << ": ";
        if (!(s.range_m > 0)) fail(tag.str() + "range must be positive");
        if (s.num_paths < 1) fail(tag.str() + "num_paths must be >= 1");
        if (s.M_cu > cfg.M) fail(tag.str() + "M_cu exceeds M");
        if (s.N_cu > cfg.N) fail(tag.str() + "N_cu exceeds N");
        total_bins += s.M_cu * s.N_cu;
        // worst-case delay spread: two-way monostatic echo
        double tau = 2.0 * s.range_m / cfg.c;
        if (tau > tau_max) tau_max = tau;
    }
    if (total_bins > cfg.M * cfg.N)
        fail("allocation overflow: sum of user blocks exceeds the grid");
    if (cfg.delta_f > 0 && cfg.T > 0 && tau_max >= cfg.T - 1.0 / cfg.delta_f)
        fail("delay spread violates the CP budget: tau_max >= T - 1/delta_f");
    if (scenario.qam_order != 16)
        fail("only 16-QAM is implemented");
    return errs;
}

void validate_or_throw(const SystemConfig& cfg, const UserScenario& scenario) {
    auto errs = validate(cfg, scenario);
    if (errs.empty()) return;
    std::string joined;
    for (const auto& e : errs) {
        if (!joined.empty()) joined += "; ";
        joined += e;
    }
    throw std::invalid_argument("invalid configuration: " + joined);
}

Resolutions resolutions(const SystemConfig& cfg) {
    Resolutions r{};
    r.delta_tau = 1.0 / (static_cast<double>(cfg.M) * cfg.delta_f);
    r.delta_nu = 1.0 / (static_cast<double>(cfg.N) * cfg.T);
    r.delta_R = cfg.c * r.delta_tau / 2.0;
    r.delta_V = cfg.c * r.delta_nu / (2.0 * cfg.f_c);
    r.R_max_unambiguous = cfg.c / (2.0 * cfg.delta_f);
    r.V_max_unambiguous = cfg.c / (4.0 * cfg.f_c * cfg.T);
    return r;
}

std::pair<double, double> power_split(double beta, const SystemConfig& cfg) {
    if (!(beta < 0.0))
        throw std::invalid_argument("power_split: beta must be strictly negative");
    double rho = std::pow(10.0, beta);
    double p_c = rho * cfg.P_tot_ft;
    // complement computed as P_tot - P_c so the budget is conserved exactly
    double p_s = cfg.P_tot_ft - p_c;
    return {p_c, p_s};
}

double noise_power_per_bin(const SystemConfig& cfg) {
    return cfg.noise_psd * cfg.delta_f * std::pow(10.0, cfg.noise_figure_db / 10.0);
}

double wavelength(const SystemConfig& cfg) { return cfg.c / cfg.f_c; }

UserScenario default_scenario() {
    UserScenario s;
    s.qam_order = 16;
    double ranges[3] = {15.0, 25.0, 35.0};
    double velocities[3] = {14.0, 25.0, 30.0};
    for (int u = 0; u < 3; ++u) {
        UserSpec spec;
        spec.range_m = ranges[u];
        spec.velocity_ms = velocities[u];
        spec.motion_angle_rad = 0.0;  // radial motion
        spec.num_paths = 1;
        spec.M_cu = 240;
        spec.N_cu = 14;
        s.users.push_back(spec);
    }
    return s;
}

} // namespace jcs
