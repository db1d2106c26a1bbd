#include "skyharvest/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace skyharvest {
namespace channel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

double deg(double radians) { return radians * (180.0 / kPi); }

void check_theta(double theta) {
    if (!(theta > 0.0 && theta <= kHalfPi)) {
        throw std::invalid_argument("theta must lie in (0, pi/2]");
    }
}

// f is expected to be strictly decreasing on (0, pi/2]; a coarse grid scan
// verifies that and doubles as a fallback when a profile breaks it.
constexpr int kMonotoneGridSize = 1024;
constexpr double kThetaLo = 1e-9;

} // namespace

LinkBudget make_link_budget(const RadioConfig& cfg) {
    cfg.validate();
    return {cfg.p_c - cfg.p_th, free_space_loss(cfg.f_c)};
}

double snr_at_clusterhead(const RadioConfig& cfg, double d) {
    if (d <= 0.0) throw std::invalid_argument("snr_at_clusterhead: d must be > 0");
    return cfg.snr_budget * std::pow(d, -cfg.alpha);
}

double max_sensor_range(const RadioConfig& cfg) {
    return std::pow(cfg.snr_budget / cfg.gamma_th, 1.0 / cfg.alpha);
}

double los_probability(const EnvironmentProfile& env, double theta) {
    check_theta(theta);
    return 1.0 / (1.0 + env.a * std::exp(-env.b * (deg(theta) - env.a)));
}

double free_space_loss(double f_c) {
    if (f_c <= 0.0) throw std::invalid_argument("free_space_loss: f_c must be > 0");
    return 20.0 * std::log10(4.0 * kPi * f_c / kLightSpeed);
}

double mean_path_loss(const EnvironmentProfile& env, const RadioConfig& cfg,
                      double d, double theta) {
    if (d <= 0.0) throw std::invalid_argument("mean_path_loss: d must be > 0");
    const double p_los = los_probability(env, theta);
    const double common = free_space_loss(cfg.f_c) + 20.0 * std::log10(d);
    const double l_los = common + env.nu_los;
    const double l_nlos = common + env.nu_nlos;
    return p_los * l_los + (1.0 - p_los) * l_nlos;
}

double received_power_uav(const RadioConfig& cfg, double loss_db) {
    return cfg.p_c - loss_db;
}

double excess_loss_f(const EnvironmentProfile& env, double theta) {
    check_theta(theta);
    const double e = env.a * std::exp(-env.b * (deg(theta) - env.a));
    const double nu_mix = (env.nu_los + env.nu_nlos * e) / (1.0 + e);
    return nu_mix - 20.0 * std::log10(std::sin(theta));
}

std::optional<double> coverage_radius(const EnvironmentProfile& env,
                                      const RadioConfig& cfg, double z) {
    if (z <= 0.0) throw std::invalid_argument("coverage_radius: z must be > 0");
    const LinkBudget lb = make_link_budget(cfg);
    const double target = lb.budget_db - 20.0 * std::log10(z) - lb.free_space_const_db;

    const double f_top = excess_loss_f(env, kHalfPi);
    if (target < f_top) return std::nullopt;
    if (target == f_top) return 0.0;

    // Monotonicity pre-check on a coarse grid; fall back to the grid argmin of
    // |f - target| if a profile is not strictly decreasing.
    bool monotone = true;
    double prev = excess_loss_f(env, kThetaLo);
    double best_theta = kThetaLo;
    double best_err = std::abs(prev - target);
    for (int i = 1; i <= kMonotoneGridSize; ++i) {
        const double t = kThetaLo + (kHalfPi - kThetaLo) * i / kMonotoneGridSize;
        const double v = excess_loss_f(env, t);
        if (v > prev) monotone = false;
        const double err = std::abs(v - target);
        if (err < best_err) {
            best_err = err;
            best_theta = t;
        }
        prev = v;
    }

    double theta_star = best_theta;
    if (monotone) {
        double lo = kThetaLo;
        double hi = kHalfPi;
        if (excess_loss_f(env, lo) < target) {
            // Budget exceeds the grazing-angle loss: radius is limited only by
            // the evaluable domain; keep lo as the solution.
            theta_star = lo;
        } else {
            // Bisect to floating-point resolution; this lands well inside the
            // 1e-6 dB inversion tolerance.
            for (int iter = 0; iter < 100; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (excess_loss_f(env, mid) > target) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            theta_star = 0.5 * (lo + hi);
        }
    }
    return z / std::tan(theta_star);
}

ServiceAltitude max_service_altitude(const EnvironmentProfile& env,
                                     const RadioConfig& cfg, double altitude_cap) {
    // Coverage exists iff budget - 20 log10(z) - L_FS >= f(pi/2), so bisect on
    // z against that feasibility predicate.
    const LinkBudget lb = make_link_budget(cfg);
    const double f_top = excess_loss_f(env, kHalfPi);
    auto feasible = [&](double z) {
        return lb.budget_db - 20.0 * std::log10(z) - lb.free_space_const_db >= f_top;
    };
    const double z_min = 1e-3;
    if (!feasible(z_min)) return {0.0, false};
    if (feasible(altitude_cap)) return {altitude_cap, true};
    double lo = z_min;
    double hi = altitude_cap;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, false};
}

} // namespace channel
} // namespace skyharvest
