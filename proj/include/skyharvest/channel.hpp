#pragma once

#include <optional>

#include "skyharvest/scenario.hpp"

namespace skyharvest {
namespace channel {

inline constexpr double kLightSpeed = 3.0e8; // m/s

/// Transmit power minus receiver sensitivity plus the fixed free-space term.
struct LinkBudget {
    double budget_db = 0.0;          // P_c - P_th
    double free_space_const_db = 0.0; // 20 log10(4 pi f_c / c)
};

LinkBudget make_link_budget(const RadioConfig& cfg);

/// Linear SNR of the SN->CH uplink at ground distance d.
double snr_at_clusterhead(const RadioConfig& cfg, double d);

/// Maximum SN->CH range d_th = (snr_budget / gamma_th)^(1/alpha).
double max_sensor_range(const RadioConfig& cfg);

/// LoS probability at elevation angle theta (radians, in (0, pi/2]).
/// The exponential is evaluated with theta in degrees; a and b are
/// degree-calibrated constants.
double los_probability(const EnvironmentProfile& env, double theta);

/// 20 log10(4 pi f_c / c), dB.
double free_space_loss(double f_c);

/// LoS/NLoS probability mixture of l_m = L_FS + 20 log10(d) + nu_m, dB.
double mean_path_loss(const EnvironmentProfile& env, const RadioConfig& cfg,
                      double d, double theta);

/// p_c - loss, dBm. The link is successful iff the result >= p_th.
double received_power_uav(const RadioConfig& cfg, double loss_db);

/// Excess-loss profile f(theta) = nu-mixture(theta) - 20 log10(sin theta).
/// Inverting it gives the elevation angle at which the link budget is spent.
double excess_loss_f(const EnvironmentProfile& env, double theta);

/// Maximum horizontal coverage radius of a CH for a UAV at altitude z.
/// Solves f(theta*) = budget - 20 log10(z) - L_FS by bisection to 1e-6 dB.
/// Empty when the budget cannot close the link even directly overhead.
std::optional<double> coverage_radius(const EnvironmentProfile& env,
                                      const RadioConfig& cfg, double z);

struct ServiceAltitude {
    double z_max = 0.0;
    bool capped = false; // true when the search saturated at altitude_cap
};

/// Largest altitude at which coverage_radius is still defined, found by
/// bisection on z. Returns 0 when no altitude closes the link.
ServiceAltitude max_service_altitude(const EnvironmentProfile& env,
                                     const RadioConfig& cfg,
                                     double altitude_cap = 1.0e7);

} // namespace channel
} // namespace skyharvest
