#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skyharvest/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

namespace skyharvest {

/// Sensor field plus deployment budgets. Immutable value data.
struct Scenario {
    double area_width = 0.0;   // meters
    double area_height = 0.0;  // meters
    std::vector<Point3> sensors; // ground positions, z = 0
    Point3 dock;               // ground position, z = 0
    int max_chs = 1;           // K
    int max_uavs = 1;          // U
    double uav_altitude = 0.0; // meters, > 0
    double uav_speed = 0.0;    // m/s, > 0
    std::uint64_t seed = 0;

    void validate() const; // throws std::invalid_argument on violation
};

/// Air-to-ground channel environment constants (a, b, nu_LoS, nu_NLoS).
struct EnvironmentProfile {
    double a = 0.0;       // dimensionless
    double b = 0.0;       // dimensionless, per degree
    double nu_los = 0.0;  // dB
    double nu_nlos = 0.0; // dB
    std::string name;

    void validate() const;
};

struct RadioConfig {
    double gamma_th = 0.0;   // linear SNR threshold
    double snr_budget = 0.0; // linear P_s / sigma^2
    double alpha = 2.0;      // path-loss exponent, [2, 5]
    double p_c = 0.0;        // CH transmit power, dBm
    double p_th = 0.0;       // UAV receiver sensitivity, dBm
    double f_c = 0.0;        // carrier frequency, Hz

    void validate() const;
};

/// Draw sensors i.i.d. uniform over the rectangle. Same arguments give a
/// bit-identical scenario.
Scenario generate_scenario(std::uint64_t seed, int n_sensors, double area_width,
                           double area_height, const Point3& dock, int max_chs,
                           int max_uavs, double uav_altitude, double uav_speed);

nlohmann::json to_json(const Point3& p);
Point3 point3_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EnvironmentProfile& e);
EnvironmentProfile environment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RadioConfig& r);
RadioConfig radio_from_json(const nlohmann::json& j);

/// Shipped environment presets. Only the urban (a, b) pair comes from the
/// experiments we reproduce; the others are common defaults from the
/// channel-model literature.
const std::vector<EnvironmentProfile>& environment_presets();
EnvironmentProfile environment_preset(const std::string& name);

} // namespace skyharvest
