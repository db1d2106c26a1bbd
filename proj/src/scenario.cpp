#include "skyharvest/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "skyharvest/rng.hpp"

#include <nlohmann/json.hpp>

namespace skyharvest {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

} // namespace

void Scenario::validate() const {
    require(area_width > 0.0 && area_height > 0.0, "Scenario: zero-area rectangle");
    require(max_chs >= 1, "Scenario: max_chs must be >= 1");
    require(max_uavs >= 1, "Scenario: max_uavs must be >= 1");
    require(uav_altitude > 0.0, "Scenario: uav_altitude must be > 0");
    require(uav_speed > 0.0, "Scenario: uav_speed must be > 0");
    require(finite(dock), "Scenario: dock coordinates must be finite");
    require(dock.x >= 0.0 && dock.x <= area_width && dock.y >= 0.0 && dock.y <= area_height,
            "Scenario: dock outside area");
    for (const auto& s : sensors) {
        require(finite(s), "Scenario: sensor coordinates must be finite");
        require(s.x >= 0.0 && s.x <= area_width && s.y >= 0.0 && s.y <= area_height,
                "Scenario: sensor outside area");
    }
}

void EnvironmentProfile::validate() const {
    require(a > 0.0, "EnvironmentProfile: a must be > 0");
    require(b > 0.0, "EnvironmentProfile: b must be > 0");
    require(nu_los >= 0.0 && nu_los <= nu_nlos,
            "EnvironmentProfile: need 0 <= nu_los <= nu_nlos");
}

void RadioConfig::validate() const {
    require(gamma_th > 0.0, "RadioConfig: gamma_th must be > 0");
    require(snr_budget > 0.0, "RadioConfig: snr_budget must be > 0");
    require(alpha >= 2.0 && alpha <= 5.0, "RadioConfig: alpha must be in [2, 5]");
    require(p_c > p_th, "RadioConfig: p_c must exceed p_th");
    require(f_c > 0.0, "RadioConfig: f_c must be > 0");
}

Scenario generate_scenario(std::uint64_t seed, int n_sensors, double area_width,
                           double area_height, const Point3& dock, int max_chs,
                           int max_uavs, double uav_altitude, double uav_speed) {
    if (n_sensors < 1) throw std::invalid_argument("generate_scenario: n_sensors must be >= 1");
    if (area_width <= 0.0 || area_height <= 0.0) {
        throw std::invalid_argument("generate_scenario: zero-area rectangle");
    }
    Scenario s;
    s.area_width = area_width;
    s.area_height = area_height;
    s.dock = dock;
    s.max_chs = max_chs;
    s.max_uavs = max_uavs;
    s.uav_altitude = uav_altitude;
    s.uav_speed = uav_speed;
    s.seed = seed;
    Rng rng(derive_seed(seed, 0));
    s.sensors.reserve(static_cast<std::size_t>(n_sensors));
    for (int i = 0; i < n_sensors; ++i) {
        const double x = rng.uniform(0.0, area_width);
        const double y = rng.uniform(0.0, area_height);
        s.sensors.push_back({x, y, 0.0});
    }
    s.validate();
    return s;
}

nlohmann::json to_json(const Point3& p) {
    return nlohmann::json{p.x, p.y, p.z};
}

Point3 point3_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw std::invalid_argument("Point3: expected [x, y, z]");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json to_json(const Scenario& s) {
    nlohmann::json sensors = nlohmann::json::array();
    for (const auto& p : s.sensors) sensors.push_back(to_json(p));
    return nlohmann::json{
        {"area_width", s.area_width},
        {"area_height", s.area_height},
        {"sensors", std::move(sensors)},
        {"dock", to_json(s.dock)},
        {"max_chs", s.max_chs},
        {"max_uavs", s.max_uavs},
        {"uav_altitude", s.uav_altitude},
        {"uav_speed", s.uav_speed},
        {"seed", s.seed},
    };
}

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario s;
    s.area_width = j.at("area_width").get<double>();
    s.area_height = j.at("area_height").get<double>();
    for (const auto& p : j.at("sensors")) s.sensors.push_back(point3_from_json(p));
    s.dock = point3_from_json(j.at("dock"));
    s.max_chs = j.at("max_chs").get<int>();
    s.max_uavs = j.at("max_uavs").get<int>();
    s.uav_altitude = j.at("uav_altitude").get<double>();
    s.uav_speed = j.at("uav_speed").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.validate();
    return s;
}

nlohmann::json to_json(const EnvironmentProfile& e) {
    return nlohmann::json{
        {"a", e.a}, {"b", e.b}, {"nu_los", e.nu_los}, {"nu_nlos", e.nu_nlos}, {"name", e.name}};
}

EnvironmentProfile environment_from_json(const nlohmann::json& j) {
    EnvironmentProfile e;
    e.a = j.at("a").get<double>();
    e.b = j.at("b").get<double>();
    e.nu_los = j.at("nu_los").get<double>();
    e.nu_nlos = j.at("nu_nlos").get<double>();
    e.name = j.value("name", std::string{});
    e.validate();
    return e;
}

nlohmann::json to_json(const RadioConfig& r) {
    return nlohmann::json{
        {"gamma_th", r.gamma_th}, {"snr_budget", r.snr_budget}, {"alpha", r.alpha},
        {"p_c", r.p_c},           {"p_th", r.p_th},             {"f_c", r.f_c}};
}

RadioConfig radio_from_json(const nlohmann::json& j) {
    RadioConfig r;
    r.gamma_th = j.at("gamma_th").get<double>();
    r.snr_budget = j.at("snr_budget").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.p_c = j.at("p_c").get<double>();
    r.p_th = j.at("p_th").get<double>();
    r.f_c = j.at("f_c").get<double>();
    r.validate();
    return r;
}

const std::vector<EnvironmentProfile>& environment_presets() {
    static const std::vector<EnvironmentProfile> presets = {
        {4.88, 0.429, 0.1, 21.0, "suburban"},
        {9.6117, 0.739, 1.0, 20.0, "urban"},
        {12.08, 0.11, 1.6, 23.0, "dense-urban"},
        {27.23, 0.08, 2.3, 34.0, "high-rise"},
    };
    return presets;
}

EnvironmentProfile environment_preset(const std::string& name) {
    for (const auto& p : environment_presets()) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("unknown environment preset: " + name);
}

} // namespace skyharvest
