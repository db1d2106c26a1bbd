#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace skyharvest {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Point3&) const = default;
};

inline double distance(const Point3& p, const Point3& q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dz = p.z - q.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double horizontal_distance(const Point3& p, const Point3& q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

/// Elevation angle from a ground node to an aerial position, in radians.
/// Returns pi/2 when the aerial position is directly overhead.
inline double elevation_angle(const Point3& ch_ground, const Point3& uav) {
    if (uav.z <= ch_ground.z) {
        throw std::invalid_argument("elevation_angle: aerial position must be above the ground node");
    }
    const double dh = horizontal_distance(ch_ground, uav);
    if (dh == 0.0) {
        return std::numbers::pi / 2.0;
    }
    return std::atan2(uav.z - ch_ground.z, dh);
}

} // namespace skyharvest
