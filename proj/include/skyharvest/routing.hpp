#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skyharvest/scenario.hpp"

#include <nlohmann/json_fwd.hpp>

namespace skyharvest {

/// Per-UAV tours over CH indices plus the realized waypoints at flight
/// altitude. Waypoint sequences include the dock at both ends.
struct RoutePlan {
    std::vector<std::vector<int>> routes;            // CH indices per UAV
    std::vector<std::vector<Point3>> waypoints;      // dock ... dock, per UAV
    std::vector<double> lengths;                     // meters per UAV
    double total_length = 0.0;
    double std_dev = 0.0;                            // population std of lengths
    double mission_time = 0.0;                       // seconds (0 until speed applied)
};

struct GAConfig {
    int population_size = 500;
    int max_generations = 1000;
    double mutation_rate = 0.02;   // per gene
    double elite_fraction = 0.05;
    int stall_generations = 150;
    int tournament_size = 4;
    std::optional<double> delta_threshold; // meters; fairness cap on std_dev

    void validate() const;
};

double route_length(const std::vector<Point3>& waypoints);

/// Average per-UAV flight time, seconds: (1/U') sum lengths/V.
double mission_time(const RoutePlan& plan, double speed);

/// Population standard deviation of per-UAV route lengths.
double trajectory_std(const RoutePlan& plan);

/// Guard for the exact solver: enumeration beyond this is impractical.
inline constexpr int kBruteForceMaxChs = 10;
inline constexpr int kBruteForceMaxUavs = 3;

struct InstanceTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Globally minimal total length over all partitions of CHs into n_uavs
/// nonempty ordered routes. Held-Karp per subset; ties broken by the
/// lexicographically smallest route encoding.
RoutePlan brute_force_mtsp(const std::vector<Point3>& ch_points, const Point3& dock,
                           int n_uavs, double altitude);

/// Greedy construction. Single UAV: repetitive nearest-neighbor — one greedy
/// tour per candidate first CH, keeping the shortest. Multiple UAVs: each UAV
/// repeatedly extends its route by the nearest unvisited CH (round-robin
/// across UAVs). Ties go to the lowest CH index.
RoutePlan nearest_neighbor_route(const std::vector<Point3>& ch_points,
                                 const Point3& dock, int n_uavs, double altitude);

/// Called after each generation with (generation, best fitness so far).
using GaObserver = std::function<void(int, double)>;

/// Permutation + breakpoints GA with ordered crossover, swap mutation,
/// tournament selection and elitism. Deterministic given seed.
RoutePlan ga_mtsp(const std::vector<Point3>& ch_points, const Point3& dock,
                  int n_uavs, double altitude, const GAConfig& cfg,
                  std::uint64_t seed, const GaObserver& observer = {});

/// As ga_mtsp, but individuals whose per-UAV length spread exceeds
/// delta_threshold get infinite fitness. Empty when no fair individual was
/// found within the generation budget.
std::optional<RoutePlan> ga_mtsp_fair(const std::vector<Point3>& ch_points,
                                      const Point3& dock, int n_uavs,
                                      double altitude, const GAConfig& cfg,
                                      double delta_threshold, std::uint64_t seed);

/// Move each hover waypoint to the first intersection of the ray from the
/// current position toward the CH overhead point with the CH's coverage
/// circle. Positions already inside a circle are kept. Radius 0 is a no-op.
RoutePlan tspn_adjust(const RoutePlan& plan, const std::vector<Point3>& ch_points,
                      double radius);

/// Traveled-distance gain 1 - d_tspn / d_tsp.
double tspn_gain(double d_tsp, double d_tspn);

struct ValidationReport {
    bool partition_ok = false;   // each CH in exactly one route
    bool endpoints_ok = false;   // every waypoint sequence starts/ends at dock
    bool power_ok = false;       // received power >= p_th at every hover point
    bool lengths_ok = false;     // lengths/std/total consistent with waypoints
    std::vector<std::string> failures;

    bool all_ok() const { return partition_ok && endpoints_ok && power_ok && lengths_ok; }
};

ValidationReport validate_plan(const RoutePlan& plan,
                               const std::vector<Point3>& ch_points,
                               const EnvironmentProfile& env,
                               const RadioConfig& cfg);

nlohmann::json to_json(const RoutePlan& plan);
RoutePlan route_plan_from_json(const nlohmann::json& j);

} // namespace skyharvest
