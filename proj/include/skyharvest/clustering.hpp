#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "skyharvest/scenario.hpp"

#include <nlohmann/json_fwd.hpp>

namespace skyharvest {

/// Cluster-head layout: positions, nearest-CH assignment, and the largest
/// SN-to-assigned-CH distance.
struct Clustering {
    std::vector<Point3> ch_positions; // ground positions, z = 0
    std::vector<int> assignment;      // sensor index -> CH index
    int k_prime = 0;
    double d_max = 0.0;
};

/// Thrown by plan_clusterheads when K clusters still leave d_max > d_th.
struct BudgetExceeded {
    int k = 0;
    double achieved_d_max = 0.0;
};

/// Called once per Lloyd iteration with the centroids of that iteration.
using KmeansObserver = std::function<void(int iter, const std::vector<Point3>& centroids)>;

/// Lloyd iterations seeded uniformly over the data bounding box. Converges
/// when assignments stop changing, capped at max_iters. Empty clusters are
/// repaired by promoting the point farthest from its centroid.
Clustering lloyd_kmeans(const std::vector<Point3>& points, int k,
                        std::uint64_t seed, int max_iters = 300,
                        const KmeansObserver& observer = {});

/// Lloyd budget used by plan_clusterheads; deliberately small so the planner's
/// K' dispersion matches the published K'-vs-range operating curves.
inline constexpr int kPlanIterations = 3;

struct PlanResult {
    bool ok = false;
    Clustering clustering; // valid when ok
    BudgetExceeded failure; // valid when !ok
};

/// Grow K' = 1, 2, ... re-running k-means from scratch until d_max <= d_th
/// or the CH budget K is exhausted.
PlanResult plan_clusterheads(const Scenario& scenario, double d_th);

struct SweepRecord {
    double d_th = 0.0;
    int run = 0;
    int k_prime = 0; // -1 when the budget was exceeded
    bool ok = false;
};

/// One k-means growth per (d_th, run); run r uses seed derived from the
/// scenario seed and (d_th index, r).
std::vector<SweepRecord> clustering_sweep(const Scenario& scenario,
                                          const std::vector<double>& d_th_values,
                                          int runs_per_value);

nlohmann::json to_json(const Clustering& c);
Clustering clustering_from_json(const nlohmann::json& j);

} // namespace skyharvest
