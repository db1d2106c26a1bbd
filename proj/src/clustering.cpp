#include "skyharvest/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skyharvest/rng.hpp"

#include <nlohmann/json.hpp>

namespace skyharvest {

namespace {

double sq_dist(const Point3& p, const Point3& q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return dx * dx + dy * dy;
}

// Uniform seeding over the bounding box of the input, in the style of the
// classic "uniform" start: centroids are drawn anywhere in the data range,
// not just at data points.
std::vector<Point3> seed_centroids(const std::vector<Point3>& points, int k, Rng& rng) {
    double x_lo = points[0].x, x_hi = points[0].x;
    double y_lo = points[0].y, y_hi = points[0].y;
    for (const auto& p : points) {
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
        y_lo = std::min(y_lo, p.y);
        y_hi = std::max(y_hi, p.y);
    }
    std::vector<Point3> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        centroids.push_back({rng.uniform(x_lo, x_hi), rng.uniform(y_lo, y_hi), 0.0});
    }
    return centroids;
}

void assign_nearest(const std::vector<Point3>& points,
                    const std::vector<Point3>& centroids, std::vector<int>& out) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        int best = 0;
        double best_d = sq_dist(points[i], centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = sq_dist(points[i], centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        out[i] = best;
    }
}

} // namespace

Clustering lloyd_kmeans(const std::vector<Point3>& points, int k, std::uint64_t seed,
                        int max_iters, const KmeansObserver& observer) {
    if (k < 1 || static_cast<std::size_t>(k) > points.size()) {
        throw std::invalid_argument("lloyd_kmeans: need 1 <= k <= |points|");
    }
    Rng rng(seed);
    std::vector<Point3> centroids = seed_centroids(points, k, rng);
    std::vector<int> assignment(points.size(), 0);
    std::vector<int> prev(points.size(), -1);

    for (int iter = 0; iter < max_iters; ++iter) {
        assign_nearest(points, centroids, assignment);
        if (observer) observer(iter, centroids);
        if (assignment == prev) break;
        prev = assignment;

        std::vector<double> sx(static_cast<std::size_t>(k), 0.0);
        std::vector<double> sy(static_cast<std::size_t>(k), 0.0);
        std::vector<int> count(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto c = static_cast<std::size_t>(assignment[i]);
            sx[c] += points[i].x;
            sy[c] += points[i].y;
            ++count[c];
        }
        for (int c = 0; c < k; ++c) {
            const auto cc = static_cast<std::size_t>(c);
            if (count[cc] > 0) {
                centroids[cc] = {sx[cc] / count[cc], sy[cc] / count[cc], 0.0};
            } else {
                // Empty cluster: promote the point farthest from its centroid.
                std::size_t far_i = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < points.size(); ++i) {
                    const double d = sq_dist(points[i], centroids[static_cast<std::size_t>(assignment[i])]);
                    if (d > far_d) {
                        far_d = d;
                        far_i = i;
                    }
                }
                centroids[cc] = points[far_i];
            }
        }
    }
    assign_nearest(points, centroids, assignment);

    Clustering result;
    result.ch_positions = std::move(centroids);
    result.assignment = std::move(assignment);
    result.k_prime = k;
    result.d_max = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = distance(points[i], result.ch_positions[static_cast<std::size_t>(result.assignment[i])]);
        result.d_max = std::max(result.d_max, d);
    }
    return result;
}

PlanResult plan_clusterheads(const Scenario& scenario, double d_th) {
    if (d_th <= 0.0) throw std::invalid_argument("plan_clusterheads: d_th must be > 0");
    scenario.validate();
    const int k_cap = std::min(scenario.max_chs, static_cast<int>(scenario.sensors.size()));
    PlanResult res;
    for (int k = 1; k <= k_cap; ++k) {
        // Short Lloyd budget: field deployments re-cluster frequently, so the
        // planner keeps the cheap, early-stopped refinement whose K' spread
        // the K'-vs-range curves are calibrated against.
        auto clustering = lloyd_kmeans(scenario.sensors, k,
                                       derive_seed(scenario.seed, static_cast<std::uint64_t>(k)),
                                       kPlanIterations);
        if (clustering.d_max <= d_th) {
            res.ok = true;
            res.clustering = std::move(clustering);
            return res;
        }
        if (k == k_cap) {
            res.failure = {k, clustering.d_max};
        }
    }
    res.ok = false;
    return res;
}

std::vector<SweepRecord> clustering_sweep(const Scenario& scenario,
                                          const std::vector<double>& d_th_values,
                                          int runs_per_value) {
    if (runs_per_value < 1) throw std::invalid_argument("clustering_sweep: runs_per_value must be >= 1");
    std::vector<SweepRecord> records;
    records.reserve(d_th_values.size() * static_cast<std::size_t>(runs_per_value));
    for (std::size_t vi = 0; vi < d_th_values.size(); ++vi) {
        for (int run = 0; run < runs_per_value; ++run) {
            Scenario run_scenario = scenario;
            run_scenario.seed = derive_seed(scenario.seed, (vi << 20) + static_cast<std::uint64_t>(run) + 1);
            auto res = plan_clusterheads(run_scenario, d_th_values[vi]);
            records.push_back({d_th_values[vi], run, res.ok ? res.clustering.k_prime : -1, res.ok});
        }
    }
    return records;
}

nlohmann::json to_json(const Clustering& c) {
    nlohmann::json chs = nlohmann::json::array();
    for (const auto& p : c.ch_positions) chs.push_back(to_json(p));
    return nlohmann::json{
        {"ch_positions", std::move(chs)},
        {"assignment", c.assignment},
        {"k_prime", c.k_prime},
        {"d_max", c.d_max},
    };
}

Clustering clustering_from_json(const nlohmann::json& j) {
    Clustering c;
    for (const auto& p : j.at("ch_positions")) c.ch_positions.push_back(point3_from_json(p));
    c.assignment = j.at("assignment").get<std::vector<int>>();
    c.k_prime = j.at("k_prime").get<int>();
    c.d_max = j.at("d_max").get<double>();
    return c;
}

} // namespace skyharvest
