#include "skyharvest/routing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skyharvest/channel.hpp"
#include "skyharvest/rng.hpp"

#include <nlohmann/json.hpp>

namespace skyharvest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point3 at_altitude(const Point3& p, double z) { return {p.x, p.y, z}; }

std::vector<Point3> route_waypoints(const std::vector<int>& route,
                                    const std::vector<Point3>& ch_points,
                                    const Point3& dock, double altitude) {
    std::vector<Point3> wps;
    wps.reserve(route.size() + 2);
    wps.push_back(at_altitude(dock, altitude));
    for (int ch : route) wps.push_back(at_altitude(ch_points[static_cast<std::size_t>(ch)], altitude));
    wps.push_back(at_altitude(dock, altitude));
    return wps;
}

void finalize_lengths(RoutePlan& plan) {
    plan.lengths.clear();
    plan.total_length = 0.0;
    for (const auto& wps : plan.waypoints) {
        const double len = route_length(wps);
        plan.lengths.push_back(len);
        plan.total_length += len;
    }
    plan.std_dev = trajectory_std(plan);
}

RoutePlan make_plan(std::vector<std::vector<int>> routes,
                    const std::vector<Point3>& ch_points, const Point3& dock,
                    double altitude) {
    RoutePlan plan;
    plan.routes = std::move(routes);
    for (const auto& r : plan.routes) {
        plan.waypoints.push_back(route_waypoints(r, ch_points, dock, altitude));
    }
    finalize_lengths(plan);
    return plan;
}

// ---- exact solver -------------------------------------------------------

// Held-Karp suffix table: g[mask][last] is the cheapest cost of leaving CH
// `last`, visiting exactly the CHs in `mask`, and returning to the dock.
struct TourDp {
    int n = 0;
    std::vector<std::vector<double>> dist; // CH x CH
    std::vector<double> dock_dist;         // dock -> CH
    std::vector<std::vector<double>> g;    // [mask][last]

    TourDp(const std::vector<Point3>& ch_points, const Point3& dock, double altitude)
        : n(static_cast<int>(ch_points.size())) {
        std::vector<Point3> pts;
        for (const auto& p : ch_points) pts.push_back(at_altitude(p, altitude));
        const Point3 d0 = at_altitude(dock, altitude);
        dist.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
        dock_dist.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            dock_dist[static_cast<std::size_t>(i)] = distance(d0, pts[static_cast<std::size_t>(i)]);
            for (int j = 0; j < n; ++j) {
                dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
            }
        }
        const std::size_t n_masks = std::size_t{1} << n;
        g.assign(n_masks, std::vector<double>(static_cast<std::size_t>(n), kInf));
        for (int last = 0; last < n; ++last) {
            g[0][static_cast<std::size_t>(last)] = dock_dist[static_cast<std::size_t>(last)];
        }
        for (std::size_t mask = 1; mask < n_masks; ++mask) {
            for (int last = 0; last < n; ++last) {
                if (mask & (std::size_t{1} << last)) continue;
                double best = kInf;
                for (int c = 0; c < n; ++c) {
                    if (!(mask & (std::size_t{1} << c))) continue;
                    const double v = dist[static_cast<std::size_t>(last)][static_cast<std::size_t>(c)] +
                                     g[mask ^ (std::size_t{1} << c)][static_cast<std::size_t>(c)];
                    best = std::min(best, v);
                }
                g[mask][static_cast<std::size_t>(last)] = best;
            }
        }
    }

    double tour_cost(std::size_t subset) const {
        double best = kInf;
        for (int c = 0; c < n; ++c) {
            if (!(subset & (std::size_t{1} << c))) continue;
            best = std::min(best, dock_dist[static_cast<std::size_t>(c)] +
                                      g[subset ^ (std::size_t{1} << c)][static_cast<std::size_t>(c)]);
        }
        return best;
    }

    // Lexicographically smallest optimal tour over `subset`: extend greedily,
    // keeping only next CHs whose completion cost stays optimal.
    std::vector<int> best_tour(std::size_t subset) const {
        std::vector<int> route;
        std::size_t remaining = subset;
        double need = tour_cost(subset);
        int prev = -1; // dock
        constexpr double eps = 1e-7;
        while (remaining != 0) {
            for (int c = 0; c < n; ++c) {
                if (!(remaining & (std::size_t{1} << c))) continue;
                const double leg = prev < 0 ? dock_dist[static_cast<std::size_t>(c)]
                                            : dist[static_cast<std::size_t>(prev)][static_cast<std::size_t>(c)];
                const double completed =
                    leg + g[remaining ^ (std::size_t{1} << c)][static_cast<std::size_t>(c)];
                if (completed <= need + eps) {
                    route.push_back(c);
                    remaining ^= std::size_t{1} << c;
                    need -= leg;
                    prev = c;
                    break;
                }
            }
        }
        return route;
    }
};

} // namespace

void GAConfig::validate() const {
    if (population_size < 2) throw std::invalid_argument("GAConfig: population_size must be >= 2");
    if (max_generations < 1) throw std::invalid_argument("GAConfig: max_generations must be >= 1");
    if (mutation_rate < 0.0 || mutation_rate > 1.0) throw std::invalid_argument("GAConfig: mutation_rate in [0,1]");
    if (elite_fraction < 0.0 || elite_fraction > 1.0) throw std::invalid_argument("GAConfig: elite_fraction in [0,1]");
    if (stall_generations < 1) throw std::invalid_argument("GAConfig: stall_generations must be >= 1");
    if (tournament_size < 1) throw std::invalid_argument("GAConfig: tournament_size must be >= 1");
}

double route_length(const std::vector<Point3>& waypoints) {
    if (waypoints.size() < 2) throw std::invalid_argument("route_length: need at least 2 waypoints");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        total += distance(waypoints[i], waypoints[i + 1]);
    }
    return total;
}

double mission_time(const RoutePlan& plan, double speed) {
    if (speed <= 0.0) throw std::invalid_argument("mission_time: speed must be > 0");
    if (plan.lengths.empty()) return 0.0;
    const double sum = std::accumulate(plan.lengths.begin(), plan.lengths.end(), 0.0);
    return sum / speed / static_cast<double>(plan.lengths.size());
}

double trajectory_std(const RoutePlan& plan) {
    const auto n = plan.lengths.size();
    if (n <= 1) return 0.0;
    const double mean = std::accumulate(plan.lengths.begin(), plan.lengths.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double len : plan.lengths) ss += (len - mean) * (len - mean);
    return std::sqrt(ss / static_cast<double>(n));
}

RoutePlan brute_force_mtsp(const std::vector<Point3>& ch_points, const Point3& dock,
                           int n_uavs, double altitude) {
    const int n = static_cast<int>(ch_points.size());
    if (n > kBruteForceMaxChs || n_uavs > kBruteForceMaxUavs) {
        throw InstanceTooLarge("brute_force_mtsp: instance exceeds enumeration guard");
    }
    if (n_uavs < 1 || n < n_uavs) {
        throw std::invalid_argument("brute_force_mtsp: need 1 <= n_uavs <= |CHs|");
    }
    const TourDp dp(ch_points, dock, altitude);

    double best_cost = kInf;
    std::vector<std::vector<int>> best_routes;

    auto consider = [&](const std::vector<std::size_t>& masks) {
        double cost = 0.0;
        for (std::size_t m : masks) cost += dp.tour_cost(m);
        if (cost > best_cost) return;
        std::vector<std::vector<int>> routes;
        if (cost == best_cost) {
            for (std::size_t m : masks) routes.push_back(dp.best_tour(m));
            if (routes >= best_routes && !best_routes.empty()) return;
        } else {
            for (std::size_t m : masks) routes.push_back(dp.best_tour(m));
        }
        best_cost = cost;
        best_routes = std::move(routes);
    };

    // Enumerate CH -> UAV assignments; each nonempty.
    std::vector<std::size_t> masks(static_cast<std::size_t>(n_uavs), 0);
    const std::int64_t total = [&] {
        std::int64_t t = 1;
        for (int i = 0; i < n; ++i) t *= n_uavs;
        return t;
    }();
    for (std::int64_t code = 0; code < total; ++code) {
        std::int64_t c = code;
        std::fill(masks.begin(), masks.end(), 0);
        for (int i = 0; i < n; ++i) {
            masks[static_cast<std::size_t>(c % n_uavs)] |= std::size_t{1} << i;
            c /= n_uavs;
        }
        bool all_nonempty = true;
        for (std::size_t m : masks) all_nonempty &= (m != 0);
        if (!all_nonempty) continue;
        consider(masks);
    }
    return make_plan(std::move(best_routes), ch_points, dock, altitude);
}

namespace {

// Greedy tour growth from a forced first stop; ties resolve to the lowest
// CH index.
std::vector<int> greedy_tour_from(const std::vector<Point3>& pts, int first) {
    const int n = static_cast<int>(pts.size());
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    std::vector<int> order = {first};
    visited[static_cast<std::size_t>(first)] = true;
    Point3 current = pts[static_cast<std::size_t>(first)];
    for (int step = 1; step < n; ++step) {
        int best = -1;
        double best_d = kInf;
        for (int c = 0; c < n; ++c) {
            if (visited[static_cast<std::size_t>(c)]) continue;
            const double d = distance(current, pts[static_cast<std::size_t>(c)]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        visited[static_cast<std::size_t>(best)] = true;
        order.push_back(best);
        current = pts[static_cast<std::size_t>(best)];
    }
    return order;
}

double tour_length(const std::vector<Point3>& pts, const Point3& dock_alt,
                   const std::vector<int>& order) {
    double len = 0.0;
    Point3 prev = dock_alt;
    for (int c : order) {
        len += distance(prev, pts[static_cast<std::size_t>(c)]);
        prev = pts[static_cast<std::size_t>(c)];
    }
    return len + distance(prev, dock_alt);
}

} // namespace

RoutePlan nearest_neighbor_route(const std::vector<Point3>& ch_points,
                                 const Point3& dock, int n_uavs, double altitude) {
    const int n = static_cast<int>(ch_points.size());
    if (n_uavs < 1 || n < n_uavs) {
        throw std::invalid_argument("nearest_neighbor_route: need 1 <= n_uavs <= |CHs|");
    }
    std::vector<Point3> pts;
    for (const auto& p : ch_points) pts.push_back(at_altitude(p, altitude));
    const Point3 dock_alt = at_altitude(dock, altitude);

    if (n_uavs == 1) {
        // Repetitive variant: grow a greedy tour from every candidate first
        // CH and keep the shortest (earliest start wins ties).
        std::vector<int> best_order = greedy_tour_from(pts, 0);
        double best_len = tour_length(pts, dock_alt, best_order);
        for (int first = 1; first < n; ++first) {
            auto order = greedy_tour_from(pts, first);
            const double len = tour_length(pts, dock_alt, order);
            if (len < best_len - 1e-9) {
                best_len = len;
                best_order = std::move(order);
            }
        }
        return make_plan({std::move(best_order)}, ch_points, dock, altitude);
    }

    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    std::vector<std::vector<int>> routes(static_cast<std::size_t>(n_uavs));
    std::vector<Point3> current(static_cast<std::size_t>(n_uavs), dock_alt);

    int remaining = n;
    int uav = 0;
    while (remaining > 0) {
        const auto u = static_cast<std::size_t>(uav);
        int best = -1;
        double best_d = kInf;
        for (int c = 0; c < n; ++c) {
            if (visited[static_cast<std::size_t>(c)]) continue;
            const double d = distance(current[u], pts[static_cast<std::size_t>(c)]);
            if (d < best_d) { // strict: ties resolve to the lowest index
                best_d = d;
                best = c;
            }
        }
        visited[static_cast<std::size_t>(best)] = true;
        routes[u].push_back(best);
        current[u] = pts[static_cast<std::size_t>(best)];
        --remaining;
        uav = (uav + 1) % n_uavs;
    }
    return make_plan(std::move(routes), ch_points, dock, altitude);
}

namespace {

// ---- genetic solver -----------------------------------------------------

struct Individual {
    std::vector<int> perm;   // visit order over all CHs
    std::vector<int> cuts;   // n_uavs-1 split positions, ascending, in [1, n-1]
    double fitness = kInf;
};

std::vector<int> random_cuts(int n, int n_uavs, Rng& rng) {
    // Sample n_uavs-1 distinct cut positions from {1..n-1}; segments nonempty.
    std::vector<int> all(static_cast<std::size_t>(n - 1));
    std::iota(all.begin(), all.end(), 1);
    rng.shuffle(all.begin(), all.end());
    std::vector<int> cuts(all.begin(), all.begin() + (n_uavs - 1));
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

std::vector<std::vector<int>> split_routes(const Individual& ind, int n_uavs) {
    std::vector<std::vector<int>> routes(static_cast<std::size_t>(n_uavs));
    int start = 0;
    for (int u = 0; u < n_uavs; ++u) {
        const int end = u + 1 < n_uavs ? ind.cuts[static_cast<std::size_t>(u)]
                                       : static_cast<int>(ind.perm.size());
        routes[static_cast<std::size_t>(u)].assign(ind.perm.begin() + start, ind.perm.begin() + end);
        start = end;
    }
    return routes;
}

struct FitnessEval {
    const std::vector<Point3>* pts;   // at altitude
    Point3 dock;                      // at altitude
    int n_uavs;
    std::optional<double> delta_th;

    double operator()(const Individual& ind) const {
        // Per-UAV leg sums; fairness is enforced by rejection.
        double total = 0.0;
        std::vector<double> lens(static_cast<std::size_t>(n_uavs), 0.0);
        int start = 0;
        for (int u = 0; u < n_uavs; ++u) {
            const int end = u + 1 < n_uavs ? ind.cuts[static_cast<std::size_t>(u)]
                                           : static_cast<int>(ind.perm.size());
            Point3 prev = dock;
            double len = 0.0;
            for (int i = start; i < end; ++i) {
                const auto& p = (*pts)[static_cast<std::size_t>(ind.perm[static_cast<std::size_t>(i)])];
                len += distance(prev, p);
                prev = p;
            }
            len += distance(prev, dock);
            lens[static_cast<std::size_t>(u)] = len;
            total += len;
            start = end;
        }
        if (delta_th) {
            const double mean = total / n_uavs;
            double ss = 0.0;
            for (double l : lens) ss += (l - mean) * (l - mean);
            if (std::sqrt(ss / n_uavs) > *delta_th) return kInf;
        }
        return total;
    }
};

std::vector<int> ordered_crossover(const std::vector<int>& a, const std::vector<int>& b, Rng& rng) {
    const auto n = a.size();
    auto i = rng.uniform_index(n);
    auto j = rng.uniform_index(n);
    if (i > j) std::swap(i, j);
    std::vector<int> child(n, -1);
    std::vector<bool> used(n, false);
    for (auto k = i; k <= j; ++k) {
        child[k] = a[k];
        used[static_cast<std::size_t>(a[k])] = true;
    }
    std::size_t pos = (j + 1) % n;
    for (std::size_t k = 0; k < n; ++k) {
        const int gene = b[(j + 1 + k) % n];
        if (used[static_cast<std::size_t>(gene)]) continue;
        child[pos] = gene;
        pos = (pos + 1) % n;
    }
    return child;
}

RoutePlan run_ga(const std::vector<Point3>& ch_points, const Point3& dock, int n_uavs,
                 double altitude, const GAConfig& cfg, std::optional<double> delta_th,
                 std::uint64_t seed, bool* found_feasible, const GaObserver& observer = {}) {
    cfg.validate();
    const int n = static_cast<int>(ch_points.size());
    if (n_uavs < 1 || n < n_uavs) {
        throw std::invalid_argument("ga_mtsp: need 1 <= n_uavs <= |CHs|");
    }
    std::vector<Point3> pts;
    for (const auto& p : ch_points) pts.push_back(at_altitude(p, altitude));
    const FitnessEval eval{&pts, at_altitude(dock, altitude), n_uavs, delta_th};
    Rng rng(seed);

    const int pop_size = cfg.population_size;
    const int n_elite = std::max(1, static_cast<int>(std::ceil(cfg.elite_fraction * pop_size)));

    std::vector<Individual> pop(static_cast<std::size_t>(pop_size));
    for (auto& ind : pop) {
        ind.perm.resize(static_cast<std::size_t>(n));
        std::iota(ind.perm.begin(), ind.perm.end(), 0);
        rng.shuffle(ind.perm.begin(), ind.perm.end());
        if (n_uavs > 1) ind.cuts = random_cuts(n, n_uavs, rng);
        ind.fitness = eval(ind);
    }

    auto by_fitness = [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; };
    std::sort(pop.begin(), pop.end(), by_fitness);

    auto tournament = [&]() -> const Individual& {
        std::size_t best = rng.uniform_index(static_cast<std::size_t>(pop_size));
        for (int t = 1; t < cfg.tournament_size; ++t) {
            const auto c = rng.uniform_index(static_cast<std::size_t>(pop_size));
            if (pop[c].fitness < pop[best].fitness) best = c;
        }
        return pop[best];
    };

    double best_fitness = pop.front().fitness;
    int stall = 0;
    std::vector<Individual> next(static_cast<std::size_t>(pop_size));
    for (int gen = 0; gen < cfg.max_generations && stall < cfg.stall_generations; ++gen) {
        for (int e = 0; e < n_elite; ++e) next[static_cast<std::size_t>(e)] = pop[static_cast<std::size_t>(e)];
        for (int i = n_elite; i < pop_size; ++i) {
            const Individual& pa = tournament();
            const Individual& pb = tournament();
            Individual child;
            child.perm = n > 1 ? ordered_crossover(pa.perm, pb.perm, rng) : pa.perm;
            if (n_uavs > 1) child.cuts = random_cuts(n, n_uavs, rng);
            for (int g = 0; g < n; ++g) {
                if (rng.uniform() < cfg.mutation_rate) {
                    const auto j = rng.uniform_index(static_cast<std::size_t>(n));
                    std::swap(child.perm[static_cast<std::size_t>(g)], child.perm[j]);
                }
            }
            child.fitness = eval(child);
            next[static_cast<std::size_t>(i)] = std::move(child);
        }
        pop.swap(next);
        std::sort(pop.begin(), pop.end(), by_fitness);
        if (pop.front().fitness < best_fitness - 1e-9) {
            best_fitness = pop.front().fitness;
            stall = 0;
        } else {
            ++stall;
        }
        if (observer) observer(gen, pop.front().fitness);
    }

    const Individual& best = pop.front();
    if (found_feasible) *found_feasible = std::isfinite(best.fitness);
    if (!std::isfinite(best.fitness)) return {};
    return make_plan(split_routes(best, n_uavs), ch_points, dock, altitude);
}

} // namespace

RoutePlan ga_mtsp(const std::vector<Point3>& ch_points, const Point3& dock, int n_uavs,
                  double altitude, const GAConfig& cfg, std::uint64_t seed,
                  const GaObserver& observer) {
    return run_ga(ch_points, dock, n_uavs, altitude, cfg, std::nullopt, seed, nullptr, observer);
}

std::optional<RoutePlan> ga_mtsp_fair(const std::vector<Point3>& ch_points,
                                      const Point3& dock, int n_uavs, double altitude,
                                      const GAConfig& cfg, double delta_threshold,
                                      std::uint64_t seed) {
    bool feasible = false;
    RoutePlan plan = run_ga(ch_points, dock, n_uavs, altitude, cfg, delta_threshold, seed, &feasible);
    if (!feasible) return std::nullopt;
    return plan;
}

RoutePlan tspn_adjust(const RoutePlan& plan, const std::vector<Point3>& ch_points,
                      double radius) {
    if (radius < 0.0) throw std::invalid_argument("tspn_adjust: radius must be >= 0");
    RoutePlan out = plan;
    if (radius == 0.0) return out;
    for (std::size_t u = 0; u < out.routes.size(); ++u) {
        auto& wps = out.waypoints[u];
        Point3 current = wps.front();
        for (std::size_t i = 0; i < out.routes[u].size(); ++i) {
            const Point3& ch = ch_points[static_cast<std::size_t>(out.routes[u][i])];
            const Point3 center{ch.x, ch.y, current.z};
            const double dx = center.x - current.x;
            const double dy = center.y - current.y;
            const double dist = std::hypot(dx, dy);
            Point3 adjusted;
            if (dist <= radius) {
                adjusted = current; // already inside the coverage circle
            } else {
                const double t = (dist - radius) / dist; // nearer circle intersection
                adjusted = {current.x + t * dx, current.y + t * dy, current.z};
            }
            wps[i + 1] = adjusted;
            current = adjusted;
        }
    }
    finalize_lengths(out);
    return out;
}

double tspn_gain(double d_tsp, double d_tspn) {
    if (d_tsp <= 0.0) throw std::invalid_argument("tspn_gain: d_tsp must be > 0");
    return 1.0 - d_tspn / d_tsp;
}

ValidationReport validate_plan(const RoutePlan& plan, const std::vector<Point3>& ch_points,
                               const EnvironmentProfile& env, const RadioConfig& cfg) {
    ValidationReport rep;
    const int n = static_cast<int>(ch_points.size());

    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    bool indices_ok = true;
    for (const auto& route : plan.routes) {
        for (int ch : route) {
            if (ch < 0 || ch >= n) {
                indices_ok = false;
            } else {
                ++seen[static_cast<std::size_t>(ch)];
            }
        }
    }
    rep.partition_ok = indices_ok && std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
    if (!rep.partition_ok) rep.failures.push_back("partition: some CH missing, duplicated, or out of range");

    rep.endpoints_ok = plan.waypoints.size() == plan.routes.size() && !plan.waypoints.empty();
    if (rep.endpoints_ok) {
        const Point3 dock = plan.waypoints.front().front();
        for (std::size_t u = 0; u < plan.waypoints.size(); ++u) {
            const auto& wps = plan.waypoints[u];
            if (wps.size() != plan.routes[u].size() + 2 || wps.front() != dock || wps.back() != dock) {
                rep.endpoints_ok = false;
            }
        }
    }
    if (!rep.endpoints_ok) rep.failures.push_back("endpoints: waypoint sequences must start and end at the dock");

    rep.power_ok = true;
    for (std::size_t u = 0; u < plan.routes.size() && u < plan.waypoints.size(); ++u) {
        for (std::size_t i = 0; i < plan.routes[u].size(); ++i) {
            if (i + 1 >= plan.waypoints[u].size()) break;
            const Point3& wp = plan.waypoints[u][i + 1];
            const Point3& ch = ch_points[static_cast<std::size_t>(plan.routes[u][i])];
            const double d = distance(ch, wp);
            const double theta = elevation_angle(ch, wp);
            const double loss = channel::mean_path_loss(env, cfg, d, theta);
            if (channel::received_power_uav(cfg, loss) < cfg.p_th - 1e-9) {
                rep.power_ok = false;
                rep.failures.push_back("power: hover waypoint below receiver sensitivity");
            }
        }
    }

    rep.lengths_ok = plan.lengths.size() == plan.waypoints.size();
    if (rep.lengths_ok) {
        double total = 0.0;
        for (std::size_t u = 0; u < plan.waypoints.size(); ++u) {
            const double len = route_length(plan.waypoints[u]);
            total += len;
            const double scale = std::max(1.0, std::abs(len));
            if (std::abs(len - plan.lengths[u]) > 1e-6 * scale) rep.lengths_ok = false;
        }
        const double scale = std::max(1.0, std::abs(total));
        if (std::abs(total - plan.total_length) > 1e-6 * scale) rep.lengths_ok = false;
        if (std::abs(trajectory_std(plan) - plan.std_dev) > 1e-6 * std::max(1.0, plan.std_dev)) {
            rep.lengths_ok = false;
        }
    }
    if (!rep.lengths_ok) rep.failures.push_back("lengths: stored lengths inconsistent with waypoints");

    return rep;
}

nlohmann::json to_json(const RoutePlan& plan) {
    nlohmann::json wps = nlohmann::json::array();
    for (const auto& seq : plan.waypoints) {
        nlohmann::json s = nlohmann::json::array();
        for (const auto& p : seq) s.push_back(to_json(p));
        wps.push_back(std::move(s));
    }
    return nlohmann::json{
        {"routes", plan.routes},
        {"waypoints", std::move(wps)},
        {"lengths", plan.lengths},
        {"total_length", plan.total_length},
        {"std_dev", plan.std_dev},
        {"mission_time", plan.mission_time},
    };
}

RoutePlan route_plan_from_json(const nlohmann::json& j) {
    RoutePlan plan;
    plan.routes = j.at("routes").get<std::vector<std::vector<int>>>();
    for (const auto& seq : j.at("waypoints")) {
        std::vector<Point3> wps;
        for (const auto& p : seq) wps.push_back(point3_from_json(p));
        plan.waypoints.push_back(std::move(wps));
    }
    plan.lengths = j.at("lengths").get<std::vector<double>>();
    plan.total_length = j.at("total_length").get<double>();
    plan.std_dev = j.at("std_dev").get<double>();
    plan.mission_time = j.value("mission_time", 0.0);
    return plan;
}

} // namespace skyharvest
