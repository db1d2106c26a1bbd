// Acceptance suite: one pass/fail line per criterion, plus the doctest
// assertions backing each line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <thread>
#include <vector>

#include "skyharvest/channel.hpp"
#include "skyharvest/clustering.hpp"
#include "skyharvest/harness.hpp"
#include "skyharvest/routing.hpp"
#include "skyharvest/rng.hpp"

using namespace skyharvest;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAlt = 200.0;
const Point3 kDock{5000.0, 5000.0, 0.0};

void report(int criterion, const char* name, bool ok) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, name);
    std::fflush(stdout);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const auto threads = std::min<std::size_t>(harness::worker_threads(), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<Point3> uniform_chs(std::uint64_t seed, int n) {
    Rng rng(seed);
    std::vector<Point3> pts;
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0.0, 10000.0), rng.uniform(0.0, 10000.0), 0.0});
    return pts;
}

RadioConfig reference_radio() { return {1e-4, 289.0, 2.0, 20.0, -100.0, 2.0e9}; }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Shared instances for criteria 1 and 2: 30 seeded instances, K' in 6..10.
struct SolverGaps {
    std::vector<double> ga;
    std::vector<double> nn;
};

const SolverGaps& solver_gaps() {
    static const SolverGaps gaps = [] {
        SolverGaps g;
        const GAConfig cfg; // reference parameters: population 500, 1000 generations
        std::vector<double> ga(30), nn(30);
        parallel_for(30, [&](std::size_t i) {
            const int k = 6 + static_cast<int>(i % 5);
            const std::uint64_t seed = derive_seed(8, i + 1);
            const auto chs = uniform_chs(seed, k);
            const double exact = brute_force_mtsp(chs, kDock, 1, kAlt).total_length;
            const double ga_len = ga_mtsp(chs, kDock, 1, kAlt, cfg, derive_seed(seed, 1)).total_length;
            const double nn_len = nearest_neighbor_route(chs, kDock, 1, kAlt).total_length;
            ga[i] = ga_len / exact - 1.0;
            nn[i] = nn_len / exact - 1.0;
        });
        g.ga = std::move(ga);
        g.nn = std::move(nn);
        return g;
    }();
    return gaps;
}

} // namespace

TEST_CASE("criterion 1: GA near-optimality") {
    const auto& gaps = solver_gaps();
    const double med = median(gaps.ga);
    const double worst = *std::max_element(gaps.ga.begin(), gaps.ga.end());
    const bool ok = med <= 0.035 && worst <= 0.06;
    report(1, "GA near-optimality (median <= 3.5%, max <= 6%)", ok);
    CHECK(med <= 0.035);
    CHECK(worst <= 0.06);
}

TEST_CASE("criterion 2: NN inferiority") {
    const auto& gaps = solver_gaps();
    const double worst_nn = *std::max_element(gaps.nn.begin(), gaps.nn.end());
    int ga_no_worse = 0;
    for (std::size_t i = 0; i < gaps.ga.size(); ++i) {
        if (gaps.ga[i] <= gaps.nn[i] + 1e-12) ++ga_no_worse;
    }
    const bool ok = worst_nn <= 0.15 && ga_no_worse >= 27;
    report(2, "NN gap <= 15%, GA <= NN on >= 90% of instances", ok);
    CHECK(worst_nn <= 0.15);
    CHECK(ga_no_worse >= 27); // 90% of 30
}

TEST_CASE("criterion 3: clustering K' band") {
    const auto base = generate_scenario(1, 500, 10000, 10000, kDock, 100, 3, kAlt, 10);
    std::vector<int> ks(100, 0);
    std::vector<char> satisfied(100, 0);
    parallel_for(100, [&](std::size_t run) {
        Scenario s = base;
        s.seed = derive_seed(base.seed, run + 1);
        const auto res = plan_clusterheads(s, 1700.0);
        if (res.ok) {
            ks[run] = res.clustering.k_prime;
            satisfied[run] = res.clustering.d_max <= 1700.0;
        }
    });
    int in_wide = 0, in_paper = 0, all_satisfied = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        if (ks[i] >= 20 && ks[i] <= 36) ++in_wide;
        if (ks[i] >= 22 && ks[i] <= 34) ++in_paper;
        if (satisfied[i]) ++all_satisfied;
    }
    const bool ok = in_wide == 100 && in_paper >= 80 && all_satisfied == 100;
    report(3, "clustering band: K' in [20,36] always, [22,34] on >= 80%, d_max <= d_th", ok);
    CHECK(in_wide == 100);
    CHECK(in_paper >= 80);
    CHECK(all_satisfied == 100);
}

TEST_CASE("criterion 4: TSPN gain") {
    const GAConfig cfg;
    std::vector<double> rho(50);
    parallel_for(50, [&](std::size_t i) {
        const std::uint64_t seed = derive_seed(404, i + 1);
        const auto chs = uniform_chs(seed, 10);
        const auto tsp = ga_mtsp(chs, kDock, 1, kAlt, cfg, derive_seed(seed, 1));
        const auto tspn = tspn_adjust(tsp, chs, 1000.0);
        rho[i] = tspn_gain(tsp.total_length, tspn.total_length);
    });
    const double mean = std::accumulate(rho.begin(), rho.end(), 0.0) / 50.0;
    const bool all_positive = std::all_of(rho.begin(), rho.end(), [](double r) { return r > 0.0; });
    const bool ok = all_positive && mean >= 0.08 && mean <= 0.25;
    report(4, "TSPN gain positive on every seed, mean in [8%, 25%]", ok);
    CHECK(all_positive);
    CHECK(mean >= 0.08);
    CHECK(mean <= 0.25);
}

TEST_CASE("criterion 5: altitude curve") {
    // A 110 dB budget keeps coverage radii below the field scale; with the
    // default 120 dB link budget the discs swallow the whole 10x10 km area
    // and the gain saturates at 1 for every profile.
    auto cfg = reference_radio();
    cfg.p_th = -90.0;
    const GAConfig ga_cfg;
    const auto urban = environment_preset("urban");
    const auto suburban = environment_preset("suburban");

    // z_max agrees with the closed-form rearrangement at theta = pi/2.
    const double budget = cfg.p_c - cfg.p_th;
    const auto urban_alt = channel::max_service_altitude(urban, cfg);
    const double closed_form = std::pow(
        10.0, (budget - channel::free_space_loss(cfg.f_c) - channel::excess_loss_f(urban, kPi / 2)) / 20.0);
    const bool zmax_ok = std::abs(urban_alt.z_max - closed_form) <= 0.02 * closed_form;

    // One replication, shared CH set and tour order across altitudes.
    const std::uint64_t seed = derive_seed(505, 1);
    const auto chs = uniform_chs(seed, 20);
    const auto base = ga_mtsp(chs, kDock, 1, kAlt, ga_cfg, derive_seed(seed, 1));

    auto rho_at = [&](const EnvironmentProfile& env, double z) {
        const auto radius = channel::coverage_radius(env, cfg, z);
        if (!radius) return 0.0;
        RoutePlan tsp = base; // tour order is altitude-independent
        for (auto& wps : tsp.waypoints) {
            for (auto& p : wps) p.z = z;
        }
        const auto tspn = tspn_adjust(tsp, chs, *radius);
        return tspn_gain(tsp.total_length, tspn.total_length);
    };

    std::vector<double> zs;
    for (double z = 100.0; z <= urban_alt.z_max * 1.05; z *= 1.12) zs.push_back(z);
    std::vector<double> urban_rho(zs.size()), suburban_rho(zs.size());
    parallel_for(zs.size(), [&](std::size_t i) {
        urban_rho[i] = rho_at(urban, zs[i]);
        suburban_rho[i] = rho_at(suburban, zs[i]);
    });

    // Unimodal: non-decreasing up to the peak, non-increasing after.
    const auto peak = static_cast<std::size_t>(
        std::max_element(urban_rho.begin(), urban_rho.end()) - urban_rho.begin());
    bool unimodal = true;
    for (std::size_t i = 1; i <= peak; ++i) unimodal &= urban_rho[i] >= urban_rho[i - 1] - 1e-9;
    for (std::size_t i = peak + 1; i < urban_rho.size(); ++i) unimodal &= urban_rho[i] <= urban_rho[i - 1] + 1e-9;

    // Coverage (and hence the gain) dies right at z_max.
    const bool dies_at_zmax = !channel::coverage_radius(urban, cfg, urban_alt.z_max * 1.02).has_value() &&
                              channel::coverage_radius(urban, cfg, urban_alt.z_max * 0.98).has_value();

    const double urban_peak = urban_rho[peak];
    const double suburban_peak = *std::max_element(suburban_rho.begin(), suburban_rho.end());

    const bool ok = zmax_ok && unimodal && dies_at_zmax && suburban_peak > urban_peak;
    report(5, "altitude curve unimodal, z_max matches closed form, suburban peak higher", ok);
    CHECK(zmax_ok);
    CHECK(unimodal);
    CHECK(dies_at_zmax);
    CHECK(suburban_peak > urban_peak);
}

TEST_CASE("criterion 6: multi-UAV scaling") {
    const GAConfig cfg;
    constexpr int kReps = 20;
    std::vector<std::array<double, 3>> per_uav(kReps);
    parallel_for(kReps * 3, [&](std::size_t idx) {
        const auto rep = idx / 3;
        const int u = static_cast<int>(idx % 3) + 1;
        const std::uint64_t seed = derive_seed(606, rep + 1);
        const auto chs = uniform_chs(seed, 60);
        const auto plan = ga_mtsp(chs, kDock, u, kAlt, cfg, derive_seed(seed, static_cast<std::uint64_t>(u)));
        per_uav[rep][static_cast<std::size_t>(u - 1)] = plan.total_length / u;
    });
    double mean1 = 0.0, mean2 = 0.0, mean3 = 0.0;
    for (const auto& r : per_uav) {
        mean1 += r[0];
        mean2 += r[1];
        mean3 += r[2];
    }
    mean1 /= kReps;
    mean2 /= kReps;
    mean3 /= kReps;
    const bool decreasing = mean1 > mean2 && mean2 > mean3;
    const bool diminishing = (mean1 - mean2) > (mean2 - mean3);
    const bool ok = decreasing && diminishing;
    report(6, "mean per-UAV length decreases 1->2->3 with diminishing returns", ok);
    CHECK(decreasing);
    CHECK(diminishing);
}

TEST_CASE("criterion 7: fairness hard bound") {
    const double delta_th = 10000.0;
    bool all_fair = true;

    // Direct solver calls across a grid of instances.
    GAConfig cfg;
    cfg.population_size = 200;
    cfg.max_generations = 300;
    cfg.stall_generations = 80;
    struct Task { int k, u; std::size_t rep; };
    std::vector<Task> tasks;
    for (int k : {20, 60, 100}) {
        for (int u : {2, 3}) {
            for (std::size_t rep = 0; rep < 3; ++rep) tasks.push_back({k, u, rep});
        }
    }
    std::vector<char> fair(tasks.size(), 1);
    parallel_for(tasks.size(), [&](std::size_t i) {
        const auto& t = tasks[i];
        const std::uint64_t seed = derive_seed(707, (static_cast<std::uint64_t>(t.k) << 8) + t.rep);
        const auto chs = uniform_chs(seed, t.k);
        const auto plan = ga_mtsp_fair(chs, kDock, t.u, kAlt, cfg, delta_th, derive_seed(seed, 9));
        if (plan) fair[i] = plan->std_dev <= delta_th;
    });
    all_fair = std::all_of(fair.begin(), fair.end(), [](char c) { return c != 0; });

    // And over every row of the fairness experiment.
    auto exp_cfg = harness::default_config("fairness");
    exp_cfg.k_values = {20, 60, 100};
    exp_cfg.uav_values = {2, 3};
    exp_cfg.replications = 2;
    exp_cfg.delta_threshold = delta_th;
    exp_cfg.ga = cfg;
    const auto result = harness::run_experiment(exp_cfg);
    for (const auto& row : result.rows) {
        if (std::get<std::string>(row.back()) != "ok") continue;
        if (std::get<double>(row[7]) > delta_th) all_fair = false;
    }

    report(7, "every fair plan satisfies std_dev <= delta_th (zero tolerance)", all_fair);
    CHECK(all_fair);
}

TEST_CASE("criterion 8a: coverage radius vs dense-grid oracle") {
    Rng rng(808);
    struct Triple {
        EnvironmentProfile env;
        RadioConfig cfg;
        double z;
    };
    std::vector<Triple> triples;
    while (triples.size() < 100) {
        const auto& env = environment_presets()[rng.uniform_index(4)];
        RadioConfig cfg = reference_radio();
        cfg.p_c = rng.uniform(10.0, 30.0);
        cfg.p_th = cfg.p_c - rng.uniform(95.0, 130.0);
        const double z = rng.uniform(100.0, 1500.0);
        const auto r = channel::coverage_radius(env, cfg, z);
        // Keep feasible, non-grazing geometries where a 10^6-point grid can
        // localize theta* tightly.
        if (r && *r > 1.0 && *r < 15.0 * z) triples.push_back({env, cfg, z});
    }
    std::vector<double> errs(triples.size(), 0.0);
    parallel_for(triples.size(), [&](std::size_t ti) {
        const auto& t = triples[ti];
        const double target = t.cfg.p_c - t.cfg.p_th - 20.0 * std::log10(t.z) -
                              channel::free_space_loss(t.cfg.f_c);
        constexpr int n = 1000000;
        double best_theta = kPi / 2;
        double best_err = std::abs(channel::excess_loss_f(t.env, kPi / 2) - target);
        for (int i = 1; i < n; ++i) {
            const double theta = (kPi / 2) * i / n;
            const double err = std::abs(channel::excess_loss_f(t.env, theta) - target);
            if (err < best_err) {
                best_err = err;
                best_theta = theta;
            }
        }
        const double oracle = t.z / std::tan(best_theta);
        errs[ti] = std::abs(*channel::coverage_radius(t.env, t.cfg, t.z) - oracle);
    });
    const double worst = *std::max_element(errs.begin(), errs.end());
    const bool ok = worst < 0.5;
    report(8, "coverage_radius matches 10^6-point grid oracle within 0.5 m", ok);
    CHECK(worst < 0.5);
}

TEST_CASE("criterion 8b: TSPN adjustment vs sampling oracle") {
    Rng rng(818);
    struct Geometry {
        Point3 current;
        Point3 center; // CH overhead projection
        double radius;
    };
    std::vector<Geometry> geoms;
    for (int i = 0; i < 1000; ++i) {
        Geometry g;
        g.current = {rng.uniform(-5000.0, 5000.0), rng.uniform(-5000.0, 5000.0), kAlt};
        g.center = {rng.uniform(-5000.0, 5000.0), rng.uniform(-5000.0, 5000.0), kAlt};
        g.radius = rng.uniform(10.0, 2000.0);
        if (i % 10 == 0) g.current.x = g.center.x; // vertical approach line
        if (i % 17 == 0) {
            // Start inside the circle.
            g.current.x = g.center.x + 0.3 * g.radius;
            g.current.y = g.center.y + 0.2 * g.radius;
        }
        geoms.push_back(g);
    }

    std::vector<double> errs(geoms.size(), 0.0);
    parallel_for(geoms.size(), [&](std::size_t gi) {
        const auto& g = geoms[gi];

        // Implementation path: a one-CH plan through this geometry.
        RoutePlan plan;
        plan.routes = {{0}};
        plan.waypoints = {{g.current, g.center, g.current}};
        plan.lengths = {2.0 * distance(g.current, g.center)};
        plan.total_length = plan.lengths[0];
        const Point3 ch_ground{g.center.x, g.center.y, 0.0};
        const auto adjusted = tspn_adjust(plan, {ch_ground}, g.radius).waypoints[0][1];

        // Oracle: march along the ray toward the center with 10^6 samples,
        // find the first entry into the disc, then bisect that bracket.
        auto inside = [&](double t) {
            const double x = g.current.x + t * (g.center.x - g.current.x);
            const double y = g.current.y + t * (g.center.y - g.current.y);
            return std::hypot(x - g.center.x, y - g.center.y) <= g.radius;
        };
        double t_star = 0.0;
        if (!inside(0.0)) {
            constexpr int n = 1000000;
            int first_in = -1;
            for (int i = 1; i <= n; ++i) {
                if (inside(static_cast<double>(i) / n)) {
                    first_in = i;
                    break;
                }
            }
            double lo = static_cast<double>(first_in - 1) / n;
            double hi = static_cast<double>(first_in) / n;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (inside(mid)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            t_star = hi;
        }
        const Point3 oracle{g.current.x + t_star * (g.center.x - g.current.x),
                            g.current.y + t_star * (g.center.y - g.current.y), kAlt};
        errs[gi] = distance(adjusted, oracle) / g.radius;
    });
    const double worst = *std::max_element(errs.begin(), errs.end());
    const bool ok = worst < 1e-6;
    report(8, "tspn_adjust matches 10^6-sample ray oracle within 1e-6*R", ok);
    CHECK(worst < 1e-6);
}

TEST_CASE("criterion 9: invariant suites") {
    bool all_ok = true;

    // Route validity over randomized instances (NN and small GA).
    {
        Rng rng(909);
        GAConfig cfg;
        cfg.population_size = 30;
        cfg.max_generations = 40;
        cfg.stall_generations = 20;
        bool valid = true;
        for (int i = 0; i < 1000; ++i) {
            const int k = 3 + static_cast<int>(rng.uniform_index(10));
            const int u = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(std::min(k, 3))));
            const auto chs = uniform_chs(rng.next_u64(), k);
            const RoutePlan plan = (i % 2 == 0)
                                       ? nearest_neighbor_route(chs, kDock, u, kAlt)
                                       : ga_mtsp(chs, kDock, u, kAlt, cfg, rng.next_u64());
            std::vector<int> seen(static_cast<std::size_t>(k), 0);
            for (const auto& route : plan.routes) {
                if (route.empty()) valid = false;
                for (int ch : route) ++seen[static_cast<std::size_t>(ch)];
            }
            for (int c : seen) valid &= (c == 1);
            for (const auto& wps : plan.waypoints) {
                valid &= wps.front() == wps.back();
            }
            if (!valid) break;
        }
        all_ok &= valid;
        CHECK(valid);
    }

    // GA elitism: monotone best fitness, checked per generation.
    {
        Rng rng(919);
        GAConfig cfg;
        cfg.population_size = 24;
        cfg.max_generations = 50;
        cfg.stall_generations = 50;
        bool monotone = true;
        int generations_checked = 0;
        for (int i = 0; i < 25 && monotone; ++i) {
            const auto chs = uniform_chs(rng.next_u64(), 12);
            double prev = std::numeric_limits<double>::infinity();
            ga_mtsp(chs, kDock, 2, kAlt, cfg, rng.next_u64(), [&](int, double best) {
                if (best > prev + 1e-9) monotone = false;
                prev = best;
                ++generations_checked;
            });
        }
        all_ok &= monotone && generations_checked >= 1000;
        CHECK(monotone);
        CHECK(generations_checked >= 1000);
    }

    // Path-loss mixture bounds.
    {
        Rng rng(929);
        const auto cfg = reference_radio();
        bool bounded = true;
        for (int i = 0; i < 1000; ++i) {
            const auto& env = environment_presets()[rng.uniform_index(4)];
            const double d = rng.uniform(1.0, 20000.0);
            const double theta = rng.uniform(1e-6, kPi / 2);
            const double common = channel::free_space_loss(cfg.f_c) + 20.0 * std::log10(d);
            const double v = channel::mean_path_loss(env, cfg, d, theta);
            bounded &= v >= common + env.nu_los - 1e-9 && v <= common + env.nu_nlos + 1e-9;
        }
        all_ok &= bounded;
        CHECK(bounded);
    }

    // snr(d_th) == gamma_th.
    {
        Rng rng(939);
        bool consistent = true;
        for (int i = 0; i < 1000; ++i) {
            RadioConfig cfg = reference_radio();
            cfg.gamma_th = std::pow(10.0, rng.uniform(-6.0, 0.0));
            cfg.snr_budget = cfg.gamma_th * std::pow(10.0, rng.uniform(0.0, 9.0));
            cfg.alpha = rng.uniform(2.0, 5.0);
            const double d_th = channel::max_sensor_range(cfg);
            const double snr = channel::snr_at_clusterhead(cfg, d_th);
            consistent &= std::abs(snr / cfg.gamma_th - 1.0) < 1e-9;
        }
        all_ok &= consistent;
        CHECK(consistent);
    }

    // TSPN adjustment never lengthens the tour when the dock is clear of all
    // coverage circles.
    {
        Rng rng(949);
        bool shorter = true;
        for (int i = 0; i < 1000; ++i) {
            const int k = 3 + static_cast<int>(rng.uniform_index(8));
            const auto chs = uniform_chs(rng.next_u64(), k);
            double min_dock_dist = std::numeric_limits<double>::infinity();
            for (const auto& ch : chs) min_dock_dist = std::min(min_dock_dist, horizontal_distance(kDock, ch));
            if (min_dock_dist < 1.0) continue;
            const double radius = rng.uniform(0.0, 0.99 * min_dock_dist);
            const auto plan = nearest_neighbor_route(chs, kDock, 1, kAlt);
            const auto adj = tspn_adjust(plan, chs, radius);
            shorter &= adj.total_length <= plan.total_length + 1e-6;
        }
        all_ok &= shorter;
        CHECK(shorter);
    }

    // End-to-end determinism: byte-identical CSV on every experiment.
    {
        bool identical = true;
        for (const std::string name : {"clustering_sweep", "solver_compare", "tspn_gain",
                                       "altitude_gain", "multi_uav", "fairness"}) {
            auto cfg = harness::default_config(name);
            cfg.ga.population_size = 40;
            cfg.ga.max_generations = 60;
            cfg.ga.stall_generations = 25;
            cfg.replications = 2;
            if (name == "clustering_sweep") cfg.d_th_values = {1700.0, 2500.0};
            if (name == "solver_compare") cfg.k_values = {6};
            if (name == "tspn_gain") cfg.k_values = {8};
            if (name == "altitude_gain") {
                cfg.z_values = {200.0, 2000.0};
                cfg.k_values = {8};
                cfg.replications = 1;
            }
            if (name == "multi_uav" || name == "fairness") {
                cfg.k_values = {10, 20};
                cfg.uav_values = {1, 2};
                cfg.replications = 1;
            }
            const auto a = harness::to_csv_string(harness::run_experiment(cfg));
            const auto b = harness::to_csv_string(harness::run_experiment(cfg));
            identical &= (a == b);
        }
        all_ok &= identical;
        CHECK(identical);
    }

    report(9, "invariant suites over >= 1000 randomized cases + determinism", all_ok);
    CHECK(all_ok);
}
