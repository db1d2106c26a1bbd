#include "skyharvest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "skyharvest/channel.hpp"
#include "skyharvest/clustering.hpp"
#include "skyharvest/rng.hpp"

#include <nlohmann/json.hpp>

namespace skyharvest {
namespace harness {

namespace {

constexpr const char* kVersion = "skyharvest 0.1.0";

std::vector<Point3> random_ch_points(const Scenario& s, int k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        pts.push_back({rng.uniform(0.0, s.area_width), rng.uniform(0.0, s.area_height), 0.0});
    }
    return pts;
}

// Run fn(i) for i in [0, n), spreading indices over worker threads. Results
// must go to preallocated, index-keyed slots so the row order stays fixed.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int threads = std::min<int>(worker_threads(), static_cast<int>(n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

using Row = std::vector<CsvCell>;

nlohmann::json ga_to_json(const GAConfig& g) {
    nlohmann::json j{
        {"population_size", g.population_size},
        {"max_generations", g.max_generations},
        {"mutation_rate", g.mutation_rate},
        {"elite_fraction", g.elite_fraction},
        {"stall_generations", g.stall_generations},
        {"tournament_size", g.tournament_size},
    };
    if (g.delta_threshold) j["delta_threshold"] = *g.delta_threshold;
    return j;
}

GAConfig ga_from_json(const nlohmann::json& j) {
    GAConfig g;
    g.population_size = j.value("population_size", g.population_size);
    g.max_generations = j.value("max_generations", g.max_generations);
    g.mutation_rate = j.value("mutation_rate", g.mutation_rate);
    g.elite_fraction = j.value("elite_fraction", g.elite_fraction);
    g.stall_generations = j.value("stall_generations", g.stall_generations);
    g.tournament_size = j.value("tournament_size", g.tournament_size);
    if (j.contains("delta_threshold")) g.delta_threshold = j.at("delta_threshold").get<double>();
    g.validate();
    return g;
}

} // namespace

int worker_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* cap = std::getenv("SKYHARVEST_THREADS")) {
        const int c = std::atoi(cap);
        if (c >= 1) n = std::min(n, c);
    }
    return n;
}

void ExperimentConfig::validate() const {
    scenario.validate();
    radio.validate();
    env.validate();
    ga.validate();
    if (replications < 1) throw std::invalid_argument("ExperimentConfig: replications must be >= 1");
    static const std::vector<std::string> names = {
        "clustering_sweep", "solver_compare", "tspn_gain", "altitude_gain", "multi_uav", "fairness"};
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw std::invalid_argument("unknown experiment name: " + name);
    }
    if (name == "clustering_sweep" && d_th_values.empty()) {
        throw std::invalid_argument("clustering_sweep: d_th_values must be nonempty");
    }
    if ((name == "solver_compare" || name == "multi_uav" || name == "fairness") && k_values.empty()) {
        throw std::invalid_argument(name + ": k_values must be nonempty");
    }
    if ((name == "multi_uav" || name == "fairness") && uav_values.empty()) {
        throw std::invalid_argument(name + ": uav_values must be nonempty");
    }
    if (name == "altitude_gain" && (z_values.empty() || env_names.empty())) {
        throw std::invalid_argument("altitude_gain: z_values and env_names must be nonempty");
    }
}

ExperimentConfig default_config(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    // Reference setup: 10x10 km, 500 sensors, dock at the center, 200 m
    // altitude, urban environment, 2 GHz carrier, d_th = 1700 m at alpha = 2.
    constexpr double d_th = 1700.0;
    c.scenario = generate_scenario(1, 500, 10000.0, 10000.0, {5000.0, 5000.0, 0.0},
                                   200, 3, 200.0, 10.0);
    c.radio = RadioConfig{1e-4, d_th * d_th * 1e-4, 2.0, 20.0, -100.0, 2.0e9};
    c.env = environment_preset("urban");
    c.ga = GAConfig{};
    c.base_seed = 1;
    if (name == "clustering_sweep") {
        for (double v = 100.0; v <= 2900.0; v += 200.0) c.d_th_values.push_back(v);
        c.replications = 100;
    } else if (name == "solver_compare") {
        c.k_values = {6, 7, 8, 9, 10};
        c.uav_values = {1};
        c.replications = 6;
    } else if (name == "tspn_gain") {
        c.k_values = {10};
        c.tspn_radius = 1000.0;
        c.replications = 50;
    } else if (name == "altitude_gain") {
        c.k_values = {20};
        c.env_names = {"urban", "suburban"};
        for (double z = 200.0; z <= 10200.0; z += 500.0) c.z_values.push_back(z);
        c.replications = 1;
    } else if (name == "multi_uav" || name == "fairness") {
        for (int k = 20; k <= 120; k += 5) c.k_values.push_back(k);
        c.uav_values = {1, 2, 3};
        c.delta_threshold = 10000.0;
        c.replications = 1;
    }
    return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult result;
    if (config.name == "clustering_sweep") {
        result = experiment_clustering_sweep(config);
    } else if (config.name == "solver_compare") {
        result = experiment_solver_compare(config);
    } else if (config.name == "tspn_gain") {
        result = experiment_tspn_gain(config);
    } else if (config.name == "altitude_gain") {
        result = experiment_altitude_gain(config);
    } else if (config.name == "multi_uav") {
        result = experiment_multi_uav(config);
    } else {
        result = experiment_fairness(config);
    }
    result.config_echo = to_json(config).dump();
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

ExperimentResult experiment_clustering_sweep(const ExperimentConfig& config) {
    ExperimentResult res;
    res.columns = {"d_th_m", "run", "seed", "k_prime", "status"};
    const auto n_values = config.d_th_values.size();
    const auto n = n_values * static_cast<std::size_t>(config.replications);
    std::vector<Row> rows(n);
    parallel_for(n, [&](std::size_t idx) {
        const std::size_t vi = idx / static_cast<std::size_t>(config.replications);
        const int run = static_cast<int>(idx % static_cast<std::size_t>(config.replications));
        const double d_th = config.d_th_values[vi];
        Scenario s = config.scenario;
        s.seed = derive_seed(config.base_seed, (vi << 20) + static_cast<std::uint64_t>(run) + 1);
        const auto plan = plan_clusterheads(s, d_th);
        rows[idx] = Row{d_th, static_cast<std::int64_t>(run),
                        static_cast<std::int64_t>(s.seed),
                        static_cast<std::int64_t>(plan.ok ? plan.clustering.k_prime
                                                          : plan.failure.k),
                        std::string(plan.ok ? "ok" : "budget_exceeded")};
    });
    res.rows = std::move(rows);
    return res;
}

ExperimentResult experiment_solver_compare(const ExperimentConfig& config) {
    ExperimentResult res;
    res.columns = {"k_prime", "rep",  "seed",   "len_exact", "len_ga",
                   "len_nn",  "gap_ga", "gap_nn", "status"};
    const auto n = config.k_values.size() * static_cast<std::size_t>(config.replications);
    std::vector<Row> rows(n);
    parallel_for(n, [&](std::size_t idx) {
        const std::size_t ki = idx / static_cast<std::size_t>(config.replications);
        const int rep = static_cast<int>(idx % static_cast<std::size_t>(config.replications));
        const int k = config.k_values[ki];
        const std::uint64_t seed = derive_seed(config.base_seed, idx + 1);
        const auto chs = random_ch_points(config.scenario, k, seed);
        const double z = config.scenario.uav_altitude;
        std::string status = "ok";
        double len_exact = 0.0;
        try {
            len_exact = brute_force_mtsp(chs, config.scenario.dock, 1, z).total_length;
        } catch (const InstanceTooLarge&) {
            status = "instance_too_large";
        }
        const auto ga = ga_mtsp(chs, config.scenario.dock, 1, z, config.ga, derive_seed(seed, 1));
        const auto nn = nearest_neighbor_route(chs, config.scenario.dock, 1, z);
        const double gap_ga = len_exact > 0.0 ? ga.total_length / len_exact - 1.0 : 0.0;
        const double gap_nn = len_exact > 0.0 ? nn.total_length / len_exact - 1.0 : 0.0;
        rows[idx] = Row{static_cast<std::int64_t>(k), static_cast<std::int64_t>(rep),
                        static_cast<std::int64_t>(seed), len_exact, ga.total_length,
                        nn.total_length, gap_ga, gap_nn, status};
    });
    res.rows = std::move(rows);
    return res;
}

ExperimentResult experiment_tspn_gain(const ExperimentConfig& config) {
    ExperimentResult res;
    res.columns = {"rep", "seed", "k_prime", "radius_m", "d_tsp_m", "d_tspn_m", "rho", "status"};
    const int k = config.k_values.empty() ? 10 : config.k_values.front();
    const auto n = static_cast<std::size_t>(config.replications);
    std::vector<Row> rows(n);
    parallel_for(n, [&](std::size_t rep) {
        const std::uint64_t seed = derive_seed(config.base_seed, rep + 1);
        const auto chs = random_ch_points(config.scenario, k, seed);
        const double z = config.scenario.uav_altitude;
        const auto tsp = ga_mtsp(chs, config.scenario.dock, 1, z, config.ga, derive_seed(seed, 1));
        const auto tspn = tspn_adjust(tsp, chs, config.tspn_radius);
        rows[rep] = Row{static_cast<std::int64_t>(rep), static_cast<std::int64_t>(seed),
                        static_cast<std::int64_t>(k), config.tspn_radius, tsp.total_length,
                        tspn.total_length, tspn_gain(tsp.total_length, tspn.total_length),
                        std::string("ok")};
    });
    res.rows = std::move(rows);
    return res;
}

ExperimentResult experiment_altitude_gain(const ExperimentConfig& config) {
    ExperimentResult res;
    res.columns = {"env", "z_m", "rep", "seed", "radius_m", "d_tsp_m", "d_tspn_m", "rho", "status"};
    const int k = config.k_values.empty() ? 20 : config.k_values.front();

    struct Task {
        std::size_t env_i, z_i;
        int rep;
    };
    std::vector<Task> tasks;
    for (std::size_t e = 0; e < config.env_names.size(); ++e) {
        for (std::size_t zi = 0; zi < config.z_values.size(); ++zi) {
            for (int rep = 0; rep < config.replications; ++rep) tasks.push_back({e, zi, rep});
        }
    }
    std::vector<Row> rows(tasks.size());
    // The TSP order depends only on the horizontal geometry, so the GA tour is
    // shared across altitudes within a replication.
    std::vector<RoutePlan> base_plans(static_cast<std::size_t>(config.replications));
    std::vector<std::vector<Point3>> ch_sets(static_cast<std::size_t>(config.replications));
    parallel_for(static_cast<std::size_t>(config.replications), [&](std::size_t rep) {
        const std::uint64_t seed = derive_seed(config.base_seed, rep + 1);
        ch_sets[rep] = random_ch_points(config.scenario, k, seed);
        base_plans[rep] = ga_mtsp(ch_sets[rep], config.scenario.dock, 1,
                                  config.scenario.uav_altitude, config.ga, derive_seed(seed, 1));
    });
    parallel_for(tasks.size(), [&](std::size_t ti) {
        const Task& t = tasks[ti];
        const auto env = environment_preset(config.env_names[t.env_i]);
        const double z = config.z_values[t.z_i];
        const std::uint64_t seed = derive_seed(config.base_seed, static_cast<std::size_t>(t.rep) + 1);
        const auto& chs = ch_sets[static_cast<std::size_t>(t.rep)];
        RoutePlan tsp = base_plans[static_cast<std::size_t>(t.rep)];
        // Re-realize waypoints at this altitude; tour order is unchanged.
        for (auto& wps : tsp.waypoints) {
            for (auto& p : wps) p.z = z;
        }
        tsp.total_length = 0.0;
        tsp.lengths.clear();
        for (const auto& wps : tsp.waypoints) {
            tsp.lengths.push_back(route_length(wps));
            tsp.total_length += tsp.lengths.back();
        }
        const auto radius = channel::coverage_radius(env, config.radio, z);
        if (!radius) {
            rows[ti] = Row{env.name, z, static_cast<std::int64_t>(t.rep),
                           static_cast<std::int64_t>(seed), 0.0, tsp.total_length,
                           tsp.total_length, 0.0, std::string("no_coverage")};
            return;
        }
        const auto tspn = tspn_adjust(tsp, chs, *radius);
        rows[ti] = Row{env.name, z, static_cast<std::int64_t>(t.rep),
                       static_cast<std::int64_t>(seed), *radius, tsp.total_length,
                       tspn.total_length, tspn_gain(tsp.total_length, tspn.total_length),
                       std::string("ok")};
    });
    res.rows = std::move(rows);
    return res;
}

namespace {

ExperimentResult run_multi_uav(const ExperimentConfig& config, bool unconstrained, bool fair) {
    ExperimentResult res;
    res.columns = {"k_prime", "n_uavs", "fair", "rep", "seed", "total_len_m",
                   "mean_len_per_uav_m", "std_m", "status"};
    struct Task {
        int k, u, rep;
        bool fair;
    };
    std::vector<Task> tasks;
    for (int k : config.k_values) {
        for (int u : config.uav_values) {
            for (int rep = 0; rep < config.replications; ++rep) {
                if (unconstrained) tasks.push_back({k, u, rep, false});
                if (fair) tasks.push_back({k, u, rep, true});
            }
        }
    }
    std::vector<Row> rows(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t ti) {
        const Task& t = tasks[ti];
        const std::uint64_t seed =
            derive_seed(config.base_seed,
                        (static_cast<std::uint64_t>(t.k) << 24) + static_cast<std::uint64_t>(t.rep) + 1);
        const auto chs = random_ch_points(config.scenario, t.k, seed);
        const double z = config.scenario.uav_altitude;
        const std::uint64_t ga_seed = derive_seed(seed, static_cast<std::uint64_t>(t.u));
        if (t.k < t.u) {
            rows[ti] = Row{static_cast<std::int64_t>(t.k), static_cast<std::int64_t>(t.u),
                           static_cast<std::int64_t>(t.fair ? 1 : 0), static_cast<std::int64_t>(t.rep),
                           static_cast<std::int64_t>(seed), 0.0, 0.0, 0.0, std::string("infeasible")};
            return;
        }
        std::optional<RoutePlan> plan;
        if (t.fair) {
            plan = ga_mtsp_fair(chs, config.scenario.dock, t.u, z, config.ga,
                                config.delta_threshold, ga_seed);
        } else {
            plan = ga_mtsp(chs, config.scenario.dock, t.u, z, config.ga, ga_seed);
        }
        if (!plan) {
            rows[ti] = Row{static_cast<std::int64_t>(t.k), static_cast<std::int64_t>(t.u),
                           static_cast<std::int64_t>(1), static_cast<std::int64_t>(t.rep),
                           static_cast<std::int64_t>(seed), 0.0, 0.0, 0.0, std::string("infeasible")};
            return;
        }
        rows[ti] = Row{static_cast<std::int64_t>(t.k), static_cast<std::int64_t>(t.u),
                       static_cast<std::int64_t>(t.fair ? 1 : 0), static_cast<std::int64_t>(t.rep),
                       static_cast<std::int64_t>(seed), plan->total_length,
                       plan->total_length / t.u, plan->std_dev, std::string("ok")};
    });
    res.rows = std::move(rows);
    return res;
}

} // namespace

ExperimentResult experiment_multi_uav(const ExperimentConfig& config) {
    return run_multi_uav(config, true, true);
}

ExperimentResult experiment_fairness(const ExperimentConfig& config) {
    return run_multi_uav(config, false, true);
}

namespace {

std::string format_cell(const CsvCell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        return std::to_string(*i);
    }
    if (const auto* d = std::get_if<double>(&cell)) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.6g", *d);
        return buf;
    }
    const auto& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    return quoted;
}

} // namespace

std::string to_csv_string(const ExperimentResult& result) {
    std::string out;
    for (std::size_t i = 0; i < result.columns.size(); ++i) {
        if (i) out += ',';
        out += result.columns[i];
    }
    out += "\r\n";
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += "\r\n";
    }
    return out;
}

nlohmann::json ExperimentResult::metadata() const {
    return nlohmann::json{
        {"version", kVersion},
        {"config", config_echo.empty() ? nlohmann::json{} : nlohmann::json::parse(config_echo)},
        {"wall_seconds", wall_seconds},
        {"rows", rows.size()},
    };
}

void emit_csv(const ExperimentResult& result, const std::string& path) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
        out << to_csv_string(result);
        if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
    }
    std::string meta_path = path;
    const auto dot = meta_path.find_last_of('.');
    if (dot != std::string::npos) meta_path.resize(dot);
    meta_path += ".meta.json";
    std::ofstream meta(meta_path, std::ios::binary);
    if (!meta) throw std::runtime_error("emit_csv: cannot open " + meta_path);
    meta << result.metadata().dump(2) << '\n';
}

nlohmann::json to_json(const ExperimentConfig& c) {
    return nlohmann::json{
        {"name", c.name},
        {"scenario", skyharvest::to_json(c.scenario)},
        {"radio", skyharvest::to_json(c.radio)},
        {"env", skyharvest::to_json(c.env)},
        {"ga", ga_to_json(c.ga)},
        {"d_th_values", c.d_th_values},
        {"k_values", c.k_values},
        {"uav_values", c.uav_values},
        {"z_values", c.z_values},
        {"env_names", c.env_names},
        {"tspn_radius", c.tspn_radius},
        {"delta_threshold", c.delta_threshold},
        {"replications", c.replications},
        {"base_seed", c.base_seed},
        {"trace", c.trace},
    };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c = default_config(j.at("name").get<std::string>());
    if (j.contains("scenario")) c.scenario = scenario_from_json(j.at("scenario"));
    if (j.contains("radio")) c.radio = radio_from_json(j.at("radio"));
    if (j.contains("env")) c.env = environment_from_json(j.at("env"));
    if (j.contains("ga")) c.ga = ga_from_json(j.at("ga"));
    if (j.contains("d_th_values")) c.d_th_values = j.at("d_th_values").get<std::vector<double>>();
    if (j.contains("k_values")) c.k_values = j.at("k_values").get<std::vector<int>>();
    if (j.contains("uav_values")) c.uav_values = j.at("uav_values").get<std::vector<int>>();
    if (j.contains("z_values")) c.z_values = j.at("z_values").get<std::vector<double>>();
    if (j.contains("env_names")) c.env_names = j.at("env_names").get<std::vector<std::string>>();
    c.tspn_radius = j.value("tspn_radius", c.tspn_radius);
    c.delta_threshold = j.value("delta_threshold", c.delta_threshold);
    c.replications = j.value("replications", c.replications);
    c.base_seed = j.value("base_seed", c.base_seed);
    c.trace = j.value("trace", c.trace);
    c.validate();
    return c;
}

} // namespace harness
} // namespace skyharvest
