#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "skyharvest/channel.hpp"
#include "skyharvest/clustering.hpp"
#include "skyharvest/harness.hpp"
#include "skyharvest/routing.hpp"
#include "skyharvest/rng.hpp"
#include "skyharvest/scenario.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

using namespace skyharvest;

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

int cmd_scenario(const std::string& out_path, std::uint64_t seed, int n_sensors,
                 double width, double height, int max_chs, int max_uavs,
                 double altitude, double speed) {
    const Point3 dock{width / 2.0, height / 2.0, 0.0};
    const Scenario s = generate_scenario(seed, n_sensors, width, height, dock,
                                         max_chs, max_uavs, altitude, speed);
    write_text(out_path, to_json(s).dump(2) + "\n");
    return 0;
}

int cmd_channel(const std::string& env_name, const RadioConfig& radio, double z_lo,
                double z_hi, double z_step, const std::string& out_path) {
    const auto env = environment_preset(env_name);
    std::string csv = "z_m,theta_star_rad,radius_m\r\n";
    char buf[128];
    for (double z = z_lo; z <= z_hi + 1e-9; z += z_step) {
        const auto r = channel::coverage_radius(env, radio, z);
        if (r) {
            const double theta = *r > 0.0 ? std::atan2(z, *r) : std::asin(1.0);
            std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g\r\n", z, theta, *r);
        } else {
            std::snprintf(buf, sizeof(buf), "%.6g,,\r\n", z);
        }
        csv += buf;
    }
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_text(out_path, csv);
    }
    return 0;
}

int cmd_cluster(const std::string& scenario_path, double d_th, const std::string& out_path,
                const std::string& sweep_path, int sweep_runs, bool trace) {
    const Scenario s = scenario_from_json(load_json(scenario_path));
    if (trace) {
        // Per-iteration centroid dump for the final K' at the given d_th.
        const auto plan = plan_clusterheads(s, d_th);
        const int k = plan.ok ? plan.clustering.k_prime : s.max_chs;
        std::string csv = "iter,ch,x_m,y_m\r\n";
        char buf[128];
        lloyd_kmeans(s.sensors, k, derive_seed(s.seed, static_cast<std::uint64_t>(k)), kPlanIterations,
                     [&](int iter, const std::vector<Point3>& centroids) {
                         for (std::size_t c = 0; c < centroids.size(); ++c) {
                             std::snprintf(buf, sizeof(buf), "%d,%zu,%.6g,%.6g\r\n", iter, c,
                                           centroids[c].x, centroids[c].y);
                             csv += buf;
                         }
                     });
        write_text(out_path + ".trace.csv", csv);
    }
    if (!sweep_path.empty()) {
        std::vector<double> values;
        for (double v = 100.0; v <= 2900.0; v += 200.0) values.push_back(v);
        const auto records = clustering_sweep(s, values, sweep_runs);
        std::string csv = "d_th_m,run,k_prime\r\n";
        char buf[96];
        for (const auto& r : records) {
            std::snprintf(buf, sizeof(buf), "%.6g,%d,%d\r\n", r.d_th, r.run, r.k_prime);
            csv += buf;
        }
        write_text(sweep_path, csv);
    }
    const auto plan = plan_clusterheads(s, d_th);
    if (!plan.ok) {
        std::cerr << "cluster: CH budget exhausted at K=" << plan.failure.k
                  << " with d_max=" << plan.failure.achieved_d_max << " m > " << d_th << " m\n";
        return 2;
    }
    write_text(out_path, to_json(plan.clustering).dump(2) + "\n");
    return 0;
}

int cmd_route(const std::string& clustering_path, const std::string& scenario_path,
              int uavs, const std::string& solver, double altitude, double tspn_radius,
              std::optional<double> delta_th, std::uint64_t seed,
              const std::string& out_path, const std::string& legs_path) {
    const Clustering clustering = clustering_from_json(load_json(clustering_path));
    const Scenario s = scenario_from_json(load_json(scenario_path));
    const double z = altitude > 0.0 ? altitude : s.uav_altitude;

    RoutePlan plan;
    if (solver == "exact") {
        plan = brute_force_mtsp(clustering.ch_positions, s.dock, uavs, z);
    } else if (solver == "nn") {
        plan = nearest_neighbor_route(clustering.ch_positions, s.dock, uavs, z);
    } else if (solver == "ga") {
        GAConfig cfg;
        if (delta_th) {
            auto fair = ga_mtsp_fair(clustering.ch_positions, s.dock, uavs, z, cfg, *delta_th, seed);
            if (!fair) {
                std::cerr << "route: no plan satisfying the fairness threshold was found\n";
                return 2;
            }
            plan = *fair;
        } else {
            plan = ga_mtsp(clustering.ch_positions, s.dock, uavs, z, cfg, seed);
        }
    } else {
        std::cerr << "route: unknown solver '" << solver << "'\n";
        return 1;
    }
    if (tspn_radius > 0.0) {
        plan = tspn_adjust(plan, clustering.ch_positions, tspn_radius);
    }
    plan.mission_time = mission_time(plan, s.uav_speed);
    write_text(out_path, to_json(plan).dump(2) + "\n");

    if (!legs_path.empty()) {
        std::string csv = "uav,leg,x0,y0,z0,x1,y1,z1,length_m\r\n";
        char buf[256];
        for (std::size_t u = 0; u < plan.waypoints.size(); ++u) {
            const auto& wps = plan.waypoints[u];
            for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\r\n",
                              u, i, wps[i].x, wps[i].y, wps[i].z, wps[i + 1].x, wps[i + 1].y,
                              wps[i + 1].z, distance(wps[i], wps[i + 1]));
                csv += buf;
            }
        }
        write_text(legs_path, csv);
    }
    return 0;
}

int cmd_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out_dir, std::optional<std::uint64_t> seed,
                   bool trace) {
    harness::ExperimentConfig config =
        config_path.empty() ? harness::default_config(name)
                            : harness::config_from_json(load_json(config_path));
    if (!name.empty()) config.name = name;
    if (seed) config.base_seed = *seed;
    config.trace = trace;
    config.validate();

    std::filesystem::create_directories(out_dir);
    const auto result = harness::run_experiment(config);
    harness::emit_csv(result, out_dir + "/" + config.name + ".csv");

    bool any_ok = false;
    for (const auto& row : result.rows) {
        if (!row.empty() && std::holds_alternative<std::string>(row.back()) &&
            std::get<std::string>(row.back()) == "ok") {
            any_ok = true;
            break;
        }
    }
    return any_ok || result.rows.empty() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV-assisted sensor-network planning toolkit"};
    app.require_subcommand(1);

    // scenario
    auto* sc = app.add_subcommand("scenario", "Generate a random scenario JSON");
    std::string sc_out = "scenario.json";
    std::uint64_t sc_seed = 1;
    int sc_n = 500, sc_k = 200, sc_u = 3;
    double sc_w = 10000.0, sc_h = 10000.0, sc_z = 200.0, sc_v = 10.0;
    sc->add_option("--out", sc_out, "Output path");
    sc->add_option("--seed", sc_seed, "RNG seed");
    sc->add_option("--sensors", sc_n, "Number of sensors");
    sc->add_option("--width", sc_w, "Area width, m");
    sc->add_option("--height", sc_h, "Area height, m");
    sc->add_option("--max-chs", sc_k, "CH budget K");
    sc->add_option("--max-uavs", sc_u, "UAV budget U");
    sc->add_option("--altitude", sc_z, "UAV altitude, m");
    sc->add_option("--speed", sc_v, "UAV speed, m/s");

    // channel
    auto* ch = app.add_subcommand("channel", "Print coverage-radius table as CSV");
    std::string ch_env = "urban", ch_out;
    double ch_zlo = 100.0, ch_zhi = 5000.0, ch_zstep = 100.0;
    double ch_pc = 20.0, ch_pth = -100.0, ch_fc = 2.0e9;
    ch->add_option("--env", ch_env, "Environment preset name");
    ch->add_option("--z-min", ch_zlo, "Lowest altitude, m");
    ch->add_option("--z-max", ch_zhi, "Highest altitude, m");
    ch->add_option("--z-step", ch_zstep, "Altitude step, m");
    ch->add_option("--pc", ch_pc, "CH transmit power, dBm");
    ch->add_option("--pth", ch_pth, "UAV receiver sensitivity, dBm");
    ch->add_option("--fc", ch_fc, "Carrier frequency, Hz");
    ch->add_option("--out", ch_out, "Output path (stdout when omitted)");

    // cluster
    auto* cl = app.add_subcommand("cluster", "Place cluster heads for a scenario");
    std::string cl_scenario, cl_out = "clustering.json", cl_sweep;
    double cl_dth = 1700.0;
    int cl_runs = 100;
    bool cl_trace = false;
    cl->add_option("--scenario", cl_scenario, "Scenario JSON path")->required();
    cl->add_option("--d-th", cl_dth, "SN->CH range threshold, m");
    cl->add_option("--out", cl_out, "Clustering JSON output path");
    cl->add_option("--sweep", cl_sweep, "Also write a d_th sweep CSV to this path");
    cl->add_option("--runs", cl_runs, "Sweep runs per d_th value");
    cl->add_flag("--trace", cl_trace, "Dump per-iteration centroids");

    // route
    auto* rt = app.add_subcommand("route", "Plan UAV tours over the cluster heads");
    std::string rt_clustering, rt_scenario, rt_solver = "ga", rt_out = "plan.json", rt_legs;
    int rt_uavs = 1;
    double rt_altitude = 0.0, rt_radius = 0.0;
    double rt_delta = -1.0;
    std::uint64_t rt_seed = 1;
    rt->add_option("--clustering", rt_clustering, "Clustering JSON path")->required();
    rt->add_option("--scenario", rt_scenario, "Scenario JSON path (dock, altitude, speed)")->required();
    rt->add_option("--uavs", rt_uavs, "Number of UAVs");
    rt->add_option("--solver", rt_solver, "exact | nn | ga");
    rt->add_option("--altitude", rt_altitude, "Flight altitude, m (scenario default when 0)");
    rt->add_option("--tspn-radius", rt_radius, "Coverage radius for TSPN adjustment, m");
    rt->add_option("--delta-th", rt_delta, "Fairness threshold on length std, m (GA only)");
    rt->add_option("--seed", rt_seed, "GA seed");
    rt->add_option("--out", rt_out, "RoutePlan JSON output path");
    rt->add_option("--legs", rt_legs, "Per-leg CSV output path");

    // experiment
    auto* ex = app.add_subcommand("experiment", "Run a named experiment sweep");
    std::string ex_name, ex_config, ex_out = "results";
    std::uint64_t ex_seed = 0;
    bool ex_seed_set = false, ex_trace = false;
    ex->add_option("name", ex_name,
                   "clustering_sweep | solver_compare | tspn_gain | altitude_gain | multi_uav | fairness")
        ->required();
    ex->add_option("--config", ex_config, "Experiment config JSON");
    ex->add_option("--out", ex_out, "Output directory");
    ex->add_option("--seed", ex_seed, "Base seed override")->each([&](const std::string&) {
        ex_seed_set = true;
    });
    ex->add_flag("--trace", ex_trace, "Enable per-iteration traces where supported");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc->parsed()) {
            return cmd_scenario(sc_out, sc_seed, sc_n, sc_w, sc_h, sc_k, sc_u, sc_z, sc_v);
        }
        if (ch->parsed()) {
            RadioConfig radio{1e-4, 289.0, 2.0, ch_pc, ch_pth, ch_fc};
            return cmd_channel(ch_env, radio, ch_zlo, ch_zhi, ch_zstep, ch_out);
        }
        if (cl->parsed()) {
            return cmd_cluster(cl_scenario, cl_dth, cl_out, cl_sweep, cl_runs, cl_trace);
        }
        if (rt->parsed()) {
            std::optional<double> delta;
            if (rt_delta >= 0.0) delta = rt_delta;
            return cmd_route(rt_clustering, rt_scenario, rt_uavs, rt_solver, rt_altitude,
                             rt_radius, delta, rt_seed, rt_out, rt_legs);
        }
        if (ex->parsed()) {
            std::optional<std::uint64_t> seed;
            if (ex_seed_set) seed = ex_seed;
            return cmd_experiment(ex_name, ex_config, ex_out, seed, ex_trace);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
