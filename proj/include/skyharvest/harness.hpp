#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "skyharvest/routing.hpp"
#include "skyharvest/scenario.hpp"

#include <nlohmann/json_fwd.hpp>

namespace skyharvest {
namespace harness {

/// One experiment run request. Defaults mirror the reference simulation
/// setup: 10x10 km field, 500 sensors, urban environment, 2 GHz carrier.
struct ExperimentConfig {
    std::string name; // clustering_sweep | solver_compare | tspn_gain |
                      // altitude_gain | multi_uav | fairness
    Scenario scenario;
    RadioConfig radio;
    EnvironmentProfile env;
    GAConfig ga;

    std::vector<double> d_th_values;   // clustering_sweep
    std::vector<int> k_values;         // solver_compare / multi_uav / fairness
    std::vector<int> uav_values;       // multi_uav / fairness
    std::vector<double> z_values;      // altitude_gain
    std::vector<std::string> env_names; // altitude_gain
    double tspn_radius = 1000.0;       // meters
    double delta_threshold = 10000.0;  // meters; fairness cap
    int replications = 1;
    std::uint64_t base_seed = 1;
    bool trace = false; // clustering_sweep: dump per-iteration centroids

    void validate() const;
};

ExperimentConfig default_config(const std::string& name);

using CsvCell = std::variant<std::int64_t, double, std::string>;

struct ExperimentResult {
    std::vector<std::string> columns;
    std::vector<std::vector<CsvCell>> rows;
    nlohmann::json metadata() const; // config echo + version + wall clock
    std::string config_echo;         // serialized config
    double wall_seconds = 0.0;
};

/// Dispatch on config.name. Deterministic given base_seed; infeasible
/// sub-runs become rows with a status flag rather than aborting the sweep.
ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentResult experiment_clustering_sweep(const ExperimentConfig& config);
ExperimentResult experiment_solver_compare(const ExperimentConfig& config);
ExperimentResult experiment_tspn_gain(const ExperimentConfig& config);
ExperimentResult experiment_altitude_gain(const ExperimentConfig& config);
ExperimentResult experiment_multi_uav(const ExperimentConfig& config);
ExperimentResult experiment_fairness(const ExperimentConfig& config);

/// RFC-4180 CSV with a header row; floats printed to 6 significant digits.
/// Metadata goes to `path` with extension swapped to .meta.json.
void emit_csv(const ExperimentResult& result, const std::string& path);
std::string to_csv_string(const ExperimentResult& result);

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Number of worker threads for replication loops; SKYHARVEST_THREADS caps it.
int worker_threads();

} // namespace harness
} // namespace skyharvest
