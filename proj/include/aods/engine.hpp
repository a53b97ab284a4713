#pragma once

#include <string>
#include <vector>

#include "aods/config.hpp"
#include "aods/demand.hpp"
#include "aods/dispatch.hpp"
#include "aods/metrics.hpp"
#include "aods/planner.hpp"
#include "aods/records.hpp"

namespace aods {

struct SimulationResult {
    ScenarioConfig cfg;
    std::vector<TripRequest> requests;
    DispatchLog log;
    std::vector<ShuttleTrajectory> trajectories;
    std::vector<ChargingSession> charging;
    MetricsReport metrics;
};

// One scenario: a deterministic event loop over request arrivals, edge
// completions, stop services, charging, and battery timers. Shuttles start
// at the depot, idle, active, fully charged.
SimulationResult run_scenario(const ScenarioConfig& cfg);
SimulationResult run_scenario(const ScenarioConfig& cfg, const RoadNetwork& net, const StopPlan& plan,
                              const std::vector<TripRequest>& requests);

void write_result_bundle(const std::string& dir, const SimulationResult& result);

struct SweepRun {
    ScenarioConfig cfg;
    bool ok = false;
    std::string error;
    MetricsReport metrics;
};

struct SweepCellStats {
    int fleet_size = 0;
    double max_wait_min = 0.0;
    std::string demand_label;
    int runs = 0;
    // mean/std (sample) per aggregated metric; absent values are skipped and
    // n_* records how many runs contributed.
    struct Stat {
        double mean = 0.0;
        double stddev = 0.0;
        int n = 0;
    };
    Stat accepted_ratio, median_wait_min, trip_walk_ratio;
    Stat total_distance_mi, empty_ratio, idle_ratio, capacity_utilization;
    Stat energy_kwh, charger_utilization, inactive_wait_ratio;
};

struct SweepResult {
    std::vector<SweepRun> runs;             // parallel to the input grid
    std::vector<SweepCellStats> aggregate;  // per (fleet, max wait, demand)
};

// Runs scenarios independently (OpenMP across jobs; jobs <= 1 runs the serial
// reference path). Results do not depend on the parallelism degree. When
// out_dir is non-empty a result bundle is written per scenario plus
// aggregate.csv.
SweepResult run_sweep(const std::vector<ScenarioConfig>& grid, int jobs, const std::string& out_dir = "");

void save_aggregate_csv(const std::string& path, const std::vector<SweepCellStats>& cells);

// Recompute a cell aggregation from raw values; shared with tests.
SweepCellStats::Stat mean_stddev(const std::vector<double>& values);

}  // namespace aods
