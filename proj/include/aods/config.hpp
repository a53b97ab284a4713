#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aods {

struct ScenarioConfig {
    int fleet_size = 3;
    double max_wait_min = 8.0;
    double detour_threshold = 1.0;
    int charging_points = 1;
    std::string demand_label = "present";
    double transit_share = 0.01;
    uint64_t seed = 1;

    double horizon_min = 780.0;  // 06:00-19:00; clock minute 0 is 06:00
    double dwell_min = 0.5;
    double shuttle_speed_cap_mph = 15.0;
    int capacity = 8;

    int depot_override = -1;  // explicit depot/charger node; -1 keeps the plan's

    std::string network_file;
    std::string stop_plan_file;
    std::string od_file;        // generate demand from here ...
    std::string requests_file;  // ... or replay this file instead

    // Name of the result directory for this cell, e.g. f3_w8_d1.0_c1_present_s1.
    std::string cell_name() const;
    void validate() const;
};

ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const std::string& path, const ScenarioConfig& cfg);

struct DemandSpec {
    std::string label;
    std::string od_file;
    double transit_share = 0.01;
};

struct SweepGrid {
    std::vector<int> fleet_sizes;
    std::vector<double> max_waits_min;
    std::vector<double> detour_thresholds;
    std::vector<int> charging_points;
    std::vector<DemandSpec> demands;
    std::vector<uint64_t> seeds;
    ScenarioConfig base;  // shared fields: files, horizon, dwell, capacity
};

SweepGrid load_grid(const std::string& path);

// Cross product of all axes, in a fixed deterministic order.
std::vector<ScenarioConfig> expand_grid(const SweepGrid& grid);

}  // namespace aods
