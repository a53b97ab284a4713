#include "aods/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "aods/csv.hpp"

namespace aods {

namespace {

std::string fmt_fixed1(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << v;
    return os.str();
}

}  // namespace

std::string ScenarioConfig::cell_name() const {
    std::ostringstream os;
    os << "f" << fleet_size << "_w" << fmt_double(max_wait_min) << "_d" << fmt_fixed1(detour_threshold) << "_c"
       << charging_points << "_" << demand_label << "_s" << seed;
    return os.str();
}

void ScenarioConfig::validate() const {
    if (fleet_size < 1) throw ValidationError("fleet_size must be >= 1");
    if (max_wait_min <= 0.0) throw ValidationError("max_wait_min must be positive");
    if (detour_threshold < 0.0) throw ValidationError("detour_threshold must be >= 0");
    if (charging_points < 1) throw ValidationError("charging_points must be >= 1");
    if (transit_share < 0.0 || transit_share > 1.0) throw ValidationError("transit_share must lie in [0, 1]");
    if (horizon_min <= 0.0) throw ValidationError("horizon_min must be positive");
    if (dwell_min < 0.0) throw ValidationError("dwell_min must be >= 0");
    if (shuttle_speed_cap_mph <= 0.0) throw ValidationError("shuttle_speed_cap_mph must be positive");
    if (capacity < 1) throw ValidationError("capacity must be >= 1");
}

namespace {

void read_common(const nlohmann::json& j, ScenarioConfig& cfg) {
    if (j.contains("fleet_size")) cfg.fleet_size = j.at("fleet_size").get<int>();
    if (j.contains("max_wait_min")) cfg.max_wait_min = j.at("max_wait_min").get<double>();
    if (j.contains("detour_threshold")) cfg.detour_threshold = j.at("detour_threshold").get<double>();
    if (j.contains("charging_points")) cfg.charging_points = j.at("charging_points").get<int>();
    if (j.contains("demand")) cfg.demand_label = j.at("demand").get<std::string>();
    if (j.contains("transit_share")) cfg.transit_share = j.at("transit_share").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("depot_override")) cfg.depot_override = j.at("depot_override").get<int>();
    if (j.contains("horizon_min")) cfg.horizon_min = j.at("horizon_min").get<double>();
    if (j.contains("dwell_min")) cfg.dwell_min = j.at("dwell_min").get<double>();
    if (j.contains("shuttle_speed_cap_mph")) cfg.shuttle_speed_cap_mph = j.at("shuttle_speed_cap_mph").get<double>();
    if (j.contains("capacity")) cfg.capacity = j.at("capacity").get<int>();
    if (j.contains("network_file")) cfg.network_file = j.at("network_file").get<std::string>();
    if (j.contains("stop_plan_file")) cfg.stop_plan_file = j.at("stop_plan_file").get<std::string>();
    if (j.contains("od_file")) cfg.od_file = j.at("od_file").get<std::string>();
    if (j.contains("requests_file")) cfg.requests_file = j.at("requests_file").get<std::string>();
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ValidationError("parse error in " + path + ": " + ex.what());
    }
    ScenarioConfig cfg;
    try {
        read_common(j, cfg);
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError("schema error in " + path + ": " + ex.what());
    }
    cfg.validate();
    return cfg;
}

void save_scenario(const std::string& path, const ScenarioConfig& cfg) {
    nlohmann::json j{{"fleet_size", cfg.fleet_size},
                     {"max_wait_min", cfg.max_wait_min},
                     {"detour_threshold", cfg.detour_threshold},
                     {"charging_points", cfg.charging_points},
                     {"demand", cfg.demand_label},
                     {"transit_share", cfg.transit_share},
                     {"seed", cfg.seed},
                     {"depot_override", cfg.depot_override},
                     {"horizon_min", cfg.horizon_min},
                     {"dwell_min", cfg.dwell_min},
                     {"shuttle_speed_cap_mph", cfg.shuttle_speed_cap_mph},
                     {"capacity", cfg.capacity},
                     {"network_file", cfg.network_file},
                     {"stop_plan_file", cfg.stop_plan_file},
                     {"od_file", cfg.od_file},
                     {"requests_file", cfg.requests_file}};
    std::ofstream out = open_output(path);
    out << j.dump(1) << "\n";
}

SweepGrid load_grid(const std::string& path) {
    std::ifstream in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ValidationError("parse error in " + path + ": " + ex.what());
    }
    SweepGrid g;
    try {
        g.fleet_sizes = j.at("fleet_sizes").get<std::vector<int>>();
        g.max_waits_min = j.at("max_waits_min").get<std::vector<double>>();
        g.detour_thresholds = j.at("detour_thresholds").get<std::vector<double>>();
        g.charging_points = j.at("charging_points").get<std::vector<int>>();
        for (const auto& dj : j.at("demands"))
            g.demands.push_back({dj.at("label").get<std::string>(), dj.at("od_file").get<std::string>(),
                                 dj.at("transit_share").get<double>()});
        g.seeds = j.at("seeds").get<std::vector<uint64_t>>();
        if (j.contains("base")) read_common(j.at("base"), g.base);
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError("schema error in " + path + ": " + ex.what());
    }
    if (g.fleet_sizes.empty() || g.max_waits_min.empty() || g.detour_thresholds.empty() ||
        g.charging_points.empty() || g.demands.empty() || g.seeds.empty())
        throw ValidationError("grid axes must be non-empty: " + path);
    return g;
}

std::vector<ScenarioConfig> expand_grid(const SweepGrid& grid) {
    std::vector<ScenarioConfig> out;
    for (const DemandSpec& d : grid.demands)
        for (uint64_t seed : grid.seeds)
            for (int fleet : grid.fleet_sizes)
                for (double wait : grid.max_waits_min)
                    for (double detour : grid.detour_thresholds)
                        for (int points : grid.charging_points) {
                            ScenarioConfig cfg = grid.base;
                            cfg.fleet_size = fleet;
                            cfg.max_wait_min = wait;
                            cfg.detour_threshold = detour;
                            cfg.charging_points = points;
                            cfg.demand_label = d.label;
                            cfg.od_file = d.od_file;
                            cfg.transit_share = d.transit_share;
                            cfg.seed = seed;
                            cfg.validate();
                            out.push_back(std::move(cfg));
                        }
    return out;
}

}  // namespace aods
