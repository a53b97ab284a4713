#include "aods/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "json.hpp"

#include "aods/csv.hpp"

namespace aods {

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

RiderMetrics rider_metrics(const DispatchLog& log, const RoadNetwork& net) {
    RiderMetrics m;
    m.total_requests = static_cast<int>(log.records.size());
    if (m.total_requests == 0) throw ValidationError("rider_metrics: no requests (ratio undefined)");

    std::vector<double> waits, trip_walk;
    std::map<std::pair<NodeId, NodeId>, double> walk_cache;
    for (const RideRecord& r : log.records) {
        if (!r.accepted) continue;
        ++m.accepted_requests;
        waits.push_back(r.wait_min);
        auto key = std::make_pair(r.origin, r.dest);
        auto it = walk_cache.find(key);
        if (it == walk_cache.end()) it = walk_cache.emplace(key, walking_time_min(net, r.origin, r.dest)).first;
        double total_trip = r.wait_min + r.invehicle_min;
        trip_walk.push_back(total_trip / it->second);
    }
    m.accepted_ratio = static_cast<double>(m.accepted_requests) / static_cast<double>(m.total_requests);
    if (!waits.empty()) {
        m.median_wait_min = median_of(waits);
        m.median_trip_walk_ratio = median_of(trip_walk);
    }
    return m;
}

VehicleMetrics vehicle_metrics(std::span<const ShuttleTrajectory> trajectories, int capacity) {
    VehicleMetrics m;
    double empty_mi = 0.0, idle_min = 0.0, travelling_min = 0.0, occupancy_min = 0.0;
    for (const ShuttleTrajectory& traj : trajectories) {
        for (const Segment& seg : traj.segments) {
            double dur = seg.t1 - seg.t0;
            switch (seg.bucket) {
                case TimeBucket::Idle:
                    idle_min += dur;
                    break;
                case TimeBucket::Travel:
                case TimeBucket::Dwell:
                    // Dwell counts as travelling: the vehicle is in service
                    // with the doors open.
                    travelling_min += dur;
                    occupancy_min += seg.occupancy * dur;
                    m.total_distance_mi += seg.distance_mi;
                    if (seg.occupancy == 0) empty_mi += seg.distance_mi;
                    break;
                case TimeBucket::Reposition:
                    // Charger/yard access: the miles count as (empty) travel
                    // distance, the time belongs to the separately reported
                    // charging overhead, like waitlist and plugged-in time.
                    m.total_distance_mi += seg.distance_mi;
                    if (seg.occupancy == 0) empty_mi += seg.distance_mi;
                    break;
                case TimeBucket::Waitlist:
                case TimeBucket::Charging:
                    break;  // tracked by the energy metrics
            }
        }
    }
    m.empty_ratio = m.total_distance_mi > 0.0 ? empty_mi / m.total_distance_mi : 0.0;
    double active_min = idle_min + travelling_min;
    m.idle_ratio = active_min > 0.0 ? idle_min / active_min : 0.0;
    if (travelling_min > 0.0) m.capacity_utilization = occupancy_min / (capacity * travelling_min);
    return m;
}

EnergyMetrics energy_metrics(std::span<const ChargingSession> sessions,
                             std::span<const ShuttleTrajectory> trajectories, const ScenarioConfig& cfg) {
    EnergyMetrics m;
    for (const ShuttleTrajectory& traj : trajectories)
        m.total_consumption_kwh += traj.energy.moving_kwh + traj.energy.idle_kwh;

    double charging_min = 0.0, waiting_min = 0.0;
    for (const ChargingSession& s : sessions) {
        charging_min += s.charge_end_min - s.charge_start_min;
        waiting_min += s.charge_start_min - s.waitlist_join_min;
    }
    m.charger_utilization = charging_min / (static_cast<double>(cfg.charging_points) * cfg.horizon_min);
    if (charging_min > 0.0) m.inactive_wait_ratio = waiting_min / charging_min;
    return m;
}

double geh_statistic(double modeled, double observed) {
    if (modeled + observed <= 0.0) throw ValidationError("geh_statistic: M + C must be positive");
    double d = modeled - observed;
    return std::sqrt(2.0 * d * d / (modeled + observed));
}

namespace {

void put_opt(nlohmann::json& j, const char* key, const std::optional<double>& v) {
    if (v.has_value()) j[key] = *v;
}

}  // namespace

void save_metrics(const std::string& path, const MetricsReport& m, const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["rider"] = {{"total_requests", m.rider.total_requests},
                  {"accepted_requests", m.rider.accepted_requests},
                  {"accepted_ratio", m.rider.accepted_ratio}};
    put_opt(j["rider"], "median_wait_min", m.rider.median_wait_min);
    put_opt(j["rider"], "median_trip_walk_ratio", m.rider.median_trip_walk_ratio);

    j["vehicle"] = {{"total_distance_mi", m.vehicle.total_distance_mi},
                    {"empty_ratio", m.vehicle.empty_ratio},
                    {"idle_ratio", m.vehicle.idle_ratio}};
    put_opt(j["vehicle"], "capacity_utilization", m.vehicle.capacity_utilization);

    j["energy"] = {{"total_consumption_kwh", m.energy.total_consumption_kwh},
                   {"charger_utilization", m.energy.charger_utilization}};
    put_opt(j["energy"], "inactive_wait_ratio", m.energy.inactive_wait_ratio);

    j["traffic"] = nlohmann::json::object();
    put_opt(j["traffic"], "speed_delta_mph", m.traffic.speed_delta_mph);
    put_opt(j["traffic"], "delay_ratio_delta", m.traffic.delay_ratio_delta);

    j["config"] = {{"fleet_size", cfg.fleet_size},       {"max_wait_min", cfg.max_wait_min},
                   {"detour_threshold", cfg.detour_threshold}, {"charging_points", cfg.charging_points},
                   {"demand", cfg.demand_label},         {"transit_share", cfg.transit_share},
                   {"seed", cfg.seed},                   {"horizon_min", cfg.horizon_min}};

    std::ofstream out = open_output(path);
    out << j.dump(1) << "\n";
}

MetricsReport load_metrics(const std::string& path) {
    std::ifstream in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ValidationError("parse error in " + path + ": " + ex.what());
    }
    MetricsReport m;
    try {
        const auto& r = j.at("rider");
        m.rider.total_requests = r.at("total_requests").get<int>();
        m.rider.accepted_requests = r.at("accepted_requests").get<int>();
        m.rider.accepted_ratio = r.at("accepted_ratio").get<double>();
        if (r.contains("median_wait_min")) m.rider.median_wait_min = r.at("median_wait_min").get<double>();
        if (r.contains("median_trip_walk_ratio"))
            m.rider.median_trip_walk_ratio = r.at("median_trip_walk_ratio").get<double>();

        const auto& v = j.at("vehicle");
        m.vehicle.total_distance_mi = v.at("total_distance_mi").get<double>();
        m.vehicle.empty_ratio = v.at("empty_ratio").get<double>();
        m.vehicle.idle_ratio = v.at("idle_ratio").get<double>();
        if (v.contains("capacity_utilization"))
            m.vehicle.capacity_utilization = v.at("capacity_utilization").get<double>();

        const auto& e = j.at("energy");
        m.energy.total_consumption_kwh = e.at("total_consumption_kwh").get<double>();
        m.energy.charger_utilization = e.at("charger_utilization").get<double>();
        if (e.contains("inactive_wait_ratio")) m.energy.inactive_wait_ratio = e.at("inactive_wait_ratio").get<double>();

        const auto& t = j.at("traffic");
        if (t.contains("speed_delta_mph")) m.traffic.speed_delta_mph = t.at("speed_delta_mph").get<double>();
        if (t.contains("delay_ratio_delta")) m.traffic.delay_ratio_delta = t.at("delay_ratio_delta").get<double>();
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError("schema error in " + path + ": " + ex.what());
    }
    return m;
}

}  // namespace aods
