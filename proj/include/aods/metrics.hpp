#pragma once

#include <optional>
#include <span>
#include <string>

#include "aods/config.hpp"
#include "aods/dispatch.hpp"
#include "aods/records.hpp"

namespace aods {

struct RiderMetrics {
    int total_requests = 0;
    int accepted_requests = 0;
    double accepted_ratio = 0.0;
    std::optional<double> median_wait_min;        // absent when nothing was accepted
    std::optional<double> median_trip_walk_ratio;
};

struct VehicleMetrics {
    double total_distance_mi = 0.0;
    double empty_ratio = 0.0;     // distance with zero occupancy / total distance
    double idle_ratio = 0.0;      // idle / (idle + travelling), charging excluded
    std::optional<double> capacity_utilization;
};

struct EnergyMetrics {
    double total_consumption_kwh = 0.0;
    double charger_utilization = 0.0;  // charging time / (points * horizon)
    std::optional<double> inactive_wait_ratio;  // waitlist wait / charging time
};

struct TrafficSummary {
    std::optional<double> speed_delta_mph;   // without minus with
    std::optional<double> delay_ratio_delta;
};

struct MetricsReport {
    RiderMetrics rider;
    VehicleMetrics vehicle;
    EnergyMetrics energy;
    TrafficSummary traffic;
};

RiderMetrics rider_metrics(const DispatchLog& log, const RoadNetwork& net);
VehicleMetrics vehicle_metrics(std::span<const ShuttleTrajectory> trajectories, int capacity = 8);
EnergyMetrics energy_metrics(std::span<const ChargingSession> sessions,
                             std::span<const ShuttleTrajectory> trajectories, const ScenarioConfig& cfg);

// GEH flow-calibration statistic for hourly volumes.
double geh_statistic(double modeled, double observed);

void save_metrics(const std::string& path, const MetricsReport& m, const ScenarioConfig& cfg);
MetricsReport load_metrics(const std::string& path);

}  // namespace aods
