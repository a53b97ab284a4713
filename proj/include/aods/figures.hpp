#pragma once

#include <string>
#include <vector>

#include "aods/demand.hpp"
#include "aods/engine.hpp"
#include "aods/planner.hpp"
#include "aods/traffic.hpp"

namespace aods {

// Plot-ready CSV series matching the batch-result figures: coverage matrix
// (2), hourly request counts (5), rider/vehicle/energy parameters against
// fleet size (9/10/11/12), and the traffic-impact comparison (13).

void emit_coverage_figure(const std::string& path, const CoverageMatrix& m);
void emit_demand_figure(const std::string& path, const std::vector<TripRequest>& requests, double horizon_min);
void emit_rider_figure(const std::string& path, const std::vector<SweepCellStats>& cells);
void emit_vehicle_figure(const std::string& path, const std::vector<SweepCellStats>& cells);
void emit_energy_figure(const std::string& path, const std::vector<SweepCellStats>& cells);
void emit_charging_figure(const std::string& path, const std::vector<SweepCellStats>& cells);
void emit_impact_figure(const std::string& path, const ImpactReport& report);

// Rebuild sweep cell statistics from the metrics.json files in a sweep
// output directory (one subdirectory per scenario).
std::vector<SweepCellStats> aggregate_from_bundles(const std::string& sweep_dir);

}  // namespace aods
