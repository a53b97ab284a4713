#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "aods/demand.hpp"
#include "aods/network.hpp"
#include "aods/records.hpp"

namespace aods {

// One shuttle occupying one edge during [entry_min, exit_min].
struct EdgeWindow {
    double entry_min = 0.0;
    double exit_min = 0.0;
};

// Shuttle edge occupancy windows, indexed by edge, sorted by entry time.
struct ShuttleWindows {
    std::map<int, std::vector<EdgeWindow>> by_edge;
};

ShuttleWindows build_shuttle_windows(std::span<const ShuttleTrajectory> trajectories);

struct BackgroundVehicle {
    int id = 0;
    double depart_min = 0.0;
    NodeId origin = 0;
    NodeId dest = 0;
    std::vector<EdgeTransit> transits;  // as driven, moving-bottleneck adjusted
    double free_flow_min = 0.0;
    double travel_min = 0.0;
};

// Exit time of a car entering a no-overtake edge behind slower shuttles. The
// car drives at its desired speed until it catches a shuttle, then follows
// it to the end of the edge (overtake-permitted edges are unaffected).
double moving_bottleneck_adjust(const Edge& e, double car_entry_min, double desired_minutes,
                                std::span<const EdgeWindow> windows);

// Generate background cars from the OD matrix (largest-remainder integer
// counts per interval, uniform departure times), route each once at its
// departure, and traverse mesoscopically with the moving-bottleneck rule
// where shuttle windows are given. Vehicle generation and routing are
// deterministic given the seed; the traversal pass is pure per vehicle and
// fans out over OpenMP threads unless threads <= 1.
std::vector<BackgroundVehicle> simulate_background(const RoadNetwork& net, const ODMatrix& od,
                                                   const ShuttleWindows* windows, uint64_t seed, int threads = 0);

// Space-mean speed and delay/travel-time ratio over shuttle-operating edges,
// per 15-minute interval (traversals are assigned to the interval containing
// their entry).
struct LinkIntervalStats {
    double interval_minutes = 15.0;
    int intervals = 0;
    std::vector<double> distance_mi;   // per interval, over shuttle-ok edges
    std::vector<double> time_min;
    std::vector<double> delay_min;
};

LinkIntervalStats link_stats(const RoadNetwork& net, std::span<const BackgroundVehicle> vehicles);

struct ImpactReport {
    double interval_minutes = 15.0;
    std::vector<double> interval_start_min;
    std::vector<double> speed_with_mph;
    std::vector<double> speed_without_mph;
    std::vector<double> delay_ratio_with;
    std::vector<double> delay_ratio_without;
    double overall_speed_delta_mph = 0.0;  // without minus with
    double overall_delay_ratio_delta = 0.0;
};

ImpactReport impact_report(const LinkIntervalStats& with_shuttles, const LinkIntervalStats& without_shuttles);

void save_impact_csv(const std::string& path, const ImpactReport& report);

}  // namespace aods
