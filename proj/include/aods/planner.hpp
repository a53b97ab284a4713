#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aods/network.hpp"

namespace aods {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Parcel {
    int id = 0;
    double x_mi = 0.0;
    double y_mi = 0.0;
};

struct StopPlan {
    std::vector<NodeId> shuttle_stops;
    std::vector<NodeId> transit_stops;
    NodeId depot = 0;
    double max_walk_min = 6.0;
};

struct KMeansResult {
    std::vector<Point> centroids;
    std::vector<int> assignment;  // per input point, centroid index
    double within_ss = 0.0;       // total within-cluster squared distance
    int iterations = 0;
};

// Lloyd's algorithm with k-means++ style seeding. Deterministic given seed;
// runs until assignments stop changing or max_iters.
KMeansResult kmeans_cluster(const std::vector<Point>& points, int k, uint64_t seed, int max_iters = 100);

// Nearest endpoint of a shuttle-permitted edge; ties break to the lower id.
NodeId snap_to_node(const RoadNetwork& net, Point p);

// Nearest node of the whole network (parcels are off-network and may snap to
// local streets); ties break to the lower id.
NodeId snap_to_any_node(const RoadNetwork& net, Point p);

struct CoverageMatrix {
    std::vector<int> stop_counts;        // k axis
    std::vector<double> walk_minutes;    // w axis
    std::vector<double> ratios;          // row-major: [k_index * walks + w_index]

    double at(size_t k_index, size_t w_index) const { return ratios[k_index * walk_minutes.size() + w_index]; }
};

// Fraction of parcels within each walking budget of their nearest stop, for
// each candidate stop count. Cells for different k are independent; the
// default entry point fans the k axis out over OpenMP threads, the _serial
// variant is the reference implementation.
CoverageMatrix coverage_matrix(const RoadNetwork& net, const std::vector<Parcel>& parcels,
                               const std::vector<int>& stop_counts, const std::vector<double>& walk_minutes,
                               uint64_t seed);
CoverageMatrix coverage_matrix_serial(const RoadNetwork& net, const std::vector<Parcel>& parcels,
                                      const std::vector<int>& stop_counts, const std::vector<double>& walk_minutes,
                                      uint64_t seed);

// Stop nodes for one k: cluster parcels, snap centroids, deduplicate.
std::vector<NodeId> place_stops(const RoadNetwork& net, const std::vector<Parcel>& parcels, int k, uint64_t seed);

// Mean coordinate of all stops (k-means with k=1), snapped to the shuttle
// subgraph.
NodeId place_depot(const RoadNetwork& net, const std::vector<NodeId>& stop_nodes);

std::vector<Parcel> load_parcels(const std::string& path);
void save_parcels(const std::string& path, const std::vector<Parcel>& parcels);

StopPlan load_stop_plan(const std::string& path);
void save_stop_plan(const std::string& path, const StopPlan& plan);

// Checks the plan against the network: stops on the shuttle subgraph,
// non-empty and distinct stop lists.
void validate_stop_plan(const RoadNetwork& net, const StopPlan& plan);

}  // namespace aods
