#pragma once

#include <span>
#include <string>
#include <vector>

#include "aods/common.hpp"

namespace aods {

using NodeId = int;

struct Node {
    NodeId id = 0;
    double x_mi = 0.0;
    double y_mi = 0.0;
};

// Per-interval traversal times for one edge, in minutes. Entry k applies at
// interval start k * interval_minutes; lookups interpolate linearly between
// interval starts and hold the last value beyond them, which keeps arrival
// times non-decreasing under the load-time FIFO check.
struct TravelTimeProfile {
    std::vector<double> minutes;
};

struct Edge {
    int from = 0;  // dense node indices
    int to = 0;
    double length_mi = 0.0;
    double speed_mph = 0.0;
    bool shuttle_ok = false;
    bool overtake_ok = true;
    TravelTimeProfile profile;

    double free_flow_min() const { return 60.0 * length_mi / speed_mph; }
};

enum class TravelMode { Shuttle, Background };

struct Path {
    std::vector<int> edges;  // indices into RoadNetwork::edges, contiguous
    double depart_min = 0.0;
    double arrive_min = 0.0;
    double distance_mi = 0.0;

    double duration_min() const { return arrive_min - depart_min; }
    bool empty() const { return edges.empty(); }
};

class RoadNetwork {
  public:
    double interval_minutes = 15.0;
    double horizon_minutes = 780.0;
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    // adjacency, rebuilt by finalize()
    std::vector<std::vector<int>> out_edges;                       // node index -> edge indices
    std::vector<std::vector<std::pair<int, double>>> walk_adj;     // undirected (node index, miles)

    int node_index(NodeId id) const;           // throws ValidationError if unknown
    NodeId node_id(int index) const { return nodes[index].id; }
    const Node& node(NodeId id) const { return nodes[node_index(id)]; }

    // Validates invariants and builds adjacency. Called by load_network; call
    // again after building a network programmatically.
    void finalize();

    double shuttle_speed_cap_mph = 15.0;

  private:
    std::vector<std::pair<NodeId, int>> id_index_;  // sorted by id
};

RoadNetwork load_network(const std::string& path);
void save_network(const std::string& path, const RoadNetwork& net);

// Traversal time of one edge entered at entry_min. Shuttle mode caps speed at
// net.shuttle_speed_cap_mph and is only meaningful on shuttle_ok edges.
double edge_travel_minutes(const RoadNetwork& net, const Edge& e, double entry_min, TravelMode mode);

// Piecewise-linear profile lookup (background driving time at entry_min).
double profile_minutes_at(const RoadNetwork& net, const Edge& e, double entry_min);

// Least-arrival-time path under the time-dependent profiles. Ties between
// equal-arrival paths break toward the lexicographically smallest node-id
// sequence. Throws ValidationError when no path exists or depart is outside
// [0, horizon].
Path shortest_path(const RoadNetwork& net, NodeId origin, NodeId dest, double depart_min, TravelMode mode);

// Arrival time and traversed distance of a least-arrival path, without
// materializing the path. The arrival time equals shortest_path's; the
// distance is that of one deterministic optimal path (node-id tie-break on
// the heap) and may differ from the lexicographic path's when several
// optimal paths have different lengths.
struct ArrivalEstimate {
    double arrive_min = 0.0;
    double distance_mi = 0.0;
};
ArrivalEstimate estimate_arrival(const RoadNetwork& net, NodeId origin, NodeId dest, double depart_min,
                                 TravelMode mode);

// Undirected network walking distance in miles (pedestrians ignore one-way
// and mode restrictions). Throws when disconnected.
double walking_distance_mi(const RoadNetwork& net, NodeId origin, NodeId dest);
double walking_time_min(const RoadNetwork& net, NodeId origin, NodeId dest);

// Multi-source walking distances from a set of nodes to every node, in miles
// (infinity where unreachable). Indexed by dense node index.
std::vector<double> walking_distances_from(const RoadNetwork& net, std::span<const NodeId> sources);

struct EdgeTransit {
    int edge = 0;
    double entry_min = 0.0;
    double exit_min = 0.0;
};

// Entry/exit times along a concrete edge sequence departing at depart_min.
std::vector<EdgeTransit> traverse_path(const RoadNetwork& net, std::span<const int> edges, double depart_min,
                                       TravelMode mode);

}  // namespace aods
