#pragma once

#include <string>
#include <vector>

#include "aods/network.hpp"
#include "aods/planner.hpp"

namespace aods {

struct ODFlow {
    int from = 0;  // centroid id == network node id
    int to = 0;
    double count = 0.0;
};

struct ODInterval {
    double start_min = 0.0;
    double end_min = 0.0;
    std::vector<ODFlow> trips;
};

struct ODCentroid {
    int id = 0;
    bool internal = false;
};

struct ODMatrix {
    std::vector<ODCentroid> centroids;
    std::vector<ODInterval> intervals;

    bool is_internal(int id) const;
    // Trips leaving the study area (internal -> external) in one interval.
    double outgoing_internal(const ODInterval& iv) const;
    // Trips entering the study area (external -> internal).
    double incoming_internal(const ODInterval& iv) const;
};

ODMatrix load_od(const std::string& path);
void save_od(const std::string& path, const ODMatrix& od);

enum class TripKind { FM, LM };

struct TripRequest {
    int id = 0;
    double request_min = 0.0;
    TripKind kind = TripKind::FM;
    NodeId origin = 0;
    NodeId dest = 0;
    int party = 1;

    bool operator==(const TripRequest&) const = default;
};

// Integer per-interval counts for a fractional series: floor everything,
// then hand out the remaining units (grand total = nearest integer of the
// exact sum) by descending fractional part, earlier interval first on ties.
std::vector<long> largest_remainder_counts(const std::vector<double>& exact);

// Timestamped FM/LM requests from hourly OD totals. FM requests run
// shuttle stop -> transit stop, LM the reverse; origins and destinations are
// drawn uniformly from stop pairs at least one mile of walking apart.
std::vector<TripRequest> generate_requests(const ODMatrix& od, const StopPlan& plan, const RoadNetwork& net,
                                           double transit_share, uint64_t seed);

std::vector<TripRequest> load_requests(const std::string& path, const RoadNetwork& net, const StopPlan& plan);
void save_requests(const std::string& path, const std::vector<TripRequest>& requests);

}  // namespace aods
