#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aods/demand.hpp"
#include "aods/energy.hpp"
#include "aods/network.hpp"

namespace aods {

enum class ShuttleState {
    Idle,
    TravelingToOrigin,
    AtPickup,
    PickupDone,
    TravelingToDestination,
    AtDropoff,
    DropoffDone,
    Repositioning,
    Charging,
};

const char* to_string(ShuttleState s);

enum class ActionKind { Pickup, Dropoff };

struct Action {
    ActionKind kind = ActionKind::Pickup;
    int request_id = 0;
    NodeId stop = 0;
    double planned_min = 0.0;  // predicted completion time
};

struct Schedule {
    std::vector<Action> actions;
    size_t next_action = 0;  // index of the next action to start

    bool done() const { return next_action >= actions.size(); }
    std::vector<Action> remaining(size_t from) const {
        return {actions.begin() + static_cast<long>(from), actions.end()};
    }
};

// A rider the shuttle has committed to (booked or onboard).
struct RiderInfo {
    int request_id = 0;
    double request_min = 0.0;
    int party = 1;
    NodeId origin = 0;
    NodeId dest = 0;
    bool picked = false;
    double pickup_min = 0.0;  // actual pickup completion, once picked
    double direct_min = 0.0;  // direct shuttle travel time at pickup, once picked
};

struct Shuttle {
    int id = 0;
    ShuttleState state = ShuttleState::Idle;
    bool active = true;
    NodeId node = 0;  // current node; while traveling, the tail of the current edge
    int occupancy = 0;
    Battery battery;
    Schedule schedule;
    std::map<int, RiderInfo> riders;  // committed requests by id

    // Movement bookkeeping (owned by the engine).
    std::vector<int> leg_edges;
    size_t leg_pos = 0;
    double busy_until_min = 0.0;  // edge exit while traveling, dwell end while at a stop
    bool deactivated = false;     // below critical level, waiting for a charger

    bool traveling() const {
        return state == ShuttleState::TravelingToOrigin || state == ShuttleState::TravelingToDestination ||
               state == ShuttleState::Repositioning;
    }
    bool at_stop_service() const { return state == ShuttleState::AtPickup || state == ShuttleState::AtDropoff; }
};

// Earliest point a re-plan can take effect: idle shuttles from where they
// stand, traveling shuttles from the end of the edge under their wheels,
// dwelling shuttles once the doors close.
struct PlanAnchor {
    NodeId node = 0;
    double time_min = 0.0;
};
PlanAnchor plan_anchor(const RoadNetwork& net, const Shuttle& s, double now_min);

// Index into schedule.actions from which new actions may be inserted.
size_t insertable_from(const Shuttle& s);

struct DispatchConfig {
    double max_wait_min = 8.0;
    double detour_threshold = 1.0;
    double dwell_min = 0.5;
    int capacity = 8;
};

// All candidate schedules obtained by inserting the request's pickup at
// position i and dropoff at position j > i among the remaining actions,
// preserving their order. An empty remainder yields exactly one candidate.
std::vector<Schedule> enumerate_insertions(const Schedule& schedule, const TripRequest& request,
                                           size_t remaining_start);

// Exact arrival times repeat heavily across candidates sharing a prefix, so
// offer evaluation memoizes (from, to, depart) -> (arrival, distance).
class LegCache {
  public:
    explicit LegCache(const RoadNetwork& net) : net_(&net) {}
    ArrivalEstimate query(NodeId from, NodeId to, double depart_min);
    void clear() { map_.clear(); }

  private:
    struct Key {
        NodeId from, to;
        uint64_t depart_bits;
        bool operator<(const Key& o) const {
            if (from != o.from) return from < o.from;
            if (to != o.to) return to < o.to;
            return depart_bits < o.depart_bits;
        }
    };
    const RoadNetwork* net_;
    std::map<Key, ArrivalEstimate> map_;
};

struct Feasibility {
    bool feasible = false;
    std::string blocked_by;        // which check failed, for diagnostics
    double wait_min = 0.0;         // new rider waiting time
    double invehicle_min = 0.0;    // new rider in-vehicle time
    double total_travel_min = 0.0; // completion of last action minus now
    double distance_mi = 0.0;      // driving distance over the candidate
    std::vector<double> planned_completion;  // per candidate remaining action
};

// The three feasibility checks: (i) the new rider's waiting time and detour
// meet the thresholds, (ii) every onboard rider's detour stays within the
// threshold, (iii) every booked-not-picked rider's waiting time and detour
// stay within the thresholds. Occupancy is capped along the whole candidate
// and the projected battery level must stay above the critical threshold.
Feasibility validate_candidate(const RoadNetwork& net, const DispatchConfig& cfg, const Shuttle& shuttle,
                               const TripRequest& request, const Schedule& candidate, double now_min,
                               LegCache& cache);

struct Offer {
    int shuttle_id = 0;
    Schedule schedule;  // full schedule with the request inserted
    double wait_min = 0.0;
    double invehicle_min = 0.0;
    double total_travel_min = 0.0;
};

enum class RejectReason { NoActiveShuttle, NoSeats, NoFeasibleSchedule };

const char* to_string(RejectReason r);

struct RideRecord {
    int request_id = 0;
    bool accepted = false;
    RejectReason reason = RejectReason::NoFeasibleSchedule;
    int shuttle_id = -1;
    TripKind kind = TripKind::FM;
    NodeId origin = 0;
    NodeId dest = 0;
    double request_min = 0.0;
    // realized values, filled by the engine as events complete
    double pickup_min = -1.0;
    double dropoff_min = -1.0;
    double wait_min = -1.0;
    double invehicle_min = -1.0;
    double direct_min = -1.0;
};

struct DispatchLog {
    std::vector<RideRecord> records;

    RideRecord& record_for(int request_id);
    size_t accepted_count() const;
};

struct DispatchOutcome {
    std::optional<Offer> offer;
    std::optional<RejectReason> rejection;
};

// Offer module: collect feasible candidate schedules from every active
// shuttle with enough free seats and pick the one with the least total
// travel time (ties: smaller waiting time, then lower shuttle id). On
// success the winning shuttle's schedule is replaced and the rider is
// registered; the engine restarts its movement plan.
DispatchOutcome handle_request(const RoadNetwork& net, const DispatchConfig& cfg, std::vector<Shuttle>& fleet,
                               const TripRequest& request, double now_min, LegCache& cache);

void save_dispatch_log(const std::string& path, const DispatchLog& log);

}  // namespace aods
