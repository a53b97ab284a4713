#pragma once

#include <string>
#include <vector>

#include "aods/dispatch.hpp"
#include "aods/network.hpp"

namespace aods {

// Exclusive time buckets; per shuttle they tile the whole simulated span.
enum class TimeBucket { Idle, Travel, Dwell, Reposition, Waitlist, Charging };

const char* to_string(TimeBucket b);

struct Segment {
    double t0 = 0.0;
    double t1 = 0.0;
    TimeBucket bucket = TimeBucket::Idle;
    double distance_mi = 0.0;  // nonzero only for Travel
    int occupancy = 0;
};

struct StateChange {
    double t_min = 0.0;
    ShuttleState state = ShuttleState::Idle;
    NodeId node = 0;
    int occupancy = 0;
    double battery_kwh = 0.0;
};

struct EnergyTotals {
    double initial_kwh = 0.0;
    double moving_kwh = 0.0;
    double idle_kwh = 0.0;
    double charged_kwh = 0.0;
    double final_kwh = 0.0;
};

struct ShuttleTrajectory {
    int shuttle_id = 0;
    std::vector<Segment> segments;
    std::vector<StateChange> transitions;
    std::vector<EdgeTransit> edge_transits;  // every edge driven, with times
    EnergyTotals energy;
    double end_min = 0.0;  // when this shuttle's accounting closed
};

struct ChargingSession {
    int shuttle_id = 0;
    double waitlist_join_min = 0.0;
    double dispatch_min = 0.0;  // point assigned; repositioning starts (not serialized)
    double charge_start_min = 0.0;
    double charge_end_min = 0.0;
    double level_before_kwh = 0.0;
    double reposition_mi = 0.0;
};

void save_trajectories(const std::string& path, const std::vector<ShuttleTrajectory>& trajectories);
void save_charging_log(const std::string& path, const std::vector<ChargingSession>& sessions);

}  // namespace aods
