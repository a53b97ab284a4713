#include "aods/records.hpp"

#include "aods/csv.hpp"

namespace aods {

const char* to_string(TimeBucket b) {
    switch (b) {
        case TimeBucket::Idle: return "idle";
        case TimeBucket::Travel: return "travel";
        case TimeBucket::Dwell: return "dwell";
        case TimeBucket::Reposition: return "reposition";
        case TimeBucket::Waitlist: return "waitlist";
        case TimeBucket::Charging: return "charging";
    }
    return "?";
}

void save_trajectories(const std::string& path, const std::vector<ShuttleTrajectory>& trajectories) {
    std::ofstream out = open_output(path);
    out << "shuttle_id,t_min,state,node,occupancy,battery_kwh\n";
    for (const ShuttleTrajectory& traj : trajectories)
        for (const StateChange& c : traj.transitions)
            out << traj.shuttle_id << "," << fmt_double(c.t_min) << "," << to_string(c.state) << "," << c.node
                << "," << c.occupancy << "," << fmt_double(c.battery_kwh) << "\n";
}

void save_charging_log(const std::string& path, const std::vector<ChargingSession>& sessions) {
    std::ofstream out = open_output(path);
    out << "shuttle_id,waitlist_join_min,charge_start_min,charge_end_min,level_before_kwh,reposition_mi\n";
    for (const ChargingSession& s : sessions)
        out << s.shuttle_id << "," << fmt_double(s.waitlist_join_min) << "," << fmt_double(s.charge_start_min)
            << "," << fmt_double(s.charge_end_min) << "," << fmt_double(s.level_before_kwh) << ","
            << fmt_double(s.reposition_mi) << "\n";
}

}  // namespace aods
