#include "aods/dispatch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "aods/csv.hpp"

namespace aods {

const char* to_string(ShuttleState s) {
    switch (s) {
        case ShuttleState::Idle: return "Idle";
        case ShuttleState::TravelingToOrigin: return "TravelingToOrigin";
        case ShuttleState::AtPickup: return "AtPickup";
        case ShuttleState::PickupDone: return "PickupDone";
        case ShuttleState::TravelingToDestination: return "TravelingToDestination";
        case ShuttleState::AtDropoff: return "AtDropoff";
        case ShuttleState::DropoffDone: return "DropoffDone";
        case ShuttleState::Repositioning: return "Repositioning";
        case ShuttleState::Charging: return "Charging";
    }
    return "?";
}

const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::NoActiveShuttle: return "no-active-shuttle";
        case RejectReason::NoSeats: return "no-seats";
        case RejectReason::NoFeasibleSchedule: return "no-feasible-schedule";
    }
    return "?";
}

PlanAnchor plan_anchor(const RoadNetwork& net, const Shuttle& s, double now_min) {
    if (s.traveling()) {
        const Edge& e = net.edges[s.leg_edges[s.leg_pos]];
        return {net.node_id(e.to), s.busy_until_min};
    }
    if (s.at_stop_service()) return {s.node, s.busy_until_min};
    return {s.node, now_min};
}

size_t insertable_from(const Shuttle& s) {
    return s.schedule.next_action + (s.at_stop_service() ? 1 : 0);
}

std::vector<Schedule> enumerate_insertions(const Schedule& schedule, const TripRequest& request,
                                           size_t remaining_start) {
    const Action pickup{ActionKind::Pickup, request.id, request.origin, 0.0};
    const Action dropoff{ActionKind::Dropoff, request.id, request.dest, 0.0};

    std::vector<Action> rem = schedule.remaining(remaining_start);
    const size_t n = rem.size();

    std::vector<Schedule> out;
    out.reserve((n + 1) * (n + 2) / 2);
    for (size_t i = 0; i <= n; ++i) {
        for (size_t j = i; j <= n; ++j) {
            Schedule cand;
            cand.next_action = schedule.next_action;
            cand.actions.assign(schedule.actions.begin(), schedule.actions.begin() + static_cast<long>(remaining_start));
            cand.actions.insert(cand.actions.end(), rem.begin(), rem.begin() + static_cast<long>(i));
            cand.actions.push_back(pickup);
            cand.actions.insert(cand.actions.end(), rem.begin() + static_cast<long>(i),
                                rem.begin() + static_cast<long>(j));
            cand.actions.push_back(dropoff);
            cand.actions.insert(cand.actions.end(), rem.begin() + static_cast<long>(j), rem.end());
            out.push_back(std::move(cand));
        }
    }
    return out;
}

ArrivalEstimate LegCache::query(NodeId from, NodeId to, double depart_min) {
    Key key{from, to, std::bit_cast<uint64_t>(depart_min)};
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    ArrivalEstimate est = estimate_arrival(*net_, from, to, depart_min, TravelMode::Shuttle);
    map_.emplace(key, est);
    return est;
}

Feasibility validate_candidate(const RoadNetwork& net, const DispatchConfig& cfg, const Shuttle& shuttle,
                               const TripRequest& request, const Schedule& candidate, double now_min,
                               LegCache& cache) {
    Feasibility out;
    PlanAnchor anchor = plan_anchor(net, shuttle, now_min);

    double t = anchor.time_min;
    NodeId pos = anchor.node;
    int occ = shuttle.occupancy;
    double dist = 0.0;

    // Waiting ends when the shuttle arrives at the pickup stop; riding runs
    // from boarding completion to the dropoff-stop arrival.
    std::map<int, double> pickup_arrival;
    std::map<int, double> pickup_done;
    std::map<int, double> dropoff_arrival;

    auto party_of = [&](int request_id) {
        if (request_id == request.id) return request.party;
        return shuttle.riders.at(request_id).party;
    };

    size_t walk_from = insertable_from(shuttle);
    // A pickup or dropoff currently being serviced completes at the anchor
    // time; its effects are fixed and unaffected by the candidate.
    if (shuttle.at_stop_service()) {
        const Action& a = candidate.actions.at(shuttle.schedule.next_action);
        if (a.kind == ActionKind::Pickup) {
            occ += party_of(a.request_id);
            pickup_arrival[a.request_id] = anchor.time_min - cfg.dwell_min;
            pickup_done[a.request_id] = anchor.time_min;
        } else {
            occ -= party_of(a.request_id);
            dropoff_arrival[a.request_id] = anchor.time_min - cfg.dwell_min;
        }
        if (occ > cfg.capacity) throw SimFault("committed schedule exceeds capacity");
    }

    out.planned_completion.reserve(candidate.actions.size() - walk_from);
    for (size_t idx = walk_from; idx < candidate.actions.size(); ++idx) {
        const Action& a = candidate.actions[idx];
        if (pos != a.stop) {
            ArrivalEstimate leg = cache.query(pos, a.stop, t);
            dist += leg.distance_mi;
            t = leg.arrive_min;
            pos = a.stop;
        }
        double arrival = t;
        t += cfg.dwell_min;  // service the stop
        out.planned_completion.push_back(t);

        if (a.kind == ActionKind::Pickup) {
            occ += party_of(a.request_id);
            if (occ > cfg.capacity) {
                out.blocked_by = "capacity";
                return out;
            }
            pickup_arrival[a.request_id] = arrival;
            pickup_done[a.request_id] = t;
        } else {
            occ -= party_of(a.request_id);
            dropoff_arrival[a.request_id] = arrival;
        }
    }

    // Check (i): the new rider.
    {
        out.wait_min = pickup_arrival.at(request.id) - request.request_min;
        if (out.wait_min > cfg.max_wait_min) {
            out.blocked_by = "new-rider-wait";
            return out;
        }
        double depart = pickup_done.at(request.id);
        double direct = cache.query(request.origin, request.dest, depart).arrive_min - depart;
        out.invehicle_min = dropoff_arrival.at(request.id) - depart;
        if ((out.invehicle_min - direct) / direct > cfg.detour_threshold) {
            out.blocked_by = "new-rider-detour";
            return out;
        }
    }

    // Checks (ii) and (iii): riders already committed to this shuttle.
    for (const auto& [rid, rider] : shuttle.riders) {
        double depart, direct;
        if (rider.picked) {
            depart = rider.pickup_min;
            direct = rider.direct_min;
        } else {
            auto it = pickup_done.find(rid);
            if (it == pickup_done.end()) throw SimFault("booked rider missing from candidate");
            depart = it->second;
            if (pickup_arrival.at(rid) - rider.request_min > cfg.max_wait_min) {
                out.blocked_by = "booked-rider-wait";
                return out;
            }
            direct = cache.query(rider.origin, rider.dest, depart).arrive_min - depart;
        }
        auto dit = dropoff_arrival.find(rid);
        if (dit == dropoff_arrival.end()) throw SimFault("rider dropoff missing from candidate");
        double invehicle = dit->second - depart;
        if ((invehicle - direct) / direct > cfg.detour_threshold) {
            out.blocked_by = rider.picked ? "onboard-rider-detour" : "booked-rider-detour";
            return out;
        }
    }

    // Accepting must not imply running the battery below the critical level.
    double dwell_total = cfg.dwell_min * static_cast<double>(candidate.actions.size() - walk_from);
    double projected = shuttle.battery.level_kwh - shuttle.battery.moving_kwh_per_mi * dist -
                       shuttle.battery.idle_kwh_per_min * dwell_total;
    if (projected < shuttle.battery.critical_threshold_kwh) {
        out.blocked_by = "energy";
        return out;
    }

    out.feasible = true;
    out.total_travel_min = t - now_min;
    out.distance_mi = dist;
    return out;
}

RideRecord& DispatchLog::record_for(int request_id) {
    for (auto it = records.rbegin(); it != records.rend(); ++it)
        if (it->request_id == request_id) return *it;
    throw SimFault("no dispatch record for request " + std::to_string(request_id));
}

size_t DispatchLog::accepted_count() const {
    size_t n = 0;
    for (const RideRecord& r : records) n += r.accepted ? 1 : 0;
    return n;
}

DispatchOutcome handle_request(const RoadNetwork& net, const DispatchConfig& cfg, std::vector<Shuttle>& fleet,
                               const TripRequest& request, double now_min, LegCache& cache) {
    bool any_active = false;
    for (const Shuttle& s : fleet)
        if (s.active) any_active = true;
    if (!any_active) return {std::nullopt, RejectReason::NoActiveShuttle};

    Shuttle* best_shuttle = nullptr;
    Schedule best_schedule;
    Feasibility best_metrics;
    bool have_best = false;
    // Seats are checked over the whole candidate schedule: a currently full
    // shuttle qualifies if a dropoff precedes the new pickup.
    bool any_seats = false;

    for (Shuttle& s : fleet) {
        if (!s.active) continue;
        size_t rs = insertable_from(s);
        for (Schedule& cand : enumerate_insertions(s.schedule, request, rs)) {
            Feasibility f = validate_candidate(net, cfg, s, request, cand, now_min, cache);
            if (f.blocked_by != "capacity") any_seats = true;
            if (!f.feasible) continue;
            bool better = !have_best || f.total_travel_min < best_metrics.total_travel_min ||
                          (f.total_travel_min == best_metrics.total_travel_min &&
                           (f.wait_min < best_metrics.wait_min ||
                            (f.wait_min == best_metrics.wait_min && s.id < best_shuttle->id)));
            if (better) {
                best_shuttle = &s;
                best_schedule = std::move(cand);
                best_metrics = std::move(f);
                have_best = true;
            }
        }
    }
    if (!have_best)
        return {std::nullopt, any_seats ? RejectReason::NoFeasibleSchedule : RejectReason::NoSeats};

    // Commit: replace the schedule atomically and register the rider.
    size_t rs = insertable_from(*best_shuttle);
    for (size_t i = rs; i < best_schedule.actions.size(); ++i)
        best_schedule.actions[i].planned_min = best_metrics.planned_completion[i - rs];
    best_shuttle->schedule = best_schedule;

    RiderInfo rider;
    rider.request_id = request.id;
    rider.request_min = request.request_min;
    rider.party = request.party;
    rider.origin = request.origin;
    rider.dest = request.dest;
    best_shuttle->riders.emplace(request.id, rider);

    Offer offer;
    offer.shuttle_id = best_shuttle->id;
    offer.schedule = std::move(best_schedule);
    offer.wait_min = best_metrics.wait_min;
    offer.invehicle_min = best_metrics.invehicle_min;
    offer.total_travel_min = best_metrics.total_travel_min;
    return {offer, std::nullopt};
}

void save_dispatch_log(const std::string& path, const DispatchLog& log) {
    std::ofstream out = open_output(path);
    out << "request_id,disposition,reason,shuttle_id,request_min,pickup_min,dropoff_min,wait_min,"
           "invehicle_min,direct_min\n";
    for (const RideRecord& r : log.records) {
        out << r.request_id << ",";
        if (r.accepted) {
            out << "accepted,," << r.shuttle_id << "," << fmt_double(r.request_min) << ","
                << fmt_double(r.pickup_min) << "," << fmt_double(r.dropoff_min) << "," << fmt_double(r.wait_min)
                << "," << fmt_double(r.invehicle_min) << "," << fmt_double(r.direct_min) << "\n";
        } else {
            out << "failed," << to_string(r.reason) << ",," << fmt_double(r.request_min) << ",,,,,\n";
        }
    }
}

}  // namespace aods
