#include "aods/engine.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <queue>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aods/csv.hpp"

namespace aods {

namespace {

enum class EventKind { Request, EdgeArrive, StopDone, ChargeDone, BatteryCross, Recheck };

struct Event {
    double t = 0.0;
    uint64_t seq = 0;
    EventKind kind = EventKind::Request;
    int shuttle = -1;
    size_t req_idx = 0;
    uint64_t version = 0;
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t) return a.t > b.t;
        return a.seq > b.seq;
    }
};

// Minimum spacing for re-issued battery threshold timers, so a level that
// rounds to exactly the threshold cannot stall the clock.
constexpr double kMinTimerStep = 0.01;

class Sim {
  public:
    Sim(const ScenarioConfig& cfg, const RoadNetwork& net, const StopPlan& plan,
        const std::vector<TripRequest>& requests)
        : cfg_(cfg), net_(net), plan_(plan), requests_(requests), cache_(net) {
        dcfg_.max_wait_min = cfg.max_wait_min;
        dcfg_.detour_threshold = cfg.detour_threshold;
        dcfg_.dwell_min = cfg.dwell_min;
        dcfg_.capacity = cfg.capacity;

        station_.node = plan.depot;
        station_.points = cfg.charging_points;

        fleet_.resize(cfg.fleet_size);
        ex_.resize(cfg.fleet_size);
        for (int i = 0; i < cfg.fleet_size; ++i) {
            Shuttle& s = fleet_[i];
            s.id = i;
            s.node = plan.depot;
            ex_[i].traj.shuttle_id = i;
            ex_[i].traj.energy.initial_kwh = s.battery.level_kwh;
            log_transition(s, 0.0);
        }
    }

    SimulationResult run() {
        for (size_t i = 0; i < requests_.size(); ++i) push({requests_[i].request_min, 0, EventKind::Request, -1, i});
        for (Shuttle& s : fleet_) schedule_battery_timer(s, 0.0);

        // Process to quiescence, then pull idle shuttles back to the yard for
        // overnight storage; their movement may trigger further charging.
        while (true) {
            while (!queue_.empty()) {
                Event ev = queue_.top();
                queue_.pop();
                if (ev.t < now_ - 1e-9) throw SimFault("event time ran backwards");
                now_ = std::max(now_, ev.t);
                switch (ev.kind) {
                    case EventKind::Request: on_request(ev); break;
                    case EventKind::EdgeArrive: on_edge_arrive(fleet_[ev.shuttle], ev.t); break;
                    case EventKind::StopDone: on_stop_done(fleet_[ev.shuttle], ev.t); break;
                    case EventKind::ChargeDone: on_charge_done(fleet_[ev.shuttle], ev.t); break;
                    case EventKind::BatteryCross: on_battery_cross(fleet_[ev.shuttle], ev); break;
                    case EventKind::Recheck: on_recheck(fleet_[ev.shuttle], ev.t); break;
                }
            }
            if (!begin_pull_in()) break;
        }
        finalize();

        SimulationResult res;
        res.cfg = cfg_;
        res.requests = requests_;
        res.log = std::move(log_);
        res.charging = std::move(sessions_);
        for (auto& x : ex_) res.trajectories.push_back(std::move(x.traj));
        if (!res.requests.empty()) res.metrics.rider = rider_metrics(res.log, net_);
        res.metrics.vehicle = vehicle_metrics(res.trajectories, cfg_.capacity);
        res.metrics.energy = energy_metrics(res.charging, res.trajectories, cfg_);
        return res;
    }

  private:
    struct Extra {
        double accrual_min = 0.0;   // battery accounting is current up to here
        double seg_start = 0.0;
        TimeBucket bucket = TimeBucket::Idle;
        double edge_entry = 0.0;
        bool replan = false;
        uint64_t battery_version = 0;
        double join_min = -1.0;
        double dispatch_min = -1.0;
        double charge_start = -1.0;
        double level_before = 0.0;
        double reposition_mi = 0.0;
        double last_event = 0.0;
        bool pulling_in = false;
        ShuttleTrajectory traj;
    };

    void push(Event ev) {
        ev.seq = next_seq_++;
        queue_.push(ev);
    }

    Extra& ex(const Shuttle& s) { return ex_[s.id]; }

    void log_transition(Shuttle& s, double t) {
        ex(s).traj.transitions.push_back({t, s.state, s.node, s.occupancy, s.battery.level_kwh});
        ex(s).last_event = std::max(ex(s).last_event, t);
    }

    void set_state(Shuttle& s, double t, ShuttleState st) {
        s.state = st;
        log_transition(s, t);
    }

    // Close the running segment at t and start a new one in `next`. A
    // boarding party counts as aboard during its pickup dwell, so the closer
    // may override the recorded occupancy.
    void switch_bucket(Shuttle& s, double t, TimeBucket next, double distance = 0.0, int occupancy = -1) {
        Extra& x = ex(s);
        if (t > x.seg_start || distance > 0.0)
            x.traj.segments.push_back({x.seg_start, t, x.bucket, distance,
                                       occupancy >= 0 ? occupancy : s.occupancy});
        x.seg_start = t;
        x.bucket = next;
    }

    // Stationary states drain at the idle rate; bring the ledger current.
    // Deactivated shuttles are powered down and stop drawing.
    void accrue_stationary(Shuttle& s, double t) {
        Extra& x = ex(s);
        if (s.state == ShuttleState::Charging || s.traveling()) return;
        if (t <= x.accrual_min) return;
        if (s.deactivated) {
            x.accrual_min = t;
            return;
        }
        double dt = t - x.accrual_min;
        consume_idle(s.battery, dt);
        x.traj.energy.idle_kwh += s.battery.idle_kwh_per_min * dt;
        x.accrual_min = t;
    }

    void schedule_battery_timer(Shuttle& s, double t) {
        const Battery& b = s.battery;
        double threshold;
        if (s.state != ShuttleState::Idle) return;
        if (s.active) {
            if (b.level_kwh < b.seek_threshold_kwh) return;  // policy handles it synchronously
            threshold = b.seek_threshold_kwh;
        } else {
            if (s.deactivated || b.level_kwh < b.critical_threshold_kwh) return;
            threshold = b.critical_threshold_kwh;
        }
        double dt = std::max((b.level_kwh - threshold) / b.idle_kwh_per_min, kMinTimerStep);
        double when = t + dt;
        if (when >= cfg_.horizon_min && s.active) return;  // no new charging cycles past the horizon
        push({when, 0, EventKind::BatteryCross, s.id, 0, ex(s).battery_version});
    }

    // --- event handlers -------------------------------------------------

    void on_request(const Event& ev) {
        const TripRequest& req = requests_[ev.req_idx];
        for (Shuttle& s : fleet_) accrue_stationary(s, ev.t);

        RideRecord rec;
        rec.request_id = req.id;
        rec.kind = req.kind;
        rec.origin = req.origin;
        rec.dest = req.dest;
        rec.request_min = req.request_min;

        DispatchOutcome out = handle_request(net_, dcfg_, fleet_, req, ev.t, cache_);
        rec.accepted = out.offer.has_value();
        if (out.offer) rec.shuttle_id = out.offer->shuttle_id;
        if (out.rejection) rec.reason = *out.rejection;
        log_.records.push_back(rec);

        if (out.offer) {
            Shuttle& s = fleet_[out.offer->shuttle_id];
            if (s.state == ShuttleState::Idle) {
                ++ex(s).battery_version;  // cancel the pending idle battery timer
                start_next_leg(s, ev.t);
            } else if (s.traveling()) {
                ex(s).replan = true;
            }
            // a dwelling shuttle picks up the new schedule when the doors close
        }
    }

    void start_next_leg(Shuttle& s, double t) {
        const Action& a = s.schedule.actions[s.schedule.next_action];
        Extra& x = ex(s);
        ++x.battery_version;
        accrue_stationary(s, t);
        if (s.node == a.stop) {
            begin_stop_service(s, t);
            return;
        }
        set_state(s, t, a.kind == ActionKind::Pickup ? ShuttleState::TravelingToOrigin
                                                     : ShuttleState::TravelingToDestination);
        Path path = shortest_path(net_, s.node, a.stop, t, TravelMode::Shuttle);
        s.leg_edges = path.edges;
        s.leg_pos = 0;
        x.replan = false;
        switch_bucket(s, t, TimeBucket::Travel);
        x.edge_entry = t;
        const Edge& e0 = net_.edges[s.leg_edges[0]];
        s.busy_until_min = t + edge_travel_minutes(net_, e0, t, TravelMode::Shuttle);
        push({s.busy_until_min, 0, EventKind::EdgeArrive, s.id});
    }

    void begin_stop_service(Shuttle& s, double t) {
        const Action& a = s.schedule.actions[s.schedule.next_action];
        switch_bucket(s, t, TimeBucket::Dwell);
        set_state(s, t, a.kind == ActionKind::Pickup ? ShuttleState::AtPickup : ShuttleState::AtDropoff);
        RideRecord& rec = log_.record_for(a.request_id);
        if (a.kind == ActionKind::Dropoff) {
            rec.dropoff_min = t;  // doors open; the dwell is unloading time
        } else {
            rec.pickup_min = t;  // the shuttle has arrived; waiting ends here
            rec.wait_min = t - rec.request_min;
            if (rec.wait_min > cfg_.max_wait_min + 1e-9)
                throw SimFault("realized waiting time exceeded the configured maximum");
        }
        s.busy_until_min = t + cfg_.dwell_min;
        push({s.busy_until_min, 0, EventKind::StopDone, s.id});
    }

    void on_edge_arrive(Shuttle& s, double t) {
        Extra& x = ex(s);
        const Edge& e = net_.edges[s.leg_edges[s.leg_pos]];
        consume_moving(s.battery, e.length_mi);
        x.traj.energy.moving_kwh += s.battery.moving_kwh_per_mi * e.length_mi;
        x.accrual_min = t;
        x.traj.edge_transits.push_back({s.leg_edges[s.leg_pos], x.edge_entry, t});
        switch_bucket(s, t, x.bucket, e.length_mi);
        s.node = net_.node_id(e.to);
        x.last_event = std::max(x.last_event, t);

        if (s.state == ShuttleState::Repositioning) {
            if (s.node == station_.node) {
                if (ex(s).pulling_in) {
                    ex(s).pulling_in = false;
                    s.active = true;
                    switch_bucket(s, t, TimeBucket::Idle);
                    set_state(s, t, ShuttleState::Idle);
                    apply_charging_policy(s, t);
                } else {
                    begin_charging(s, t);
                }
                return;
            }
            if (s.leg_pos + 1 >= s.leg_edges.size()) throw SimFault("repositioning leg ended off-station");
            advance_edge(s, t);
            return;
        }

        if (s.schedule.done()) throw SimFault("traveling with an empty schedule");
        const Action& a = s.schedule.actions[s.schedule.next_action];
        if (s.node == a.stop) {
            begin_stop_service(s, t);
            return;
        }
        if (!x.replan && s.leg_pos + 1 < s.leg_edges.size()) {
            advance_edge(s, t);
            return;
        }
        // Re-plan from this node: the committed schedule changed mid-edge, or
        // the precomputed leg is exhausted.
        ShuttleState want = a.kind == ActionKind::Pickup ? ShuttleState::TravelingToOrigin
                                                         : ShuttleState::TravelingToDestination;
        if (s.state != want) set_state(s, t, want);
        Path path = shortest_path(net_, s.node, a.stop, t, TravelMode::Shuttle);
        s.leg_edges = path.edges;
        s.leg_pos = 0;
        x.replan = false;
        x.edge_entry = t;
        const Edge& e0 = net_.edges[s.leg_edges[0]];
        s.busy_until_min = t + edge_travel_minutes(net_, e0, t, TravelMode::Shuttle);
        push({s.busy_until_min, 0, EventKind::EdgeArrive, s.id});
    }

    void advance_edge(Shuttle& s, double t) {
        Extra& x = ex(s);
        ++s.leg_pos;
        x.edge_entry = t;
        const Edge& e = net_.edges[s.leg_edges[s.leg_pos]];
        s.busy_until_min = t + edge_travel_minutes(net_, e, t, TravelMode::Shuttle);
        push({s.busy_until_min, 0, EventKind::EdgeArrive, s.id});
    }

    void on_stop_done(Shuttle& s, double t) {
        accrue_stationary(s, t);
        const Action& a = s.schedule.actions[s.schedule.next_action];
        int dwell_occ = s.occupancy;
        if (a.kind == ActionKind::Pickup) dwell_occ += s.riders.at(a.request_id).party;
        switch_bucket(s, t, TimeBucket::Idle, 0.0, dwell_occ);  // bucket reassigned below

        if (a.kind == ActionKind::Pickup) {
            RiderInfo& rider = s.riders.at(a.request_id);
            s.occupancy += rider.party;
            if (s.occupancy > cfg_.capacity) throw SimFault("occupancy exceeded capacity");
            rider.picked = true;
            rider.pickup_min = t;  // boarding complete; riding starts
            rider.direct_min = cache_.query(rider.origin, rider.dest, t).arrive_min - t;
            log_.record_for(a.request_id).direct_min = rider.direct_min;
            set_state(s, t, ShuttleState::PickupDone);
        } else {
            RiderInfo rider = s.riders.at(a.request_id);
            s.occupancy -= rider.party;
            if (s.occupancy < 0) throw SimFault("negative occupancy");
            s.riders.erase(a.request_id);

            RideRecord& rec = log_.record_for(a.request_id);
            rec.invehicle_min = rec.dropoff_min - rider.pickup_min;
            set_state(s, t, ShuttleState::DropoffDone);
        }

        ++s.schedule.next_action;
        if (!s.schedule.done()) {
            start_next_leg(s, t);
        } else {
            become_idle(s, t);
        }
    }

    void become_idle(Shuttle& s, double t) {
        if (!s.riders.empty()) throw SimFault("schedule drained with riders still registered");
        s.schedule = Schedule{};
        s.occupancy = 0;
        set_state(s, t, ShuttleState::Idle);
        ex(s).bucket = TimeBucket::Idle;
        apply_charging_policy(s, t);
    }

    void apply_charging_policy(Shuttle& s, double t) {
        while (true) {
            ChargeAction act = charging_check(s, station_, t);
            switch (act.kind) {
                case ChargeActionKind::JoinWaitlist:
                    station_.join(s.id);
                    s.active = false;
                    ex(s).join_min = t;
                    switch_bucket(s, t, TimeBucket::Waitlist);
                    ++ex(s).battery_version;
                    serve_station(t);
                    continue;  // re-evaluate: promotion or deactivation may follow
                case ChargeActionKind::RepositionToCharger:
                    promote(s, t);
                    return;
                case ChargeActionKind::DeactivateAndRecheck:
                    s.deactivated = true;
                    push({t + act.recheck_min, 0, EventKind::Recheck, s.id});
                    return;
                case ChargeActionKind::None:
                    if (s.state == ShuttleState::Idle) schedule_battery_timer(s, t);
                    return;
            }
        }
    }

    void serve_station(double t) {
        while (station_.has_vacancy() && !station_.waitlist.empty()) {
            int id = station_.waitlist.front();
            promote(fleet_[id], t);
        }
    }

    void promote(Shuttle& s, double t) {
        Extra& x = ex(s);
        station_.remove(s.id);
        ++station_.busy;
        accrue_stationary(s, t);
        s.deactivated = false;
        ++x.battery_version;
        x.reposition_mi = 0.0;
        x.dispatch_min = t;
        if (s.node == station_.node) {
            switch_bucket(s, t, TimeBucket::Charging);
            begin_charging(s, t);
            return;
        }
        set_state(s, t, ShuttleState::Repositioning);
        Path path = shortest_path(net_, s.node, station_.node, t, TravelMode::Shuttle);
        x.reposition_mi = path.distance_mi;
        s.leg_edges = path.edges;
        s.leg_pos = 0;
        switch_bucket(s, t, TimeBucket::Reposition);
        x.edge_entry = t;
        const Edge& e0 = net_.edges[s.leg_edges[0]];
        s.busy_until_min = t + edge_travel_minutes(net_, e0, t, TravelMode::Shuttle);
        push({s.busy_until_min, 0, EventKind::EdgeArrive, s.id});
    }

    void begin_charging(Shuttle& s, double t) {
        Extra& x = ex(s);
        switch_bucket(s, t, TimeBucket::Charging);
        set_state(s, t, ShuttleState::Charging);
        x.charge_start = t;
        x.level_before = s.battery.level_kwh;
        x.accrual_min = t;
        double duration = charge_duration_min(s.battery);
        push({t + duration, 0, EventKind::ChargeDone, s.id});
    }

    void on_charge_done(Shuttle& s, double t) {
        Extra& x = ex(s);
        double charged = s.battery.capacity_kwh - x.level_before;
        s.battery.level_kwh = s.battery.capacity_kwh;  // sessions always end full
        x.traj.energy.charged_kwh += charged;
        x.accrual_min = t;
        switch_bucket(s, t, TimeBucket::Idle);
        sessions_.push_back({s.id, x.join_min, x.dispatch_min, x.charge_start, t, x.level_before, x.reposition_mi});
        x.join_min = -1.0;
        x.charge_start = -1.0;
        --station_.busy;
        s.active = true;
        s.deactivated = false;
        set_state(s, t, ShuttleState::Idle);
        apply_charging_policy(s, t);
        serve_station(t);
    }

    void on_battery_cross(Shuttle& s, const Event& ev) {
        if (ev.version != ex(s).battery_version) return;  // context changed since scheduling
        if (s.state != ShuttleState::Idle) return;
        accrue_stationary(s, ev.t);
        apply_charging_policy(s, ev.t);
    }

    void on_recheck(Shuttle& s, double t) {
        if (!s.deactivated || s.state != ShuttleState::Idle) return;
        accrue_stationary(s, t);
        // Vacancies are served event-driven; the timer keeps the 1-minute
        // cadence the recharging algorithm prescribes.
        if (s.deactivated) push({t + 1.0, 0, EventKind::Recheck, s.id});
    }

    // After the queue drains, idle shuttles away from the yard drive back
    // for overnight storage. Returns whether any new movement started.
    bool begin_pull_in() {
        double t = std::max(now_, cfg_.horizon_min);
        bool any = false;
        for (Shuttle& s : fleet_) {
            if (s.state != ShuttleState::Idle || s.node == station_.node) continue;
            if (station_.contains(s.id)) continue;  // a charge dispatch will move it
            Extra& x = ex(s);
            accrue_stationary(s, t);
            ++x.battery_version;
            x.pulling_in = true;
            s.active = false;
            set_state(s, t, ShuttleState::Repositioning);
            Path path = shortest_path(net_, s.node, station_.node, t, TravelMode::Shuttle);
            s.leg_edges = path.edges;
            s.leg_pos = 0;
            switch_bucket(s, t, TimeBucket::Reposition);
            x.edge_entry = t;
            const Edge& e0 = net_.edges[s.leg_edges[0]];
            s.busy_until_min = t + edge_travel_minutes(net_, e0, t, TravelMode::Shuttle);
            push({s.busy_until_min, 0, EventKind::EdgeArrive, s.id});
            any = true;
        }
        return any;
    }

    void finalize() {
        for (Shuttle& s : fleet_) {
            if (s.traveling() || s.state == ShuttleState::Charging || s.at_stop_service())
                throw SimFault("simulation ended with a shuttle mid-activity");
            Extra& x = ex(s);
            double end = std::max(cfg_.horizon_min, x.last_event);
            accrue_stationary(s, end);
            switch_bucket(s, end, TimeBucket::Idle);
            x.traj.energy.final_kwh = s.battery.level_kwh;
            x.traj.end_min = end;
        }
    }

    const ScenarioConfig& cfg_;
    const RoadNetwork& net_;
    const StopPlan& plan_;
    const std::vector<TripRequest>& requests_;

    DispatchConfig dcfg_;
    std::vector<Shuttle> fleet_;
    std::vector<Extra> ex_;
    ChargingStation station_;
    LegCache cache_;
    DispatchLog log_;
    std::vector<ChargingSession> sessions_;

    std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
    uint64_t next_seq_ = 0;
    double now_ = 0.0;
};

}  // namespace

SimulationResult run_scenario(const ScenarioConfig& cfg, const RoadNetwork& net, const StopPlan& plan,
                              const std::vector<TripRequest>& requests) {
    cfg.validate();
    StopPlan effective = plan;
    if (cfg.depot_override >= 0) effective.depot = cfg.depot_override;
    validate_stop_plan(net, effective);
    Sim sim(cfg, net, effective, requests);
    return sim.run();
}

SimulationResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    RoadNetwork net = load_network(cfg.network_file);
    net.shuttle_speed_cap_mph = cfg.shuttle_speed_cap_mph;
    StopPlan plan = load_stop_plan(cfg.stop_plan_file);
    validate_stop_plan(net, plan);

    std::vector<TripRequest> requests;
    if (!cfg.requests_file.empty()) {
        requests = load_requests(cfg.requests_file, net, plan);
    } else {
        ODMatrix od = load_od(cfg.od_file);
        requests = generate_requests(od, plan, net, cfg.transit_share, cfg.seed);
    }
    return run_scenario(cfg, net, plan, requests);
}

void write_result_bundle(const std::string& dir, const SimulationResult& result) {
    std::filesystem::create_directories(dir);
    save_dispatch_log(dir + "/dispatch_log.csv", result.log);
    save_trajectories(dir + "/trajectory.csv", result.trajectories);
    save_charging_log(dir + "/charging_log.csv", result.charging);
    save_requests(dir + "/requests.csv", result.requests);
    save_metrics(dir + "/metrics.json", result.metrics, result.cfg);
}

SweepCellStats::Stat mean_stddev(const std::vector<double>& values) {
    SweepCellStats::Stat st;
    st.n = static_cast<int>(values.size());
    if (values.empty()) return st;
    double sum = 0.0;
    for (double v : values) sum += v;
    st.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - st.mean) * (v - st.mean);
        st.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return st;
}

namespace {

struct CellKey {
    int fleet;
    double wait;
    std::string demand;
    bool operator<(const CellKey& o) const {
        if (fleet != o.fleet) return fleet < o.fleet;
        if (wait != o.wait) return wait < o.wait;
        return demand < o.demand;
    }
};

}  // namespace

namespace {

void run_one(const ScenarioConfig& cfg, const RoadNetwork& net, const StopPlan& plan,
             const std::vector<TripRequest>& requests, const std::string& out_dir, SweepRun& slot) {
    slot.cfg = cfg;
    try {
        SimulationResult res = run_scenario(cfg, net, plan, requests);
        slot.metrics = res.metrics;
        slot.ok = true;
        if (!out_dir.empty()) write_result_bundle(out_dir + "/" + cfg.cell_name(), res);
    } catch (const std::exception& ex) {
        slot.ok = false;
        slot.error = ex.what();
    }
}

}  // namespace

SweepResult run_sweep(const std::vector<ScenarioConfig>& grid, int jobs, const std::string& out_dir) {
    if (grid.empty()) throw ValidationError("sweep grid is empty");

    // Shared immutable inputs. All scenarios in a sweep point at the same
    // network/plan files; requests are shared per (demand, seed).
    RoadNetwork net = load_network(grid.front().network_file);
    net.shuttle_speed_cap_mph = grid.front().shuttle_speed_cap_mph;
    StopPlan plan = load_stop_plan(grid.front().stop_plan_file);
    validate_stop_plan(net, plan);

    // Per-(demand, seed) request sets; a failed load marks its scenarios
    // failed without aborting the sweep.
    std::map<std::pair<std::string, uint64_t>, std::vector<TripRequest>> request_sets;
    std::map<std::pair<std::string, uint64_t>, std::string> request_errors;
    for (const ScenarioConfig& cfg : grid) {
        auto key = std::make_pair(cfg.demand_label, cfg.seed);
        if (request_sets.count(key) || request_errors.count(key)) continue;
        try {
            if (!cfg.requests_file.empty()) {
                request_sets[key] = load_requests(cfg.requests_file, net, plan);
            } else {
                ODMatrix od = load_od(cfg.od_file);
                request_sets[key] = generate_requests(od, plan, net, cfg.transit_share, cfg.seed);
            }
        } catch (const std::exception& ex) {
            request_errors[key] = ex.what();
        }
    }

    SweepResult sweep;
    sweep.runs.resize(grid.size());

    auto run_slot = [&](int i) {
        auto key = std::make_pair(grid[i].demand_label, grid[i].seed);
        auto it = request_sets.find(key);
        if (it == request_sets.end()) {
            sweep.runs[i].cfg = grid[i];
            sweep.runs[i].ok = false;
            sweep.runs[i].error = request_errors.at(key);
            return;
        }
        run_one(grid[i], net, plan, it->second, out_dir, sweep.runs[i]);
    };

    const int n = static_cast<int>(grid.size());
    if (jobs > 1) {
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
        for (int i = 0; i < n; ++i) run_slot(i);
    } else {
        for (int i = 0; i < n; ++i) run_slot(i);
    }

    // Aggregate per (fleet size, max wait, demand) across seeds and the
    // detour/charging axes.
    std::map<CellKey, std::vector<const SweepRun*>> cells;
    for (const SweepRun& r : sweep.runs)
        cells[{r.cfg.fleet_size, r.cfg.max_wait_min, r.cfg.demand_label}].push_back(&r);

    for (const auto& [key, runs] : cells) {
        SweepCellStats cell;
        cell.fleet_size = key.fleet;
        cell.max_wait_min = key.wait;
        cell.demand_label = key.demand;
        cell.runs = static_cast<int>(runs.size());
        auto collect = [&](auto getter) {
            std::vector<double> vals;
            for (const SweepRun* r : runs) {
                if (!r->ok) continue;
                auto v = getter(r->metrics);
                if (v.has_value()) vals.push_back(*v);
            }
            return mean_stddev(vals);
        };
        using Opt = std::optional<double>;
        cell.accepted_ratio = collect([](const MetricsReport& m) { return Opt(m.rider.accepted_ratio); });
        cell.median_wait_min = collect([](const MetricsReport& m) { return m.rider.median_wait_min; });
        cell.trip_walk_ratio = collect([](const MetricsReport& m) { return m.rider.median_trip_walk_ratio; });
        cell.total_distance_mi = collect([](const MetricsReport& m) { return Opt(m.vehicle.total_distance_mi); });
        cell.empty_ratio = collect([](const MetricsReport& m) { return Opt(m.vehicle.empty_ratio); });
        cell.idle_ratio = collect([](const MetricsReport& m) { return Opt(m.vehicle.idle_ratio); });
        cell.capacity_utilization = collect([](const MetricsReport& m) { return m.vehicle.capacity_utilization; });
        cell.energy_kwh = collect([](const MetricsReport& m) { return Opt(m.energy.total_consumption_kwh); });
        cell.charger_utilization = collect([](const MetricsReport& m) { return Opt(m.energy.charger_utilization); });
        cell.inactive_wait_ratio = collect([](const MetricsReport& m) { return m.energy.inactive_wait_ratio; });
        sweep.aggregate.push_back(std::move(cell));
    }

    if (!out_dir.empty()) save_aggregate_csv(out_dir + "/aggregate.csv", sweep.aggregate);
    return sweep;
}

void save_aggregate_csv(const std::string& path, const std::vector<SweepCellStats>& cells) {
    std::ofstream out = open_output(path);
    out << "fleet_size,max_wait_min,demand,runs";
    const char* names[] = {"accepted_ratio", "median_wait_min",      "trip_walk_ratio",   "total_distance_mi",
                           "empty_ratio",    "idle_ratio",           "capacity_utilization", "energy_kwh",
                           "charger_utilization", "inactive_wait_ratio"};
    for (const char* n : names) out << "," << n << "_mean," << n << "_std," << n << "_n";
    out << "\n";
    for (const SweepCellStats& c : cells) {
        out << c.fleet_size << "," << fmt_double(c.max_wait_min) << "," << c.demand_label << "," << c.runs;
        const SweepCellStats::Stat* stats[] = {&c.accepted_ratio,   &c.median_wait_min,   &c.trip_walk_ratio,
                                               &c.total_distance_mi, &c.empty_ratio,       &c.idle_ratio,
                                               &c.capacity_utilization, &c.energy_kwh,    &c.charger_utilization,
                                               &c.inactive_wait_ratio};
        for (const auto* s : stats) out << "," << fmt_double(s->mean) << "," << fmt_double(s->stddev) << "," << s->n;
        out << "\n";
    }
}

}  // namespace aods
