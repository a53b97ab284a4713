#include "aods/traffic.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aods/csv.hpp"

namespace aods {

ShuttleWindows build_shuttle_windows(std::span<const ShuttleTrajectory> trajectories) {
    ShuttleWindows w;
    for (const ShuttleTrajectory& traj : trajectories)
        for (const EdgeTransit& t : traj.edge_transits) w.by_edge[t.edge].push_back({t.entry_min, t.exit_min});
    for (auto& [edge, windows] : w.by_edge)
        std::sort(windows.begin(), windows.end(),
                  [](const EdgeWindow& a, const EdgeWindow& b) { return a.entry_min < b.entry_min; });
    return w;
}

double moving_bottleneck_adjust(const Edge& e, double car_entry_min, double desired_minutes,
                                std::span<const EdgeWindow> windows) {
    double exit = car_entry_min + desired_minutes;
    if (e.overtake_ok) return exit;

    const double length = e.length_mi;
    const double vc = length / desired_minutes;  // mi per minute
    for (const EdgeWindow& w : windows) {
        double span = w.exit_min - w.entry_min;
        if (span <= 0.0) continue;
        double vs = length / span;
        if (vc <= vs) continue;                 // car is no faster than the shuttle
        if (car_entry_min >= w.exit_min) continue;   // shuttle already gone
        if (car_entry_min < w.entry_min) continue;   // shuttle enters behind the car

        // Car at 0, shuttle ahead at vs*(t - entry): catch-up point.
        double t_catch = (vc * car_entry_min - vs * w.entry_min) / (vc - vs);
        if (t_catch >= w.exit_min) continue;    // shuttle leaves the edge first
        double x_catch = vc * (t_catch - car_entry_min);
        if (x_catch >= length) continue;        // caught only at the far end
        // Follows at the shuttle's speed to the end of the edge.
        exit = std::max(exit, w.exit_min);
    }
    return exit;
}

std::vector<BackgroundVehicle> simulate_background(const RoadNetwork& net, const ODMatrix& od,
                                                   const ShuttleWindows* windows, uint64_t seed, int threads) {
    // Generation: integer vehicle counts per interval via largest remainder
    // over the interval's OD pairs, uniform departure times.
    Rng rng = Rng::stream(seed, "background");
    std::vector<BackgroundVehicle> vehicles;
    for (const ODInterval& iv : od.intervals) {
        std::vector<double> exact;
        exact.reserve(iv.trips.size());
        for (const ODFlow& f : iv.trips) exact.push_back(f.from == f.to ? 0.0 : f.count);
        std::vector<long> counts = largest_remainder_counts(exact);
        for (size_t p = 0; p < iv.trips.size(); ++p) {
            for (long n = 0; n < counts[p]; ++n) {
                BackgroundVehicle v;
                v.origin = iv.trips[p].from;
                v.dest = iv.trips[p].to;
                v.depart_min = rng.uniform(iv.start_min, iv.end_min);
                vehicles.push_back(v);
            }
        }
    }
    std::stable_sort(vehicles.begin(), vehicles.end(),
                     [](const BackgroundVehicle& a, const BackgroundVehicle& b) {
                         return a.depart_min < b.depart_min;
                     });
    for (size_t i = 0; i < vehicles.size(); ++i) vehicles[i].id = static_cast<int>(i + 1);

    // Traversal: route once at departure, then drive edge by edge. Pure per
    // vehicle, so the pass parallelizes without changing results.
    auto drive = [&](BackgroundVehicle& v) {
        Path path = shortest_path(net, v.origin, v.dest, std::min(v.depart_min, net.horizon_minutes),
                                  TravelMode::Background);
        double t = v.depart_min;
        v.free_flow_min = 0.0;
        v.transits.clear();
        v.transits.reserve(path.edges.size());
        for (int ei : path.edges) {
            const Edge& e = net.edges[ei];
            double desired = profile_minutes_at(net, e, t);
            double exit = t + desired;
            if (windows != nullptr && !e.overtake_ok) {
                auto it = windows->by_edge.find(ei);
                if (it != windows->by_edge.end())
                    exit = moving_bottleneck_adjust(e, t, desired, it->second);
            }
            v.transits.push_back({ei, t, exit});
            v.free_flow_min += e.free_flow_min();
            t = exit;
        }
        v.travel_min = t - v.depart_min;
    };

    const int n = static_cast<int>(vehicles.size());
    if (threads == 1) {
        for (int i = 0; i < n; ++i) drive(vehicles[i]);
    } else if (threads > 1) {
#pragma omp parallel for num_threads(threads) schedule(dynamic, 64)
        for (int i = 0; i < n; ++i) drive(vehicles[i]);
    } else {
#pragma omp parallel for schedule(dynamic, 64)
        for (int i = 0; i < n; ++i) drive(vehicles[i]);
    }
    return vehicles;
}

LinkIntervalStats link_stats(const RoadNetwork& net, std::span<const BackgroundVehicle> vehicles) {
    LinkIntervalStats st;
    st.interval_minutes = net.interval_minutes;

    double last = 0.0;
    for (const BackgroundVehicle& v : vehicles)
        if (!v.transits.empty()) last = std::max(last, v.transits.back().entry_min);
    st.intervals = static_cast<int>(std::floor(std::max(last, net.horizon_minutes) / st.interval_minutes)) + 1;
    st.distance_mi.assign(st.intervals, 0.0);
    st.time_min.assign(st.intervals, 0.0);
    st.delay_min.assign(st.intervals, 0.0);

    for (const BackgroundVehicle& v : vehicles) {
        for (const EdgeTransit& tr : v.transits) {
            const Edge& e = net.edges[tr.edge];
            if (!e.shuttle_ok) continue;  // measure where shuttles operate
            int k = static_cast<int>(tr.entry_min / st.interval_minutes);
            if (k < 0 || k >= st.intervals) continue;
            double dur = tr.exit_min - tr.entry_min;
            st.distance_mi[k] += e.length_mi;
            st.time_min[k] += dur;
            st.delay_min[k] += dur - e.free_flow_min();
        }
    }
    return st;
}

ImpactReport impact_report(const LinkIntervalStats& with_shuttles, const LinkIntervalStats& without_shuttles) {
    if (with_shuttles.interval_minutes != without_shuttles.interval_minutes)
        throw ValidationError("impact_report: mismatched interval grids");
    ImpactReport rep;
    rep.interval_minutes = with_shuttles.interval_minutes;
    int n = std::max(with_shuttles.intervals, without_shuttles.intervals);

    auto cell = [](const LinkIntervalStats& st, int k, double& speed, double& ratio) {
        if (k >= st.intervals || st.time_min[k] <= 0.0) {
            speed = 0.0;
            ratio = 0.0;
            return;
        }
        speed = 60.0 * st.distance_mi[k] / st.time_min[k];
        ratio = st.delay_min[k] / st.time_min[k];
    };

    for (int k = 0; k < n; ++k) {
        rep.interval_start_min.push_back(k * rep.interval_minutes);
        double sw, rw, so, ro;
        cell(with_shuttles, k, sw, rw);
        cell(without_shuttles, k, so, ro);
        rep.speed_with_mph.push_back(sw);
        rep.delay_ratio_with.push_back(rw);
        rep.speed_without_mph.push_back(so);
        rep.delay_ratio_without.push_back(ro);
    }

    auto overall = [](const LinkIntervalStats& st, double& speed, double& ratio) {
        double d = 0.0, t = 0.0, del = 0.0;
        for (int k = 0; k < st.intervals; ++k) {
            d += st.distance_mi[k];
            t += st.time_min[k];
            del += st.delay_min[k];
        }
        speed = t > 0.0 ? 60.0 * d / t : 0.0;
        ratio = t > 0.0 ? del / t : 0.0;
    };
    double sw, rw, so, ro;
    overall(with_shuttles, sw, rw);
    overall(without_shuttles, so, ro);
    rep.overall_speed_delta_mph = so - sw;
    rep.overall_delay_ratio_delta = rw - ro;
    return rep;
}

void save_impact_csv(const std::string& path, const ImpactReport& rep) {
    std::ofstream out = open_output(path);
    out << "interval_start_min,mean_speed_with,mean_speed_without,delay_ratio_with,delay_ratio_without\n";
    for (size_t k = 0; k < rep.interval_start_min.size(); ++k)
        out << fmt_double(rep.interval_start_min[k]) << "," << fmt_double(rep.speed_with_mph[k]) << ","
            << fmt_double(rep.speed_without_mph[k]) << "," << fmt_double(rep.delay_ratio_with[k]) << ","
            << fmt_double(rep.delay_ratio_without[k]) << "\n";
}

}  // namespace aods
