// Builds the reference scenario shipped under data/: a suburban grid with a
// 21.2-mile shuttle route, clustered parcels, stop plan, and the present and
// futuristic OD matrices whose 1% / 2% transit shares give exactly 125/123
// and 226/223 FM/LM requests.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "aods/common.hpp"
#include "aods/config.hpp"
#include "aods/demand.hpp"
#include "aods/network.hpp"
#include "aods/planner.hpp"

#include "json.hpp"

using namespace aods;

namespace {

constexpr int kCols = 21;  // x: 0 .. 2.0 mi
constexpr int kRows = 16;  // y: 0 .. 1.5 mi
constexpr double kSpacing = 0.1;

int node_id(int i, int j) { return j * kCols + i; }

struct Seg {
    int a, b;
    bool operator<(const Seg& o) const { return a != o.a ? a < o.a : b < o.b; }
};

Seg seg(int n1, int n2) { return {std::min(n1, n2), std::max(n1, n2)}; }

// Route pieces: horizontal run along row j from column i0 to i1, vertical run
// along column i from row j0 to j1.
void hseg(std::set<Seg>& out, int j, int i0, int i1) {
    for (int i = i0; i < i1; ++i) out.insert(seg(node_id(i, j), node_id(i + 1, j)));
}
void vseg(std::set<Seg>& out, int i, int j0, int j1) {
    for (int j = j0; j < j1; ++j) out.insert(seg(node_id(i, j), node_id(i, j + 1)));
}

std::set<Seg> shuttle_route() {
    std::set<Seg> r;
    for (int j : {3, 7, 11}) hseg(r, j, 0, 20);
    for (int i : {0, 10, 20}) vseg(r, i, 3, 11);
    for (int i : {2, 4, 6, 8, 14, 16, 18}) vseg(r, i, 1, 3);
    for (int i : {2, 4, 6, 14, 16, 18}) vseg(r, i, 11, 13);
    hseg(r, 1, 0, 20);
    hseg(r, 5, 0, 20);
    hseg(r, 9, 0, 20);
    hseg(r, 13, 0, 20);
    for (int i : {0, 20}) {
        vseg(r, i, 1, 3);
        vseg(r, i, 11, 13);
    }
    // storage yard spur along the north-east edge
    vseg(r, 10, 13, 15);
    vseg(r, 20, 13, 15);
    hseg(r, 15, 10, 20);
    return r;
}

bool collector(int i1, int j1, int i2, int j2) {
    if (j1 == j2) return j1 == 3 || j1 == 7 || j1 == 11;  // horizontal corridors
    return i1 == 0 || i1 == 5 || i1 == 10 || i1 == 15 || i1 == 20;
    (void)i2;
}

double gauss(double x) { return std::exp(-0.5 * x * x); }

// Congestion factor at clock minute t (0 = 06:00): AM and PM peaks.
double peak_factor(double t, bool is_collector) {
    double amp_am = is_collector ? 0.30 : 0.15;
    double amp_pm = is_collector ? 0.22 : 0.11;
    return 1.0 + amp_am * gauss((t - 105.0) / 70.0) + amp_pm * gauss((t - 675.0) / 80.0);
}

RoadNetwork build_network() {
    RoadNetwork net;
    net.interval_minutes = 15.0;
    net.horizon_minutes = 780.0;
    for (int j = 0; j < kRows; ++j)
        for (int i = 0; i < kCols; ++i) net.nodes.push_back({node_id(i, j), i * kSpacing, j * kSpacing});

    std::set<Seg> route = shuttle_route();
    if (route.size() != 212) throw std::logic_error("route is not 21.2 miles");

    auto add_segment = [&](int i1, int j1, int i2, int j2) {
        int a = node_id(i1, j1), b = node_id(i2, j2);
        bool on_route = route.count(seg(a, b)) > 0;
        bool coll = collector(i1, j1, i2, j2);
        Edge e;
        e.length_mi = kSpacing;
        e.speed_mph = 25.0;
        e.shuttle_ok = on_route;
        e.overtake_ok = coll;
        double ff = e.free_flow_min();
        for (int k = 0; k < 52; ++k) e.profile.minutes.push_back(ff * peak_factor(k * 15.0, coll));
        // Shuttles circulate one-way on the residential rows (eastbound on
        // rows 1 and 5, westbound on 9 and 13); cars use both directions.
        bool horizontal = j1 == j2;
        int oneway = 0;  // +1: only low-to-high column direction, -1: reverse
        if (on_route && horizontal && j1 == 1) oneway = +1;
        if (on_route && horizontal && (j1 == 9 || j1 == 13)) oneway = -1;
        e.from = a;
        e.to = b;
        if (oneway == -1) e.shuttle_ok = false;
        net.edges.push_back(e);
        std::swap(e.from, e.to);
        e.shuttle_ok = on_route;
        if (oneway == +1) e.shuttle_ok = false;
        net.edges.push_back(e);
    };
    for (int j = 0; j < kRows; ++j)
        for (int i = 0; i + 1 < kCols; ++i) add_segment(i, j, i + 1, j);
    for (int i = 0; i < kCols; ++i)
        for (int j = 0; j + 1 < kRows; ++j) add_segment(i, j, i, j + 1);

    // node indices equal ids here (dense row-major ids)
    for (Edge& e : net.edges) {
        e.from = e.from;  // already dense
        e.to = e.to;
    }
    net.finalize();
    return net;
}

std::vector<Parcel> build_parcels() {
    const std::pair<int, int> blobs[] = {{2, 1},  {4, 1},  {1, 3},  {2, 5},  {1, 11}, {2, 9},
                                         {2, 11}, {4, 13}, {2, 13}, {18, 1}, {16, 1}, {19, 3},
                                         {18, 5}, {19, 11}, {18, 9}, {18, 11}, {16, 13}, {18, 13}};
    Rng rng = Rng::stream(7, "parcels");
    std::vector<Parcel> parcels;
    int id = 1;
    for (size_t b = 0; b < std::size(blobs); ++b) {
        int count = b < 12 ? 167 : 166;  // 3000 total
        double cx = blobs[b].first * kSpacing;
        double cy = blobs[b].second * kSpacing;
        for (int p = 0; p < count; ++p) {
            double x = std::clamp(cx + 0.06 * rng.normal(), -0.05, 2.05);
            double y = std::clamp(cy + 0.06 * rng.normal(), -0.05, 1.55);
            parcels.push_back({id++, x, y});
        }
    }
    return parcels;
}

// Integer per-pair counts per interval summing exactly to the hourly totals.
std::vector<ODFlow> split_interval(double total, const std::vector<int>& from_ids,
                                   const std::vector<int>& to_ids, const std::vector<double>& wf,
                                   const std::vector<double>& wt) {
    std::vector<double> exact;
    for (size_t a = 0; a < from_ids.size(); ++a)
        for (size_t b = 0; b < to_ids.size(); ++b) exact.push_back(total * wf[a] * wt[b]);
    std::vector<long> counts = largest_remainder_counts(exact);
    std::vector<ODFlow> flows;
    size_t k = 0;
    for (size_t a = 0; a < from_ids.size(); ++a)
        for (size_t b = 0; b < to_ids.size(); ++b, ++k)
            if (counts[k] > 0) flows.push_back({from_ids[a], to_ids[b], static_cast<double>(counts[k])});
    return flows;
}

ODMatrix build_od(const std::vector<double>& out_h, const std::vector<double>& in_h) {
    const std::vector<int> internal = {node_id(3, 3),  node_id(10, 4), node_id(17, 3), node_id(4, 11),
                                       node_id(10, 12), node_id(16, 11), node_id(10, 7)};
    const std::vector<int> external = {node_id(0, 0),  node_id(6, 0),  node_id(14, 0), node_id(20, 0),
                                       node_id(3, 15), node_id(10, 15), node_id(17, 15)};
    const std::vector<double> wi = {0.20, 0.15, 0.15, 0.12, 0.14, 0.12, 0.12};
    const std::vector<double> we = {0.18, 0.16, 0.12, 0.18, 0.12, 0.14, 0.10};

    ODMatrix od;
    for (int c : internal) od.centroids.push_back({c, true});
    for (int c : external) od.centroids.push_back({c, false});
    for (size_t h = 0; h < out_h.size(); ++h) {
        ODInterval iv;
        iv.start_min = 60.0 * h;
        iv.end_min = 60.0 * (h + 1);
        auto out_flows = split_interval(out_h[h], internal, external, wi, we);
        auto in_flows = split_interval(in_h[h], external, internal, we, wi);
        iv.trips = out_flows;
        iv.trips.insert(iv.trips.end(), in_flows.begin(), in_flows.end());
        od.intervals.push_back(std::move(iv));
    }
    return od;
}

}  // namespace

int main(int argc, char** argv) {
    std::string out = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(out);

    RoadNetwork net = build_network();
    double route_mi = 0.0;
    for (const Edge& e : net.edges)
        if (e.shuttle_ok) route_mi += e.length_mi;
    route_mi /= 2.0;  // both directions counted
    std::printf("network: %zu nodes, %zu directed edges, shuttle route %.1f mi one-way\n", net.nodes.size(),
                net.edges.size(), route_mi);
    save_network(out + "/network.json", net);

    std::vector<Parcel> parcels = build_parcels();
    save_parcels(out + "/parcels.csv", parcels);

    StopPlan plan;
    plan.shuttle_stops = place_stops(net, parcels, 15, splitmix64(7 ^ 3015ULL));
    plan.transit_stops = {node_id(0, 7), node_id(20, 7)};
    std::vector<NodeId> all_stops = plan.shuttle_stops;
    all_stops.insert(all_stops.end(), plan.transit_stops.begin(), plan.transit_stops.end());
    plan.depot = place_depot(net, all_stops);
    plan.max_walk_min = 6.0;
    validate_stop_plan(net, plan);
    save_stop_plan(out + "/stop_plan.json", plan);
    std::printf("stop plan: %zu shuttle stops, depot at node %d\n", plan.shuttle_stops.size(), plan.depot);

    // Hourly internal->external and external->internal totals. The grand
    // sums pin the request totals: 1%% of 12500/12300 -> 125/123 and 2%% of
    // 11300/11150 -> 226/223.
    ODMatrix present = build_od({500, 1300, 1400, 1300, 900, 700, 650, 650, 700, 900, 1200, 1400, 900},
                                {450, 1150, 1300, 1200, 900, 750, 700, 700, 750, 950, 1250, 1350, 850});
    ODMatrix futur = build_od({800, 900, 950, 900, 870, 850, 850, 850, 870, 900, 900, 920, 740},
                              {800, 870, 900, 880, 850, 850, 850, 850, 850, 880, 900, 900, 770});
    save_od(out + "/od_present.json", present);
    save_od(out + "/od_futuristic.json", futur);

    for (auto [name, od, share] : {std::tuple{"present", &present, 0.01}, std::tuple{"futuristic", &futur, 0.02}}) {
        auto reqs = generate_requests(*od, plan, net, share, 1);
        int fm = 0, lm = 0;
        for (const auto& r : reqs) (r.kind == TripKind::FM ? fm : lm)++;
        std::printf("%s demand at %.0f%%: %d FM + %d LM requests\n", name, share * 100.0, fm, lm);
    }

    ScenarioConfig base;
    base.fleet_size = 3;
    base.max_wait_min = 8.0;
    base.detour_threshold = 1.0;
    base.charging_points = 1;
    base.demand_label = "present";
    base.transit_share = 0.01;
    base.seed = 1;
    base.depot_override = node_id(20, 15);  // storage yard at the area's north edge
    base.network_file = out + "/network.json";
    base.stop_plan_file = out + "/stop_plan.json";
    base.od_file = out + "/od_present.json";
    save_scenario(out + "/scenario_base.json", base);

    nlohmann::json grid{{"fleet_sizes", {2, 3, 4, 5, 6}},
                        {"max_waits_min", {6.0, 8.0, 10.0}},
                        {"detour_thresholds", {0.5, 1.0}},
                        {"charging_points", {1, 2}},
                        {"demands",
                         {{{"label", "present"}, {"od_file", out + "/od_present.json"}, {"transit_share", 0.01}},
                          {{"label", "futuristic"},
                           {"od_file", out + "/od_futuristic.json"},
                           {"transit_share", 0.02}}}},
                        {"seeds", {1, 2, 3, 4}},
                        {"base",
                         {{"network_file", out + "/network.json"},
                          {"stop_plan_file", out + "/stop_plan.json"},
                          {"depot_override", node_id(20, 15)},
                          {"horizon_min", 780.0}}}};
    std::ofstream(out + "/grid_full.json") << grid.dump(1) << "\n";

    // Coverage spot check at the operating point.
    CoverageMatrix cm = coverage_matrix_serial(net, parcels, {15}, {6.0}, 7);
    std::printf("coverage at k=15, 6 min walk: %.3f\n", cm.at(0, 0));
    return 0;
}
