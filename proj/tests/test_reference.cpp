#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "aods/config.hpp"
#include "aods/demand.hpp"
#include "aods/network.hpp"
#include "aods/planner.hpp"
#include "test_support.hpp"

using namespace aods;

// The shipped study-area files carry the documented service layout.

TEST_CASE("reference network: 21.2-mile one-way shuttle route") {
    RoadNetwork net = load_network(testsup::data_path("network.json"));
    // Two-way segments appear as two directed edges; one-way ones as one.
    // One-way distance counts each roadway segment once.
    std::map<std::pair<int, int>, double> segments;
    for (const Edge& e : net.edges) {
        if (!e.shuttle_ok) continue;
        auto key = std::minmax(e.from, e.to);
        segments[{key.first, key.second}] = e.length_mi;
    }
    double route_mi = 0.0;
    for (auto& [seg, len] : segments) route_mi += len;
    CHECK(route_mi == doctest::Approx(21.2).epsilon(1e-9));
}

TEST_CASE("reference stop plan: 15 stops, 2 transit stops, valid and connected") {
    RoadNetwork net = load_network(testsup::data_path("network.json"));
    StopPlan plan = load_stop_plan(testsup::data_path("stop_plan.json"));
    CHECK(plan.shuttle_stops.size() == 15);
    CHECK(plan.transit_stops.size() == 2);
    CHECK(plan.max_walk_min == 6.0);
    CHECK_NOTHROW(validate_stop_plan(net, plan));

    ScenarioConfig base = load_scenario(testsup::data_path("scenario_base.json"));
    if (base.depot_override >= 0) {
        StopPlan adjusted = plan;
        adjusted.depot = base.depot_override;
        CHECK_NOTHROW(validate_stop_plan(net, adjusted));
    }
}

TEST_CASE("reference OD matrices tile the 13-hour horizon") {
    for (const char* f : {"od_present.json", "od_futuristic.json"}) {
        ODMatrix od = load_od(testsup::data_path(f));
        REQUIRE(od.intervals.size() == 13);
        CHECK(od.intervals.front().start_min == 0.0);
        CHECK(od.intervals.back().end_min == 780.0);
        int internal = 0, external = 0;
        for (const ODCentroid& c : od.centroids) (c.internal ? internal : external)++;
        CHECK(internal == 7);
        CHECK(external == 7);
    }
}

TEST_CASE("reference grid expands to the full 480-scenario set") {
    SweepGrid grid = load_grid(testsup::data_path("grid_full.json"));
    auto configs = expand_grid(grid);
    CHECK(configs.size() == 480);
    // 60 unique controller combinations per demand profile.
    std::set<std::tuple<int, double, double, int>> combos;
    for (const ScenarioConfig& c : configs)
        combos.insert({c.fleet_size, c.max_wait_min, c.detour_threshold, c.charging_points});
    CHECK(combos.size() == 60);
}
