#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "aods/planner.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace aods;
using testsup::EdgeSpec;
using testsup::make_net;

namespace {

// Line of shuttle-permitted nodes 0..n-1, 0.5 mi apart, bidirectional.
RoadNetwork line_net(int n, double spacing = 0.5) {
    std::vector<EdgeSpec> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, spacing, 25.0, true, true, {}, true});
    RoadNetwork net;
    net.interval_minutes = 15.0;
    net.horizon_minutes = 780.0;
    for (int i = 0; i < n; ++i) net.nodes.push_back({i, i * spacing, 0.0});
    for (const EdgeSpec& s : edges) {
        Edge e;
        e.from = s.from;
        e.to = s.to;
        e.length_mi = s.length_mi;
        e.speed_mph = s.speed_mph;
        e.shuttle_ok = true;
        net.edges.push_back(e);
        std::swap(e.from, e.to);
        net.edges.push_back(e);
    }
    net.finalize();
    return net;
}

}  // namespace

TEST_CASE("kmeans degenerate cases") {
    SUBCASE("k equals number of distinct points") {
        std::vector<Point> pts{{0, 0}, {1, 0}, {2, 5}, {4, 4}};
        KMeansResult r = kmeans_cluster(pts, 4, 1);
        CHECK(r.within_ss == doctest::Approx(0.0));
        std::vector<Point> sorted = r.centroids;
        std::sort(sorted.begin(), sorted.end(), [](Point a, Point b) { return a.x < b.x; });
        for (size_t i = 0; i < pts.size(); ++i) {
            CHECK(sorted[i].x == doctest::Approx(pts[i].x));
            CHECK(sorted[i].y == doctest::Approx(pts[i].y));
        }
    }
    SUBCASE("all points identical, k = 1") {
        std::vector<Point> pts{{2, 3}, {2, 3}, {2, 3}};
        KMeansResult r = kmeans_cluster(pts, 1, 7);
        CHECK(r.centroids[0].x == doctest::Approx(2.0));
        CHECK(r.centroids[0].y == doctest::Approx(3.0));
        CHECK(r.within_ss == doctest::Approx(0.0));
    }
    SUBCASE("k larger than distinct points") {
        std::vector<Point> pts{{1, 1}, {1, 1}};
        CHECK_THROWS_AS(kmeans_cluster(pts, 2, 1), ValidationError);
    }
    SUBCASE("empty point set") {
        CHECK_THROWS_AS(kmeans_cluster({}, 1, 1), ValidationError);
    }
}

TEST_CASE("kmeans finds the minimum-variance 2-partition of two tight groups") {
    std::vector<Point> pts{{0.0, 0.1}, {0.2, 0.0}, {0.1, 0.2}, {5.0, 5.1}, {5.2, 5.0}, {5.1, 4.9}};
    KMeansResult r = kmeans_cluster(pts, 2, 42);
    std::vector<int> oracle_assign;
    double oracle_sse = oracles::brute_force_min_sse(pts, 2, &oracle_assign);
    CHECK(r.within_ss == doctest::Approx(oracle_sse).epsilon(1e-9));
    // Same partition: points 0-2 together, 3-5 together.
    CHECK(r.assignment[0] == r.assignment[1]);
    CHECK(r.assignment[1] == r.assignment[2]);
    CHECK(r.assignment[3] == r.assignment[4]);
    CHECK(r.assignment[4] == r.assignment[5]);
    CHECK(r.assignment[0] != r.assignment[3]);
}

TEST_CASE("kmeans never increases within-cluster variance across iterations") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Point> pts;
        int n = 10 + static_cast<int>(rng.uniform_index(30));
        for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)});
        int k = 1 + static_cast<int>(rng.uniform_index(4));

        // Re-run Lloyd step by step via increasing iteration caps; the SSE
        // sequence must be non-increasing.
        double prev = std::numeric_limits<double>::infinity();
        for (int iters = 1; iters <= 8; ++iters) {
            KMeansResult r = kmeans_cluster(pts, k, trial, iters);
            REQUIRE(r.within_ss <= prev + 1e-9);
            prev = r.within_ss;
        }
    }
}

TEST_CASE("snap_to_node") {
    RoadNetwork net = line_net(5);
    SUBCASE("coincident point") { CHECK(snap_to_node(net, {1.0, 0.0}) == 2); }
    SUBCASE("midpoint tie goes to the lower id") { CHECK(snap_to_node(net, {0.75, 0.0}) == 1); }
    SUBCASE("matches exhaustive scan") {
        Rng rng(5);
        for (int i = 0; i < 50; ++i) {
            Point p{rng.uniform(-1.0, 3.0), rng.uniform(-1.0, 1.0)};
            NodeId got = snap_to_node(net, p);
            NodeId want = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (const Node& n : net.nodes) {
                double dx = n.x_mi - p.x, dy = n.y_mi - p.y;
                double d = dx * dx + dy * dy;
                if (d < bd) {
                    bd = d;
                    want = n.id;
                }
            }
            REQUIRE(got == want);
        }
    }
    SUBCASE("only shuttle-permitted endpoints are eligible") {
        RoadNetwork net2 = make_net(3, {{0, 1, 1.0, 25.0, true, true, {}, true},
                                        {1, 2, 1.0, 25.0, false, true, {}, true}});
        // Point right on node 2, but node 2 touches no shuttle edge.
        CHECK(snap_to_node(net2, {2.0, 0.0}) == 1);
        CHECK(snap_to_any_node(net2, {2.0, 0.0}) == 2);
    }
}

TEST_CASE("coverage matrix") {
    RoadNetwork net = line_net(9, 0.25);  // 2 miles of street
    std::vector<Parcel> parcels;
    Rng rng(3);
    for (int i = 0; i < 60; ++i) {
        double x = rng.uniform(0.0, 2.0);
        parcels.push_back({i, x, rng.uniform(-0.05, 0.05)});
    }
    std::vector<int> ks{1, 2, 3, 4};
    std::vector<double> walks{1.0, 3.0, 6.0, 60.0};
    CoverageMatrix m = coverage_matrix_serial(net, parcels, ks, walks, 17);

    SUBCASE("non-decreasing in walk budget and saturates at 1.0") {
        for (size_t ki = 0; ki < ks.size(); ++ki) {
            for (size_t wi = 1; wi < walks.size(); ++wi) REQUIRE(m.at(ki, wi) >= m.at(ki, wi - 1));
            CHECK(m.at(ki, walks.size() - 1) == doctest::Approx(1.0));  // 60 min reaches everything
        }
    }
    SUBCASE("parallel kernel matches the serial reference") {
        CoverageMatrix p = coverage_matrix(net, parcels, ks, walks, 17);
        REQUIRE(p.ratios.size() == m.ratios.size());
        for (size_t i = 0; i < p.ratios.size(); ++i) REQUIRE(p.ratios[i] == m.ratios[i]);
    }
    SUBCASE("k = parcel count gives full coverage at small budgets") {
        // Each parcel its own cluster: centroid snaps next to the parcel.
        std::vector<Parcel> few(parcels.begin(), parcels.begin() + 5);
        // Walk budget must absorb snap distortion (<= 0.125 mi to the nearest
        // node, i.e. 2.5 min at 3 mph, each way).
        CoverageMatrix mm = coverage_matrix_serial(net, few, {5}, {6.0}, 17);
        CHECK(mm.at(0, 0) == doctest::Approx(1.0));
    }
}

TEST_CASE("place_depot") {
    RoadNetwork net = line_net(5);
    SUBCASE("single stop") { CHECK(place_depot(net, {3}) == 3); }
    SUBCASE("two stops symmetric about a node") { CHECK(place_depot(net, {1, 3}) == 2); }
    SUBCASE("matches brute-force nearest to the mean") {
        std::vector<NodeId> stops{0, 1, 2, 4};
        double mx = 0, my = 0;
        for (NodeId s : stops) {
            mx += net.node(s).x_mi;
            my += net.node(s).y_mi;
        }
        mx /= stops.size();
        my /= stops.size();
        NodeId want = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (const Node& n : net.nodes) {
            double dx = n.x_mi - mx, dy = n.y_mi - my;
            if (dx * dx + dy * dy < bd) {
                bd = dx * dx + dy * dy;
                want = n.id;
            }
        }
        CHECK(place_depot(net, stops) == want);
    }
    SUBCASE("empty stop list") { CHECK_THROWS_AS(place_depot(net, {}), ValidationError); }
}

TEST_CASE("stop plan validation") {
    RoadNetwork net = line_net(5);
    StopPlan plan;
    plan.shuttle_stops = {0, 2, 4};
    plan.transit_stops = {1};
    plan.depot = 2;
    plan.max_walk_min = 6.0;
    CHECK_NOTHROW(validate_stop_plan(net, plan));

    SUBCASE("duplicate shuttle stop") {
        plan.shuttle_stops = {0, 0};
        CHECK_THROWS_AS(validate_stop_plan(net, plan), ValidationError);
    }
    SUBCASE("stop off the shuttle subgraph") {
        RoadNetwork net2 = make_net(3, {{0, 1, 1.0, 25.0, true, true, {}, true},
                                        {1, 2, 1.0, 25.0, false, true, {}, true}});
        StopPlan p2;
        p2.shuttle_stops = {0, 2};
        p2.transit_stops = {1};
        p2.depot = 0;
        CHECK_THROWS_WITH_AS(validate_stop_plan(net2, p2), doctest::Contains("not on the shuttle subgraph"),
                             ValidationError);
    }
    SUBCASE("one-way-only shuttle subgraph is disconnected") {
        RoadNetwork net3 = make_net(3, {{0, 1}, {1, 2}, {2, 1}, {1, 0}, {0, 2}});  // 2 -> 0 missing
        StopPlan p3;
        p3.shuttle_stops = {0, 2};
        p3.transit_stops = {1};
        p3.depot = 0;
        CHECK_NOTHROW(validate_stop_plan(net3, p3));
        RoadNetwork net4 = make_net(3, {{0, 1}, {1, 2}, {2, 1}, {1, 0}});
        StopPlan p4 = p3;
        (void)p4;
        CHECK_NOTHROW(validate_stop_plan(net4, p3));  // still connected via 1
        RoadNetwork net5 = make_net(3, {{0, 1}, {1, 0}, {1, 2}});  // cannot get back from 2
        CHECK_THROWS_WITH_AS(validate_stop_plan(net5, p3), doctest::Contains("disconnected shuttle subgraph"),
                             ValidationError);
    }
}
