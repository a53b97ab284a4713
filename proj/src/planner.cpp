#include "aods/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

#include "aods/csv.hpp"

namespace aods {

namespace {

double sq_dist(Point a, Point b) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

int nearest_centroid(const std::vector<Point>& centroids, Point p) {
    int best = 0;
    double bd = sq_dist(centroids[0], p);
    for (size_t c = 1; c < centroids.size(); ++c) {
        double d = sq_dist(centroids[c], p);
        if (d < bd) {
            bd = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

size_t count_distinct(const std::vector<Point>& points) {
    std::set<std::pair<double, double>> s;
    for (Point p : points) s.emplace(p.x, p.y);
    return s.size();
}

}  // namespace

KMeansResult kmeans_cluster(const std::vector<Point>& points, int k, uint64_t seed, int max_iters) {
    if (points.empty()) throw ValidationError("kmeans: empty point set");
    if (k < 1) throw ValidationError("kmeans: k must be >= 1");
    if (static_cast<size_t>(k) > count_distinct(points))
        throw ValidationError("kmeans: k exceeds number of distinct points");

    Rng rng(seed);
    KMeansResult res;

    // k-means++ seeding: first centroid uniform, then proportional to the
    // squared distance from the nearest chosen centroid.
    res.centroids.push_back(points[rng.uniform_index(points.size())]);
    std::vector<double> d2(points.size());
    while (static_cast<int>(res.centroids.size()) < k) {
        double total = 0.0;
        for (size_t i = 0; i < points.size(); ++i) {
            double d = sq_dist(points[i], res.centroids[0]);
            for (size_t c = 1; c < res.centroids.size(); ++c) d = std::min(d, sq_dist(points[i], res.centroids[c]));
            d2[i] = d;
            total += d;
        }
        size_t pick;
        if (total <= 0.0) {
            pick = rng.uniform_index(points.size());
        } else {
            double r = rng.uniform() * total;
            double acc = 0.0;
            pick = points.size() - 1;
            for (size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
        }
        // Avoid duplicate seeds so every cluster starts distinct.
        bool dup = false;
        for (const Point& c : res.centroids)
            if (c.x == points[pick].x && c.y == points[pick].y) dup = true;
        if (dup) {
            for (size_t i = 0; i < points.size(); ++i)
                if (d2[i] > 0.0) {
                    pick = i;
                    break;
                }
        }
        res.centroids.push_back(points[pick]);
    }

    res.assignment.assign(points.size(), -1);
    for (res.iterations = 0; res.iterations < max_iters; ++res.iterations) {
        bool changed = false;
        for (size_t i = 0; i < points.size(); ++i) {
            int c = nearest_centroid(res.centroids, points[i]);
            if (c != res.assignment[i]) {
                res.assignment[i] = c;
                changed = true;
            }
        }
        if (!changed && res.iterations > 0) break;

        std::vector<Point> sums(k, Point{});
        std::vector<int> counts(k, 0);
        for (size_t i = 0; i < points.size(); ++i) {
            sums[res.assignment[i]].x += points[i].x;
            sums[res.assignment[i]].y += points[i].y;
            counts[res.assignment[i]]++;
        }
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0) res.centroids[c] = {sums[c].x / counts[c], sums[c].y / counts[c]};
        if (!changed) break;
    }

    res.within_ss = 0.0;
    for (size_t i = 0; i < points.size(); ++i) res.within_ss += sq_dist(points[i], res.centroids[res.assignment[i]]);
    return res;
}

namespace {

NodeId snap_impl(const RoadNetwork& net, Point p, bool shuttle_only) {
    NodeId best = 0;
    double bd = std::numeric_limits<double>::infinity();
    bool found = false;

    std::vector<char> eligible(net.nodes.size(), shuttle_only ? 0 : 1);
    if (shuttle_only)
        for (const Edge& e : net.edges)
            if (e.shuttle_ok) eligible[e.from] = eligible[e.to] = 1;

    for (size_t i = 0; i < net.nodes.size(); ++i) {
        if (!eligible[i]) continue;
        const Node& n = net.nodes[i];
        double d = sq_dist({n.x_mi, n.y_mi}, p);
        if (!found || d < bd || (d == bd && n.id < best)) {
            bd = d;
            best = n.id;
            found = true;
        }
    }
    if (!found) throw ValidationError("snap_to_node: network has no shuttle-permitted node");
    return best;
}

}  // namespace

NodeId snap_to_node(const RoadNetwork& net, Point p) { return snap_impl(net, p, true); }

NodeId snap_to_any_node(const RoadNetwork& net, Point p) { return snap_impl(net, p, false); }

std::vector<NodeId> place_stops(const RoadNetwork& net, const std::vector<Parcel>& parcels, int k, uint64_t seed) {
    std::vector<Point> pts;
    pts.reserve(parcels.size());
    for (const Parcel& p : parcels) pts.push_back({p.x_mi, p.y_mi});
    KMeansResult km = kmeans_cluster(pts, k, seed);

    std::vector<NodeId> stops;
    for (const Point& c : km.centroids) {
        NodeId n = snap_to_node(net, c);
        if (std::find(stops.begin(), stops.end(), n) == stops.end()) stops.push_back(n);
    }
    std::sort(stops.begin(), stops.end());
    return stops;
}

namespace {

void coverage_row(const RoadNetwork& net, const std::vector<Parcel>& parcels, const std::vector<int>& parcel_nodes,
                  int k, uint64_t seed, const std::vector<double>& walk_minutes, double* row) {
    std::vector<NodeId> stops = place_stops(net, parcels, k, splitmix64(seed ^ static_cast<uint64_t>(k)));
    std::vector<double> dist = walking_distances_from(net, stops);

    for (size_t w = 0; w < walk_minutes.size(); ++w) {
        double budget_mi = walk_minutes[w] * kWalkSpeedMph / 60.0;
        size_t covered = 0;
        for (int pn : parcel_nodes)
            if (dist[pn] <= budget_mi + 1e-12) ++covered;
        row[w] = static_cast<double>(covered) / static_cast<double>(parcels.size());
    }
}

CoverageMatrix coverage_impl(const RoadNetwork& net, const std::vector<Parcel>& parcels,
                             const std::vector<int>& stop_counts, const std::vector<double>& walk_minutes,
                             uint64_t seed, bool parallel) {
    if (stop_counts.empty() || walk_minutes.empty()) throw ValidationError("coverage_matrix: empty ranges");
    if (parcels.empty()) throw ValidationError("coverage_matrix: no parcels");

    std::vector<int> parcel_nodes(parcels.size());
    for (size_t i = 0; i < parcels.size(); ++i)
        parcel_nodes[i] = net.node_index(snap_to_any_node(net, {parcels[i].x_mi, parcels[i].y_mi}));

    CoverageMatrix m;
    m.stop_counts = stop_counts;
    m.walk_minutes = walk_minutes;
    m.ratios.assign(stop_counts.size() * walk_minutes.size(), 0.0);

    const int nk = static_cast<int>(stop_counts.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int ki = 0; ki < nk; ++ki)
            coverage_row(net, parcels, parcel_nodes, stop_counts[ki], seed, walk_minutes,
                         &m.ratios[ki * walk_minutes.size()]);
    } else {
        for (int ki = 0; ki < nk; ++ki)
            coverage_row(net, parcels, parcel_nodes, stop_counts[ki], seed, walk_minutes,
                         &m.ratios[ki * walk_minutes.size()]);
    }
    return m;
}

}  // namespace

CoverageMatrix coverage_matrix(const RoadNetwork& net, const std::vector<Parcel>& parcels,
                               const std::vector<int>& stop_counts, const std::vector<double>& walk_minutes,
                               uint64_t seed) {
    return coverage_impl(net, parcels, stop_counts, walk_minutes, seed, true);
}

CoverageMatrix coverage_matrix_serial(const RoadNetwork& net, const std::vector<Parcel>& parcels,
                                      const std::vector<int>& stop_counts, const std::vector<double>& walk_minutes,
                                      uint64_t seed) {
    return coverage_impl(net, parcels, stop_counts, walk_minutes, seed, false);
}

NodeId place_depot(const RoadNetwork& net, const std::vector<NodeId>& stop_nodes) {
    if (stop_nodes.empty()) throw ValidationError("place_depot: empty stop list");
    Point mean{};
    for (NodeId id : stop_nodes) {
        const Node& n = net.node(id);
        mean.x += n.x_mi;
        mean.y += n.y_mi;
    }
    mean.x /= static_cast<double>(stop_nodes.size());
    mean.y /= static_cast<double>(stop_nodes.size());
    return snap_to_node(net, mean);
}

std::vector<Parcel> load_parcels(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("parcels file is empty: " + path);
    std::vector<Parcel> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 3) throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 3 columns");
        Parcel p;
        p.id = static_cast<int>(parse_long(f[0], "id"));
        p.x_mi = parse_double(f[1], "x_mi");
        p.y_mi = parse_double(f[2], "y_mi");
        if (!std::isfinite(p.x_mi) || !std::isfinite(p.y_mi))
            throw ValidationError(path + ":" + std::to_string(lineno) + ": non-finite coordinate");
        out.push_back(p);
    }
    return out;
}

void save_parcels(const std::string& path, const std::vector<Parcel>& parcels) {
    std::ofstream out = open_output(path);
    out << "id,x_mi,y_mi\n";
    for (const Parcel& p : parcels) out << p.id << "," << fmt_double(p.x_mi) << "," << fmt_double(p.y_mi) << "\n";
}

StopPlan load_stop_plan(const std::string& path) {
    std::ifstream in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ValidationError("parse error in " + path + ": " + ex.what());
    }
    StopPlan plan;
    try {
        plan.shuttle_stops = j.at("shuttle_stops").get<std::vector<NodeId>>();
        plan.transit_stops = j.at("transit_stops").get<std::vector<NodeId>>();
        plan.depot = j.at("depot").get<NodeId>();
        plan.max_walk_min = j.at("max_walk_min").get<double>();
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError("schema error in " + path + ": " + ex.what());
    }
    return plan;
}

void save_stop_plan(const std::string& path, const StopPlan& plan) {
    nlohmann::json j{{"shuttle_stops", plan.shuttle_stops},
                     {"transit_stops", plan.transit_stops},
                     {"depot", plan.depot},
                     {"max_walk_min", plan.max_walk_min}};
    std::ofstream out = open_output(path);
    out << j.dump(1) << "\n";
}

void validate_stop_plan(const RoadNetwork& net, const StopPlan& plan) {
    if (plan.shuttle_stops.empty()) throw ValidationError("stop plan: no shuttle stops");
    if (plan.transit_stops.empty()) throw ValidationError("stop plan: no transit stops");

    std::set<NodeId> seen;
    for (NodeId s : plan.shuttle_stops)
        if (!seen.insert(s).second) throw ValidationError("stop plan: duplicate shuttle stop " + std::to_string(s));

    std::vector<char> on_shuttle(net.nodes.size(), 0);
    for (const Edge& e : net.edges)
        if (e.shuttle_ok) on_shuttle[e.from] = on_shuttle[e.to] = 1;
    auto check = [&](NodeId id, const char* what) {
        if (!on_shuttle[net.node_index(id)])
            throw ValidationError(std::string("stop plan: ") + what + " " + std::to_string(id) +
                                  " is not on the shuttle subgraph");
    };
    for (NodeId s : plan.shuttle_stops) check(s, "shuttle stop");
    for (NodeId s : plan.transit_stops) check(s, "transit stop");
    check(plan.depot, "depot");

    // Every stop and the depot must reach every other over shuttle-permitted
    // edges, both directions.
    auto reach = [&](bool forward) {
        std::vector<char> seen(net.nodes.size(), 0);
        std::vector<int> stack{net.node_index(plan.depot)};
        seen[stack.back()] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (const Edge& e : net.edges) {
                if (!e.shuttle_ok) continue;
                int a = forward ? e.from : e.to;
                int b = forward ? e.to : e.from;
                if (a == u && !seen[b]) {
                    seen[b] = 1;
                    stack.push_back(b);
                }
            }
        }
        return seen;
    };
    auto fwd = reach(true);
    auto bwd = reach(false);
    auto check_connected = [&](NodeId id, const char* what) {
        int v = net.node_index(id);
        if (!fwd[v] || !bwd[v])
            throw ValidationError(std::string("disconnected shuttle subgraph: ") + what + " " +
                                  std::to_string(id) + " cannot reach or be reached from the depot");
    };
    for (NodeId s : plan.shuttle_stops) check_connected(s, "shuttle stop");
    for (NodeId s : plan.transit_stops) check_connected(s, "transit stop");
}

}  // namespace aods
