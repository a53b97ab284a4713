#include "aods/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>

#include "json.hpp"

#include "aods/csv.hpp"

namespace aods {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string edge_name(const RoadNetwork& net, const Edge& e) {
    return std::to_string(net.nodes[e.from].id) + "->" + std::to_string(net.nodes[e.to].id);
}

}  // namespace

int RoadNetwork::node_index(NodeId id) const {
    auto it = std::lower_bound(id_index_.begin(), id_index_.end(), std::pair<NodeId, int>{id, -1},
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it == id_index_.end() || it->first != id)
        throw ValidationError("unknown node id: " + std::to_string(id));
    return it->second;
}

void RoadNetwork::finalize() {
    if (nodes.empty()) throw ValidationError("network has no nodes");
    if (interval_minutes <= 0.0) throw ValidationError("interval_minutes must be positive");

    id_index_.clear();
    id_index_.reserve(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) id_index_.emplace_back(nodes[i].id, static_cast<int>(i));
    std::sort(id_index_.begin(), id_index_.end());
    for (size_t i = 1; i < id_index_.size(); ++i)
        if (id_index_[i].first == id_index_[i - 1].first)
            throw ValidationError("duplicate node id: " + std::to_string(id_index_[i].first));

    const int n = static_cast<int>(nodes.size());
    out_edges.assign(n, {});
    walk_adj.assign(n, {});
    for (size_t ei = 0; ei < edges.size(); ++ei) {
        Edge& e = edges[ei];
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
            throw ValidationError("dangling edge: node index out of range");
        if (e.length_mi <= 0.0) throw ValidationError("edge " + edge_name(*this, e) + ": length must be positive");
        if (e.speed_mph <= 0.0) throw ValidationError("edge " + edge_name(*this, e) + ": speed must be positive");

        if (e.profile.minutes.empty()) e.profile.minutes = {e.free_flow_min()};
        const auto& p = e.profile.minutes;
        for (size_t k = 0; k < p.size(); ++k) {
            if (p[k] < e.free_flow_min() - 1e-9)
                throw ValidationError("edge " + edge_name(*this, e) + ": profile entry " + std::to_string(k) +
                                      " below free-flow time");
            if (k + 1 < p.size() && p[k + 1] + interval_minutes < p[k] - 1e-9)
                throw ValidationError("non-FIFO profile on edge " + edge_name(*this, e) + " at interval " +
                                      std::to_string(k));
        }

        out_edges[e.from].push_back(static_cast<int>(ei));
        walk_adj[e.from].emplace_back(e.to, e.length_mi);
        walk_adj[e.to].emplace_back(e.from, e.length_mi);
    }

}

RoadNetwork load_network(const std::string& path) {
    std::ifstream in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ValidationError("parse error in " + path + ": " + ex.what());
    }

    RoadNetwork net;
    try {
        net.interval_minutes = j.at("interval_minutes").get<double>();
        net.horizon_minutes = j.at("horizon_minutes").get<double>();
        for (const auto& nj : j.at("nodes"))
            net.nodes.push_back({nj.at("id").get<NodeId>(), nj.at("x_mi").get<double>(), nj.at("y_mi").get<double>()});

        std::vector<std::pair<NodeId, NodeId>> endpoints;
        for (const auto& ej : j.at("edges")) {
            Edge e;
            e.length_mi = ej.at("length_mi").get<double>();
            e.speed_mph = ej.at("speed_mph").get<double>();
            e.shuttle_ok = ej.at("shuttle_ok").get<bool>();
            e.overtake_ok = ej.at("overtake_ok").get<bool>();
            if (ej.contains("profile")) e.profile.minutes = ej.at("profile").get<std::vector<double>>();
            endpoints.emplace_back(ej.at("from").get<NodeId>(), ej.at("to").get<NodeId>());
            net.edges.push_back(std::move(e));
        }

        // Resolve external ids to dense indices.
        std::vector<std::pair<NodeId, int>> ids;
        for (size_t i = 0; i < net.nodes.size(); ++i) ids.emplace_back(net.nodes[i].id, static_cast<int>(i));
        std::sort(ids.begin(), ids.end());
        auto lookup = [&](NodeId id) {
            auto it = std::lower_bound(ids.begin(), ids.end(), std::pair<NodeId, int>{id, -1},
                                       [](const auto& a, const auto& b) { return a.first < b.first; });
            if (it == ids.end() || it->first != id)
                throw ValidationError("dangling edge: unknown node id " + std::to_string(id));
            return it->second;
        };
        for (size_t i = 0; i < net.edges.size(); ++i) {
            net.edges[i].from = lookup(endpoints[i].first);
            net.edges[i].to = lookup(endpoints[i].second);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError("schema error in " + path + ": " + ex.what());
    }

    net.finalize();
    return net;
}

void save_network(const std::string& path, const RoadNetwork& net) {
    nlohmann::json j;
    j["interval_minutes"] = net.interval_minutes;
    j["horizon_minutes"] = net.horizon_minutes;
    j["nodes"] = nlohmann::json::array();
    for (const Node& n : net.nodes) j["nodes"].push_back({{"id", n.id}, {"x_mi", n.x_mi}, {"y_mi", n.y_mi}});
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : net.edges) {
        nlohmann::json ej{{"from", net.nodes[e.from].id}, {"to", net.nodes[e.to].id},
                          {"length_mi", e.length_mi},     {"speed_mph", e.speed_mph},
                          {"shuttle_ok", e.shuttle_ok},   {"overtake_ok", e.overtake_ok}};
        ej["profile"] = e.profile.minutes;
        j["edges"].push_back(std::move(ej));
    }
    std::ofstream out = open_output(path);
    out << j.dump(1) << "\n";
}

double profile_minutes_at(const RoadNetwork& net, const Edge& e, double entry_min) {
    const auto& p = e.profile.minutes;
    if (p.size() == 1) return p[0];
    double u = entry_min / net.interval_minutes;
    if (u <= 0.0) return p.front();
    auto k = static_cast<size_t>(u);
    if (k >= p.size() - 1) return p.back();
    double frac = u - static_cast<double>(k);
    return p[k] + (p[k + 1] - p[k]) * frac;
}

double edge_travel_minutes(const RoadNetwork& net, const Edge& e, double entry_min, TravelMode mode) {
    double t = profile_minutes_at(net, e, entry_min);
    if (mode == TravelMode::Shuttle) t = std::max(t, 60.0 * e.length_mi / net.shuttle_speed_cap_mph);
    return t;
}

namespace {

bool mode_allows(const Edge& e, TravelMode mode) { return mode == TravelMode::Background || e.shuttle_ok; }

// Departures after the horizon are legal: runs drain in-flight service past
// 19:00 and profile lookups hold their last value there.
void check_depart(const RoadNetwork& net, double depart_min) {
    if (!(depart_min >= 0.0))
        throw ValidationError("departure " + fmt_double(depart_min) + " outside horizon [0, " +
                              fmt_double(net.horizon_minutes) + "]");
}

// Compare node-id sequences lexicographically.
bool id_path_less(const RoadNetwork& net, const std::vector<int>& a, const std::vector<int>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        NodeId ia = net.nodes[a[i]].id;
        NodeId ib = net.nodes[b[i]].id;
        if (ia != ib) return ia < ib;
    }
    return a.size() < b.size();
}

}  // namespace

Path shortest_path(const RoadNetwork& net, NodeId origin, NodeId dest, double depart_min, TravelMode mode) {
    check_depart(net, depart_min);
    int src = net.node_index(origin);
    int dst = net.node_index(dest);

    Path result;
    result.depart_min = depart_min;
    result.arrive_min = depart_min;
    if (src == dst) return result;

    struct Entry {
        double arrive;
        double dist;
        std::vector<int> node_path;  // dense indices, starts at src
        std::vector<int> edge_path;
    };
    auto cmp = [&net](const Entry& a, const Entry& b) {
        if (a.arrive != b.arrive) return a.arrive > b.arrive;
        return id_path_less(net, b.node_path, a.node_path);
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> pq(cmp);
    std::vector<double> best(net.nodes.size(), kInf);
    std::vector<char> settled(net.nodes.size(), 0);

    pq.push({depart_min, 0.0, {src}, {}});
    best[src] = depart_min;

    while (!pq.empty()) {
        Entry cur = pq.top();
        pq.pop();
        int u = cur.node_path.back();
        if (settled[u]) continue;
        settled[u] = 1;
        if (u == dst) {
            result.edges = std::move(cur.edge_path);
            result.arrive_min = cur.arrive;
            result.distance_mi = cur.dist;
            return result;
        }
        for (int ei : net.out_edges[u]) {
            const Edge& e = net.edges[ei];
            if (!mode_allows(e, mode)) continue;
            int w = e.to;
            if (settled[w]) continue;
            double arr = cur.arrive + edge_travel_minutes(net, e, cur.arrive, mode);
            if (arr > best[w]) continue;
            best[w] = arr;
            Entry nxt;
            nxt.arrive = arr;
            nxt.dist = cur.dist + e.length_mi;
            nxt.node_path = cur.node_path;
            nxt.node_path.push_back(w);
            nxt.edge_path = cur.edge_path;
            nxt.edge_path.push_back(ei);
            pq.push(std::move(nxt));
        }
    }
    throw ValidationError("no path from " + std::to_string(origin) + " to " + std::to_string(dest) +
                          (mode == TravelMode::Shuttle ? " (shuttle mode)" : " (background mode)"));
}

ArrivalEstimate estimate_arrival(const RoadNetwork& net, NodeId origin, NodeId dest, double depart_min,
                                 TravelMode mode) {
    check_depart(net, depart_min);
    int src = net.node_index(origin);
    int dst = net.node_index(dest);
    if (src == dst) return {depart_min, 0.0};

    using Item = std::pair<double, int>;  // (arrival, node index); node id order == index order not assumed
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    std::vector<double> best(net.nodes.size(), kInf);
    std::vector<double> dist(net.nodes.size(), 0.0);
    std::vector<char> settled(net.nodes.size(), 0);
    best[src] = depart_min;
    pq.emplace(depart_min, src);

    while (!pq.empty()) {
        auto [arr, u] = pq.top();
        pq.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        if (u == dst) return {arr, dist[u]};
        for (int ei : net.out_edges[u]) {
            const Edge& e = net.edges[ei];
            if (!mode_allows(e, mode)) continue;
            int w = e.to;
            if (settled[w]) continue;
            double a2 = arr + edge_travel_minutes(net, e, arr, mode);
            if (a2 < best[w]) {
                best[w] = a2;
                dist[w] = dist[u] + e.length_mi;
                pq.emplace(a2, w);
            }
        }
    }
    throw ValidationError("no path from " + std::to_string(origin) + " to " + std::to_string(dest) +
                          (mode == TravelMode::Shuttle ? " (shuttle mode)" : " (background mode)"));
}

std::vector<double> walking_distances_from(const RoadNetwork& net, std::span<const NodeId> sources) {
    std::vector<double> dist(net.nodes.size(), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (NodeId id : sources) {
        int s = net.node_index(id);
        if (dist[s] > 0.0) {
            dist[s] = 0.0;
            pq.emplace(0.0, s);
        }
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (auto [w, len] : net.walk_adj[u]) {
            double d2 = d + len;
            if (d2 < dist[w]) {
                dist[w] = d2;
                pq.emplace(d2, w);
            }
        }
    }
    return dist;
}

double walking_distance_mi(const RoadNetwork& net, NodeId origin, NodeId dest) {
    int dst = net.node_index(dest);
    NodeId src[] = {origin};
    auto dist = walking_distances_from(net, src);
    if (dist[dst] == kInf)
        throw ValidationError("no walking path from " + std::to_string(origin) + " to " + std::to_string(dest));
    return dist[dst];
}

double walking_time_min(const RoadNetwork& net, NodeId origin, NodeId dest) {
    return walking_distance_mi(net, origin, dest) * 60.0 / kWalkSpeedMph;
}

std::vector<EdgeTransit> traverse_path(const RoadNetwork& net, std::span<const int> edges, double depart_min,
                                       TravelMode mode) {
    std::vector<EdgeTransit> out;
    out.reserve(edges.size());
    double t = depart_min;
    for (int ei : edges) {
        const Edge& e = net.edges[ei];
        double exit = t + edge_travel_minutes(net, e, t, mode);
        out.push_back({ei, t, exit});
        t = exit;
    }
    return out;
}

}  // namespace aods
