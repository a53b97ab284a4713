#include "aods/demand.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "json.hpp"

#include "aods/csv.hpp"

namespace aods {

bool ODMatrix::is_internal(int id) const {
    for (const ODCentroid& c : centroids)
        if (c.id == id) return c.internal;
    throw ValidationError("unknown centroid id: " + std::to_string(id));
}

double ODMatrix::outgoing_internal(const ODInterval& iv) const {
    double total = 0.0;
    for (const ODFlow& f : iv.trips)
        if (is_internal(f.from) && !is_internal(f.to)) total += f.count;
    return total;
}

double ODMatrix::incoming_internal(const ODInterval& iv) const {
    double total = 0.0;
    for (const ODFlow& f : iv.trips)
        if (!is_internal(f.from) && is_internal(f.to)) total += f.count;
    return total;
}

ODMatrix load_od(const std::string& path) {
    std::ifstream in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ValidationError("parse error in " + path + ": " + ex.what());
    }
    ODMatrix od;
    try {
        for (const auto& cj : j.at("centroids"))
            od.centroids.push_back({cj.at("id").get<int>(), cj.at("internal").get<bool>()});
        for (const auto& ij : j.at("intervals")) {
            ODInterval iv;
            iv.start_min = ij.at("start_min").get<double>();
            iv.end_min = ij.at("end_min").get<double>();
            for (const auto& tj : ij.at("trips")) {
                ODFlow f{tj.at("from").get<int>(), tj.at("to").get<int>(), tj.at("count").get<double>()};
                if (f.count < 0.0) throw ValidationError("negative trip count in " + path);
                iv.trips.push_back(f);
            }
            od.intervals.push_back(std::move(iv));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError("schema error in " + path + ": " + ex.what());
    }
    if (od.intervals.empty()) throw ValidationError("OD matrix has no intervals: " + path);
    for (size_t i = 0; i < od.intervals.size(); ++i) {
        if (od.intervals[i].end_min <= od.intervals[i].start_min)
            throw ValidationError("OD interval " + std::to_string(i) + " is empty");
        if (i > 0 && od.intervals[i].start_min != od.intervals[i - 1].end_min)
            throw ValidationError("OD intervals do not tile the horizon at index " + std::to_string(i));
    }
    return od;
}

void save_od(const std::string& path, const ODMatrix& od) {
    nlohmann::json j;
    j["centroids"] = nlohmann::json::array();
    for (const ODCentroid& c : od.centroids) j["centroids"].push_back({{"id", c.id}, {"internal", c.internal}});
    j["intervals"] = nlohmann::json::array();
    for (const ODInterval& iv : od.intervals) {
        nlohmann::json ij{{"start_min", iv.start_min}, {"end_min", iv.end_min}};
        ij["trips"] = nlohmann::json::array();
        for (const ODFlow& f : iv.trips) ij["trips"].push_back({{"from", f.from}, {"to", f.to}, {"count", f.count}});
        j["intervals"].push_back(std::move(ij));
    }
    std::ofstream out = open_output(path);
    out << j.dump(1) << "\n";
}

std::vector<long> largest_remainder_counts(const std::vector<double>& exact) {
    double sum = std::accumulate(exact.begin(), exact.end(), 0.0);
    long total = std::lround(sum);
    std::vector<long> counts(exact.size());
    std::vector<std::pair<double, size_t>> rema(exact.size());
    long floored = 0;
    for (size_t i = 0; i < exact.size(); ++i) {
        counts[i] = static_cast<long>(std::floor(exact[i]));
        floored += counts[i];
        rema[i] = {exact[i] - std::floor(exact[i]), i};
    }
    std::stable_sort(rema.begin(), rema.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    long leftover = total - floored;
    for (size_t r = 0; leftover > 0 && r < rema.size(); ++r, --leftover) counts[rema[r].second]++;
    return counts;
}

namespace {

struct StopPair {
    NodeId origin;
    NodeId dest;
};

// All (shuttle stop, transit stop) pairs at least min_walk_mi apart, in the
// direction requested.
std::vector<StopPair> eligible_pairs(const RoadNetwork& net, const StopPlan& plan, TripKind kind,
                                     double min_walk_mi) {
    std::vector<StopPair> out;
    for (NodeId t : plan.transit_stops) {
        NodeId src[] = {t};
        std::vector<double> dist = walking_distances_from(net, src);
        for (NodeId s : plan.shuttle_stops) {
            if (dist[net.node_index(s)] >= min_walk_mi) {
                if (kind == TripKind::FM)
                    out.push_back({s, t});
                else
                    out.push_back({t, s});
            }
        }
    }
    // Fixed order so draws are reproducible regardless of plan file order.
    std::sort(out.begin(), out.end(), [](const StopPair& a, const StopPair& b) {
        return a.origin != b.origin ? a.origin < b.origin : a.dest < b.dest;
    });
    return out;
}

}  // namespace

std::vector<TripRequest> generate_requests(const ODMatrix& od, const StopPlan& plan, const RoadNetwork& net,
                                           double transit_share, uint64_t seed) {
    if (transit_share < 0.0 || transit_share > 1.0)
        throw ValidationError("transit share must lie in [0, 1]");

    std::vector<TripRequest> requests;
    if (transit_share == 0.0) return requests;

    auto fm_pairs = eligible_pairs(net, plan, TripKind::FM, 1.0);
    auto lm_pairs = eligible_pairs(net, plan, TripKind::LM, 1.0);
    if (fm_pairs.empty() || lm_pairs.empty())
        throw ValidationError("no eligible stop pair at least 1 mile of walking apart");

    std::vector<double> fm_exact, lm_exact;
    for (const ODInterval& iv : od.intervals) {
        fm_exact.push_back(transit_share * od.outgoing_internal(iv));
        lm_exact.push_back(transit_share * od.incoming_internal(iv));
    }
    std::vector<long> fm_counts = largest_remainder_counts(fm_exact);
    std::vector<long> lm_counts = largest_remainder_counts(lm_exact);

    // Separate named streams: request times and spatial stop assignment can
    // be varied independently without perturbing each other's draws.
    Rng time_rng = Rng::stream(seed, "demand");
    Rng assign_rng = Rng::stream(seed, "assignment");
    for (size_t i = 0; i < od.intervals.size(); ++i) {
        const ODInterval& iv = od.intervals[i];
        for (long n = 0; n < fm_counts[i]; ++n) {
            const StopPair& p = fm_pairs[assign_rng.uniform_index(fm_pairs.size())];
            requests.push_back({0, time_rng.uniform(iv.start_min, iv.end_min), TripKind::FM, p.origin, p.dest, 1});
        }
        for (long n = 0; n < lm_counts[i]; ++n) {
            const StopPair& p = lm_pairs[assign_rng.uniform_index(lm_pairs.size())];
            requests.push_back({0, time_rng.uniform(iv.start_min, iv.end_min), TripKind::LM, p.origin, p.dest, 1});
        }
    }

    std::stable_sort(requests.begin(), requests.end(),
                     [](const TripRequest& a, const TripRequest& b) { return a.request_min < b.request_min; });
    for (size_t i = 0; i < requests.size(); ++i) requests[i].id = static_cast<int>(i + 1);
    return requests;
}

namespace {

void validate_request(const TripRequest& r, const RoadNetwork& net, const StopPlan& plan,
                      const std::string& where) {
    if (r.origin == r.dest) throw ValidationError(where + ": origin equals destination");
    if (r.party < 1) throw ValidationError(where + ": party size must be >= 1");
    if (r.request_min < 0.0 || r.request_min > net.horizon_minutes)
        throw ValidationError(where + ": request time outside horizon");

    auto is_in = [](const std::vector<NodeId>& v, NodeId id) {
        return std::find(v.begin(), v.end(), id) != v.end();
    };
    bool ok = r.kind == TripKind::FM
                  ? is_in(plan.shuttle_stops, r.origin) && is_in(plan.transit_stops, r.dest)
                  : is_in(plan.transit_stops, r.origin) && is_in(plan.shuttle_stops, r.dest);
    if (!ok) throw ValidationError(where + ": stop does not match request kind");
    if (walking_distance_mi(net, r.origin, r.dest) < 1.0 - 1e-9)
        throw ValidationError(where + ": origin and destination closer than 1 mile");
}

}  // namespace

std::vector<TripRequest> load_requests(const std::string& path, const RoadNetwork& net, const StopPlan& plan) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("requests file is empty: " + path);
    std::vector<TripRequest> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        std::string where = path + ":" + std::to_string(lineno);
        if (f.size() != 6) throw ValidationError(where + ": expected 6 columns");
        TripRequest r;
        r.id = static_cast<int>(parse_long(f[0], "id"));
        r.request_min = parse_double(f[1], "request_min");
        if (f[2] == "FM")
            r.kind = TripKind::FM;
        else if (f[2] == "LM")
            r.kind = TripKind::LM;
        else
            throw ValidationError(where + ": kind must be FM or LM");
        r.origin = static_cast<NodeId>(parse_long(f[3], "origin_node"));
        r.dest = static_cast<NodeId>(parse_long(f[4], "dest_node"));
        r.party = static_cast<int>(parse_long(f[5], "party_size"));
        validate_request(r, net, plan, where);
        out.push_back(r);
    }
    return out;
}

void save_requests(const std::string& path, const std::vector<TripRequest>& requests) {
    std::ofstream out = open_output(path);
    out << "id,request_min,kind,origin_node,dest_node,party_size\n";
    for (const TripRequest& r : requests)
        out << r.id << "," << fmt_double(r.request_min) << "," << (r.kind == TripKind::FM ? "FM" : "LM") << ","
            << r.origin << "," << r.dest << "," << r.party << "\n";
}

}  // namespace aods
