#include "aods/figures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "json.hpp"

#include "aods/csv.hpp"

namespace aods {

void emit_coverage_figure(const std::string& path, const CoverageMatrix& m) {
    std::ofstream out = open_output(path);
    out << "stops";
    for (double w : m.walk_minutes) out << ",walk_" << fmt_double(w) << "_min";
    out << "\n";
    for (size_t ki = 0; ki < m.stop_counts.size(); ++ki) {
        out << m.stop_counts[ki];
        for (size_t wi = 0; wi < m.walk_minutes.size(); ++wi) out << "," << fmt_double(m.at(ki, wi));
        out << "\n";
    }
}

void emit_demand_figure(const std::string& path, const std::vector<TripRequest>& requests, double horizon_min) {
    int hours = static_cast<int>(std::ceil(horizon_min / 60.0));
    std::vector<int> fm(hours, 0), lm(hours, 0);
    for (const TripRequest& r : requests) {
        int h = std::min(static_cast<int>(r.request_min / 60.0), hours - 1);
        (r.kind == TripKind::FM ? fm : lm)[h]++;
    }
    std::ofstream out = open_output(path);
    out << "hour_start_min,fm_requests,lm_requests\n";
    for (int h = 0; h < hours; ++h) out << h * 60 << "," << fm[h] << "," << lm[h] << "\n";
}

namespace {

void emit_cells(const std::string& path, const std::vector<SweepCellStats>& cells,
                const std::vector<std::pair<std::string, const SweepCellStats::Stat SweepCellStats::*>>& fields) {
    std::ofstream out = open_output(path);
    out << "demand,max_wait_min,fleet_size";
    for (const auto& [name, _] : fields) out << "," << name << "_mean," << name << "_std";
    out << "\n";
    std::vector<const SweepCellStats*> sorted;
    for (const auto& c : cells) sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(), [](const SweepCellStats* a, const SweepCellStats* b) {
        if (a->demand_label != b->demand_label) return a->demand_label < b->demand_label;
        if (a->max_wait_min != b->max_wait_min) return a->max_wait_min < b->max_wait_min;
        return a->fleet_size < b->fleet_size;
    });
    for (const SweepCellStats* c : sorted) {
        out << c->demand_label << "," << fmt_double(c->max_wait_min) << "," << c->fleet_size;
        for (const auto& [_, member] : fields) {
            const auto& st = c->*member;
            out << "," << fmt_double(st.mean) << "," << fmt_double(st.stddev);
        }
        out << "\n";
    }
}

}  // namespace

void emit_rider_figure(const std::string& path, const std::vector<SweepCellStats>& cells) {
    emit_cells(path, cells,
               {{"accepted_ratio", &SweepCellStats::accepted_ratio},
                {"median_wait_min", &SweepCellStats::median_wait_min},
                {"trip_walk_ratio", &SweepCellStats::trip_walk_ratio}});
}

void emit_vehicle_figure(const std::string& path, const std::vector<SweepCellStats>& cells) {
    emit_cells(path, cells,
               {{"total_distance_mi", &SweepCellStats::total_distance_mi},
                {"empty_ratio", &SweepCellStats::empty_ratio},
                {"idle_ratio", &SweepCellStats::idle_ratio},
                {"capacity_utilization", &SweepCellStats::capacity_utilization}});
}

void emit_energy_figure(const std::string& path, const std::vector<SweepCellStats>& cells) {
    emit_cells(path, cells, {{"energy_kwh", &SweepCellStats::energy_kwh}});
}

void emit_charging_figure(const std::string& path, const std::vector<SweepCellStats>& cells) {
    emit_cells(path, cells,
               {{"charger_utilization", &SweepCellStats::charger_utilization},
                {"inactive_wait_ratio", &SweepCellStats::inactive_wait_ratio}});
}

void emit_impact_figure(const std::string& path, const ImpactReport& report) { save_impact_csv(path, report); }

std::vector<SweepCellStats> aggregate_from_bundles(const std::string& sweep_dir) {
    struct Key {
        int fleet;
        double wait;
        std::string demand;
        bool operator<(const Key& o) const {
            if (fleet != o.fleet) return fleet < o.fleet;
            if (wait != o.wait) return wait < o.wait;
            return demand < o.demand;
        }
    };
    struct Raw {
        std::vector<double> accepted, wait, trip_walk, dist, empty, idle, cap, energy, charger, inactive;
        int runs = 0;
    };
    std::map<Key, Raw> cells;

    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(sweep_dir))
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "metrics.json"))
            dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw ValidationError("no result bundles under " + sweep_dir);

    for (const auto& dir : dirs) {
        std::ifstream in = open_input((dir / "metrics.json").string());
        nlohmann::json j;
        in >> j;
        MetricsReport m = load_metrics((dir / "metrics.json").string());
        const auto& cj = j.at("config");
        Key key{cj.at("fleet_size").get<int>(), cj.at("max_wait_min").get<double>(),
                cj.at("demand").get<std::string>()};
        Raw& raw = cells[key];
        raw.runs++;
        raw.accepted.push_back(m.rider.accepted_ratio);
        if (m.rider.median_wait_min) raw.wait.push_back(*m.rider.median_wait_min);
        if (m.rider.median_trip_walk_ratio) raw.trip_walk.push_back(*m.rider.median_trip_walk_ratio);
        raw.dist.push_back(m.vehicle.total_distance_mi);
        raw.empty.push_back(m.vehicle.empty_ratio);
        raw.idle.push_back(m.vehicle.idle_ratio);
        if (m.vehicle.capacity_utilization) raw.cap.push_back(*m.vehicle.capacity_utilization);
        raw.energy.push_back(m.energy.total_consumption_kwh);
        raw.charger.push_back(m.energy.charger_utilization);
        if (m.energy.inactive_wait_ratio) raw.inactive.push_back(*m.energy.inactive_wait_ratio);
    }

    std::vector<SweepCellStats> out;
    for (const auto& [key, raw] : cells) {
        SweepCellStats c;
        c.fleet_size = key.fleet;
        c.max_wait_min = key.wait;
        c.demand_label = key.demand;
        c.runs = raw.runs;
        c.accepted_ratio = mean_stddev(raw.accepted);
        c.median_wait_min = mean_stddev(raw.wait);
        c.trip_walk_ratio = mean_stddev(raw.trip_walk);
        c.total_distance_mi = mean_stddev(raw.dist);
        c.empty_ratio = mean_stddev(raw.empty);
        c.idle_ratio = mean_stddev(raw.idle);
        c.capacity_utilization = mean_stddev(raw.cap);
        c.energy_kwh = mean_stddev(raw.energy);
        c.charger_utilization = mean_stddev(raw.charger);
        c.inactive_wait_ratio = mean_stddev(raw.inactive);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace aods
