// Command-line front end: stop planning, demand generation, single runs,
// scenario sweeps, traffic-impact comparisons, and figure-series emission.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "aods/config.hpp"
#include "aods/csv.hpp"
#include "aods/demand.hpp"
#include "aods/engine.hpp"
#include "aods/figures.hpp"
#include "aods/metrics.hpp"
#include "aods/network.hpp"
#include "aods/planner.hpp"
#include "aods/traffic.hpp"

namespace {

constexpr int kExitBadFlags = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitSimFault = 4;

std::string default_out() {
    const char* env = std::getenv("AODS_OUT_DIR");
    return env ? env : "out";
}

void ensure_fresh(const std::string& path, bool force) {
    if (!force && std::filesystem::exists(path))
        throw aods::ValidationError("output exists (use --force to overwrite): " + path);
}

struct PlanStopsArgs {
    std::string network, parcels, out;
    int k_min = 8, k_max = 24;
    double walk_min = 3.0, walk_max = 7.0;
    double target_walk = 6.0, target_coverage = 0.90;
    std::vector<int> transit_nodes;
    int depot_override = -1;
    uint64_t seed = 7;
    bool force = false;
};

int cmd_plan_stops(const PlanStopsArgs& a) {
    aods::RoadNetwork net = aods::load_network(a.network);
    auto parcels = aods::load_parcels(a.parcels);

    std::vector<int> ks;
    for (int k = a.k_min; k <= a.k_max; ++k) ks.push_back(k);
    std::vector<double> walks;
    for (double w = a.walk_min; w <= a.walk_max + 1e-9; w += 1.0) walks.push_back(w);

    aods::CoverageMatrix m = aods::coverage_matrix(net, parcels, ks, walks, a.seed);

    std::filesystem::create_directories(a.out);
    ensure_fresh(a.out + "/coverage_matrix.csv", a.force);
    aods::emit_coverage_figure(a.out + "/coverage_matrix.csv", m);

    // Operating plan: smallest stop count whose coverage at the configured
    // walk budget meets the target.
    size_t wi = 0;
    for (size_t i = 0; i < walks.size(); ++i)
        if (std::abs(walks[i] - a.target_walk) < 1e-9) wi = i;
    int chosen = -1;
    double chosen_coverage = 0.0;
    for (size_t ki = 0; ki < ks.size(); ++ki)
        if (m.at(ki, wi) >= a.target_coverage) {
            chosen = ks[ki];
            chosen_coverage = m.at(ki, wi);
            break;
        }
    if (chosen < 0) throw aods::ValidationError("no stop count in range reaches the coverage target");

    aods::StopPlan plan;
    plan.shuttle_stops = aods::place_stops(net, parcels, chosen, aods::splitmix64(a.seed ^ (1000ULL + chosen)));
    for (int t : a.transit_nodes) plan.transit_stops.push_back(t);
    if (plan.transit_stops.empty()) throw aods::ValidationError("at least one --transit node is required");
    std::vector<aods::NodeId> all = plan.shuttle_stops;
    all.insert(all.end(), plan.transit_stops.begin(), plan.transit_stops.end());
    plan.depot = a.depot_override >= 0 ? a.depot_override : aods::place_depot(net, all);
    plan.max_walk_min = a.target_walk;
    aods::validate_stop_plan(net, plan);

    ensure_fresh(a.out + "/stop_plan.json", a.force);
    aods::save_stop_plan(a.out + "/stop_plan.json", plan);
    std::printf("selected %d stops (coverage %.3f at %.0f min); plan written to %s\n", chosen, chosen_coverage,
                a.target_walk, (a.out + "/stop_plan.json").c_str());
    return 0;
}

int cmd_gen_demand(const std::string& od_file, const std::string& network, const std::string& plan_file,
                   double share, uint64_t seed, const std::string& out, bool force) {
    aods::RoadNetwork net = aods::load_network(network);
    aods::StopPlan plan = aods::load_stop_plan(plan_file);
    aods::validate_stop_plan(net, plan);
    aods::ODMatrix od = aods::load_od(od_file);
    auto reqs = aods::generate_requests(od, plan, net, share, seed);
    ensure_fresh(out, force);
    aods::save_requests(out, reqs);
    int fm = 0, lm = 0;
    for (const auto& r : reqs) (r.kind == aods::TripKind::FM ? fm : lm)++;
    std::printf("%d requests (%d FM, %d LM) written to %s\n", fm + lm, fm, lm, out.c_str());
    return 0;
}

int cmd_run(const std::string& config, const std::string& out, bool force) {
    aods::ScenarioConfig cfg = aods::load_scenario(config);
    ensure_fresh(out + "/metrics.json", force);
    aods::SimulationResult res = aods::run_scenario(cfg);
    aods::write_result_bundle(out, res);
    std::printf("accepted %d of %d requests (ratio %.3f); bundle in %s\n", res.metrics.rider.accepted_requests,
                res.metrics.rider.total_requests, res.metrics.rider.accepted_ratio, out.c_str());
    return 0;
}

int cmd_sweep(const std::string& grid_file, int jobs, const std::string& out, bool force, int seed_count) {
    aods::SweepGrid grid = aods::load_grid(grid_file);
    if (seed_count > 0) {
        grid.seeds.clear();
        for (int s = 1; s <= seed_count; ++s) grid.seeds.push_back(static_cast<uint64_t>(s));
    }
    auto configs = aods::expand_grid(grid);
    ensure_fresh(out + "/aggregate.csv", force);
    std::filesystem::create_directories(out);
    aods::SweepResult sweep = aods::run_sweep(configs, jobs, out);
    size_t failed = 0;
    for (const auto& r : sweep.runs)
        if (!r.ok) {
            ++failed;
            std::fprintf(stderr, "failed: %s: %s\n", r.cfg.cell_name().c_str(), r.error.c_str());
        }
    std::printf("%zu scenarios, %zu failed; results in %s\n", sweep.runs.size(), failed, out.c_str());
    return failed == 0 ? 0 : kExitSimFault;
}

int cmd_impact(const std::string& config, const std::string& out, bool force) {
    aods::ScenarioConfig cfg = aods::load_scenario(config);
    aods::RoadNetwork net = aods::load_network(cfg.network_file);
    net.shuttle_speed_cap_mph = cfg.shuttle_speed_cap_mph;
    aods::StopPlan plan = aods::load_stop_plan(cfg.stop_plan_file);
    aods::validate_stop_plan(net, plan);
    aods::ODMatrix od = aods::load_od(cfg.od_file);

    auto requests = aods::generate_requests(od, plan, net, cfg.transit_share, cfg.seed);
    aods::SimulationResult res = aods::run_scenario(cfg, net, plan, requests);
    aods::ShuttleWindows windows = aods::build_shuttle_windows(res.trajectories);

    auto with_shuttles = aods::simulate_background(net, od, &windows, cfg.seed, 0);
    auto without = aods::simulate_background(net, od, nullptr, cfg.seed, 0);
    aods::ImpactReport rep =
        aods::impact_report(aods::link_stats(net, with_shuttles), aods::link_stats(net, without));

    std::filesystem::create_directories(out);
    ensure_fresh(out + "/impact.csv", force);
    aods::save_impact_csv(out + "/impact.csv", rep);
    res.metrics.traffic.speed_delta_mph = rep.overall_speed_delta_mph;
    res.metrics.traffic.delay_ratio_delta = rep.overall_delay_ratio_delta;
    aods::write_result_bundle(out, res);
    std::printf("mean speed delta %.4f mph, delay ratio delta %.5f; series in %s/impact.csv\n",
                rep.overall_speed_delta_mph, rep.overall_delay_ratio_delta, out.c_str());
    return 0;
}

int cmd_emit_figures(const std::string& in, int fig, const std::string& out, bool force,
                     const std::string& aux_network) {
    std::filesystem::create_directories(out);
    auto path = [&](const std::string& name) {
        ensure_fresh(out + "/" + name, force);
        return out + "/" + name;
    };
    switch (fig) {
        case 2: {
            // `in` is a plan-stops output directory: re-emit its matrix.
            std::ifstream src(in + "/coverage_matrix.csv");
            if (!src) throw aods::ValidationError("no coverage_matrix.csv under " + in);
            std::ofstream dst(path("fig2_coverage.csv"));
            dst << src.rdbuf();
            return 0;
        }
        case 5: {
            // `in` is a requests CSV; aux gives the horizon via the network.
            aods::RoadNetwork net = aods::load_network(aux_network);
            aods::StopPlan plan;  // request kinds are not re-validated here
            std::vector<aods::TripRequest> reqs;
            {
                std::ifstream f(in);
                if (!f) throw aods::ValidationError("cannot open " + in);
                std::string line;
                std::getline(f, line);
                while (std::getline(f, line)) {
                    if (line.empty()) continue;
                    auto cols = aods::split_csv_line(line);
                    aods::TripRequest r;
                    r.id = static_cast<int>(aods::parse_long(cols[0], "id"));
                    r.request_min = aods::parse_double(cols[1], "request_min");
                    r.kind = cols[2] == "FM" ? aods::TripKind::FM : aods::TripKind::LM;
                    reqs.push_back(r);
                }
            }
            aods::emit_demand_figure(path("fig5_requests.csv"), reqs, net.horizon_minutes);
            return 0;
        }
        case 9:
        case 10:
        case 11:
        case 12: {
            auto cells = aods::aggregate_from_bundles(in);
            if (fig == 9) aods::emit_rider_figure(path("fig9_rider.csv"), cells);
            if (fig == 10) aods::emit_vehicle_figure(path("fig10_vehicle.csv"), cells);
            if (fig == 11) aods::emit_energy_figure(path("fig11_energy.csv"), cells);
            if (fig == 12) aods::emit_charging_figure(path("fig12_charging.csv"), cells);
            return 0;
        }
        case 13: {
            std::ifstream src(in + "/impact.csv");
            if (!src) throw aods::ValidationError("no impact.csv under " + in);
            std::ofstream dst(path("fig13_impact.csv"));
            dst << src.rdbuf();
            return 0;
        }
        default:
            throw aods::ValidationError("unknown figure: " + std::to_string(fig) +
                                        " (supported: 2, 5, 9, 10, 11, 12, 13)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Autonomous on-demand shuttle service simulator"};
    app.require_subcommand(1);

    // plan-stops
    PlanStopsArgs ps;
    auto* plan_cmd = app.add_subcommand("plan-stops", "Coverage matrix and stop plan from parcels");
    plan_cmd->add_option("--network", ps.network)->required();
    plan_cmd->add_option("--parcels", ps.parcels)->required();
    plan_cmd->add_option("--transit", ps.transit_nodes, "Transit stop node ids")->required();
    plan_cmd->add_option("--k-min", ps.k_min);
    plan_cmd->add_option("--k-max", ps.k_max);
    plan_cmd->add_option("--walk-min", ps.walk_min);
    plan_cmd->add_option("--walk-max", ps.walk_max);
    plan_cmd->add_option("--target-walk", ps.target_walk);
    plan_cmd->add_option("--target-coverage", ps.target_coverage);
    plan_cmd->add_option("--depot", ps.depot_override, "Explicit depot node override");
    plan_cmd->add_option("--seed", ps.seed);
    plan_cmd->add_option("--out", ps.out)->default_val(default_out());
    plan_cmd->add_flag("--force", ps.force);

    // gen-demand
    std::string gd_od, gd_net, gd_plan, gd_out;
    double gd_share = 0.01;
    uint64_t gd_seed = 1;
    bool gd_force = false;
    auto* gd_cmd = app.add_subcommand("gen-demand", "Generate trip requests from an OD matrix");
    gd_cmd->add_option("--od", gd_od)->required();
    gd_cmd->add_option("--network", gd_net)->required();
    gd_cmd->add_option("--plan", gd_plan)->required();
    gd_cmd->add_option("--share", gd_share, "Transit share of trips");
    gd_cmd->add_option("--seed", gd_seed);
    gd_cmd->add_option("--out", gd_out)->required();
    gd_cmd->add_flag("--force", gd_force);

    // run
    std::string run_cfg, run_out;
    bool run_force = false;
    auto* run_cmd = app.add_subcommand("run", "Run one scenario");
    run_cmd->add_option("--config", run_cfg)->required();
    run_cmd->add_option("--out", run_out)->default_val(default_out());
    run_cmd->add_flag("--force", run_force);

    // sweep
    std::string sw_grid, sw_out;
    int sw_jobs = 0;
    bool sw_force = false;
    int sw_seeds = 0;
    auto* sw_cmd = app.add_subcommand("sweep", "Run a scenario grid");
    sw_cmd->add_option("--grid", sw_grid)->required();
    sw_cmd->add_option("--jobs", sw_jobs, "Parallel scenarios (0 = hardware default)");
    sw_cmd->add_option("--seeds", sw_seeds, "Replication count: run seeds 1..N (0 = grid's own list)");
    sw_cmd->add_option("--out", sw_out)->default_val(default_out());
    sw_cmd->add_flag("--force", sw_force);

    // impact
    std::string im_cfg, im_out;
    bool im_force = false;
    auto* im_cmd = app.add_subcommand("impact", "Paired with/without-shuttle traffic runs");
    im_cmd->add_option("--config", im_cfg)->required();
    im_cmd->add_option("--out", im_out)->default_val(default_out());
    im_cmd->add_flag("--force", im_force);

    // emit-figures
    std::string ef_in, ef_out, ef_net;
    int ef_fig = 9;
    bool ef_force = false;
    auto* ef_cmd = app.add_subcommand("emit-figures", "Plot-ready CSV series from result bundles");
    ef_cmd->add_option("--in", ef_in)->required();
    ef_cmd->add_option("--fig", ef_fig)->required();
    ef_cmd->add_option("--network", ef_net, "Network file (figure 5 only)");
    ef_cmd->add_option("--out", ef_out)->default_val(default_out());
    ef_cmd->add_flag("--force", ef_force);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitBadFlags;
    }

    try {
        if (plan_cmd->parsed()) return cmd_plan_stops(ps);
        if (gd_cmd->parsed()) return cmd_gen_demand(gd_od, gd_net, gd_plan, gd_share, gd_seed, gd_out, gd_force);
        if (run_cmd->parsed()) return cmd_run(run_cfg, run_out, run_force);
        if (sw_cmd->parsed()) return cmd_sweep(sw_grid, sw_jobs, sw_out, sw_force, sw_seeds);
        if (im_cmd->parsed()) return cmd_impact(im_cfg, im_out, im_force);
        if (ef_cmd->parsed()) return cmd_emit_figures(ef_in, ef_fig, ef_out, ef_force, ef_net);
    } catch (const aods::ValidationError& ex) {
        std::fprintf(stderr, "input error: %s\n", ex.what());
        return kExitBadInput;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitSimFault;
    }
    return kExitBadFlags;
}
