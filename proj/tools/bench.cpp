// Wall-time comparison of the serial reference paths against the OpenMP
// kernels: coverage-matrix cells, background-traffic traversal, and the
// scenario sweep.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aods/config.hpp"
#include "aods/demand.hpp"
#include "aods/engine.hpp"
#include "aods/network.hpp"
#include "aods/planner.hpp"
#include "aods/traffic.hpp"

using namespace aods;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double timed(const char* label, F&& f) {
    auto t0 = Clock::now();
    f();
    double s = seconds_since(t0);
    std::printf("  %-28s %8.3f s\n", label, s);
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    std::string data = argc > 1 ? argv[1] : "data";
    int threads = 0;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("hardware threads in use: %d\n", threads);

    RoadNetwork net = load_network(data + "/network.json");
    StopPlan plan = load_stop_plan(data + "/stop_plan.json");
    auto parcels = load_parcels(data + "/parcels.csv");
    ODMatrix od = load_od(data + "/od_present.json");

    std::printf("coverage matrix (k = 8..24, w = 3..7):\n");
    std::vector<int> ks;
    for (int k = 8; k <= 24; ++k) ks.push_back(k);
    std::vector<double> walks{3, 4, 5, 6, 7};
    double t_serial = timed("serial reference", [&] { coverage_matrix_serial(net, parcels, ks, walks, 7); });
    double t_par = timed("OpenMP kernel", [&] { coverage_matrix(net, parcels, ks, walks, 7); });
    std::printf("  speedup %.2fx\n", t_serial / t_par);

    std::printf("background traversal (%s):\n", "present OD, ~25k vehicles");
    double b_serial = timed("serial reference", [&] { simulate_background(net, od, nullptr, 1, 1); });
    double b_par = timed("OpenMP kernel", [&] { simulate_background(net, od, nullptr, 1, 0); });
    std::printf("  speedup %.2fx\n", b_serial / b_par);

    std::printf("scenario sweep (8 cells):\n");
    std::vector<ScenarioConfig> grid;
    for (int fleet : {2, 3, 4, 5}) {
        for (uint64_t seed : {1, 2}) {
            ScenarioConfig cfg;
            cfg.fleet_size = fleet;
            cfg.seed = seed;
            cfg.network_file = data + "/network.json";
            cfg.stop_plan_file = data + "/stop_plan.json";
            cfg.od_file = data + "/od_present.json";
            grid.push_back(cfg);
        }
    }
    double s_serial = timed("serial reference", [&] { run_sweep(grid, 1); });
    double s_par = timed("OpenMP kernel", [&] { run_sweep(grid, threads > 0 ? threads : 2); });
    std::printf("  speedup %.2fx\n", s_serial / s_par);
    return 0;
}
