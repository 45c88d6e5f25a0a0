#ifndef THZSIM_SWEEP_HPP
#define THZSIM_SWEEP_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "thzsim/config.hpp"
#include "thzsim/metrics.hpp"
#include "thzsim/simulation.hpp"

namespace thzsim {

/// Cartesian sweep axes; each vector must be non-empty. A plain run is a
/// sweep with one value per axis.
struct SweepAxes {
    std::vector<RoutingMode> protocols;
    std::vector<bool> mobility;  // false = static, true = dynamic
    std::vector<int> n_values;
    std::vector<int> p_values;   // DATA payload bytes
    std::vector<int> q_values;   // queue capacity
};

struct SweepRun {
    std::uint64_t seed = 0;
    SimResult result;
    bool failed = false;
    std::string error;
};

struct SweepPointResult {
    RoutingMode protocol = RoutingMode::Ualoha;
    bool dynamic = false;
    int n = 0, p_bytes = 0, q = 0;
    std::vector<SweepRun> runs;  // in seed order
    Summary p_s, s_bps, latency;
    bool any_failed = false;
};

SweepAxes axes_from_config(const RunConfig& cfg);

/// Runs every (point, seed) combination on a worker pool; results are merged
/// in deterministic (point, seed) order regardless of scheduling.
std::vector<SweepPointResult> run_sweep(const RunConfig& base, const SweepAxes& axes,
                                        int threads = 0);

/// Fixed-column results CSV. One row per run; two extra rows per point with
/// `mean` / `stddev` in the seed column; failed runs yield a marker row.
void write_results_csv(std::ostream& os, const std::vector<SweepPointResult>& points);

}  // namespace thzsim

#endif
