#include "thzsim/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>

namespace thzsim {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

SweepAxes axes_from_config(const RunConfig& cfg) {
    SweepAxes a;
    a.protocols = {cfg.protocol};
    a.mobility = {cfg.dynamic};
    a.n_values = {cfg.n_ues};
    a.p_values = {cfg.mac.data_bytes};
    a.q_values = {cfg.mac.queue_capacity};
    return a;
}

std::vector<SweepPointResult> run_sweep(const RunConfig& base, const SweepAxes& axes,
                                        int threads) {
    std::vector<SweepPointResult> points;
    for (RoutingMode proto : axes.protocols) {
        for (bool dyn : axes.mobility) {
            for (int n : axes.n_values) {
                for (int p : axes.p_values) {
                    for (int q : axes.q_values) {
                        SweepPointResult pt;
                        pt.protocol = proto;
                        pt.dynamic = dyn;
                        pt.n = n;
                        pt.p_bytes = p;
                        pt.q = q;
                        pt.runs.resize(base.runs);
                        for (int r = 0; r < base.runs; ++r) {
                            pt.runs[r].seed = base.seed_base + static_cast<std::uint64_t>(r);
                        }
                        points.push_back(std::move(pt));
                    }
                }
            }
        }
    }

    const std::size_t total = points.size() * static_cast<std::size_t>(base.runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            SweepPointResult& pt = points[task / base.runs];
            SweepRun& run = pt.runs[task % base.runs];
            try {
                RunConfig cfg = base;
                cfg.protocol = pt.protocol;
                cfg.dynamic = pt.dynamic;
                cfg.n_ues = pt.n;
                cfg.mac.data_bytes = pt.p_bytes;
                cfg.mac.queue_capacity = pt.q;
                Simulation sim(to_sim_config(cfg, run.seed));
                run.result = sim.run();
            } catch (const std::exception& e) {
                run.failed = true;
                run.error = e.what();
            }
        }
    };

    int nthreads = threads > 0 ? threads
                               : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    if (static_cast<std::size_t>(nthreads) > total) nthreads = static_cast<int>(total);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    for (SweepPointResult& pt : points) {
        std::vector<double> ps, s, lat;
        for (const SweepRun& run : pt.runs) {
            if (run.failed) {
                pt.any_failed = true;
                continue;
            }
            ps.push_back(run.result.p_s);
            s.push_back(run.result.throughput_bps);
            lat.push_back(run.result.avg_latency_s);
        }
        pt.p_s = summarize(ps);
        pt.s_bps = summarize(s);
        pt.latency = summarize(lat);
    }
    return points;
}

void write_results_csv(std::ostream& os, const std::vector<SweepPointResult>& points) {
    os << "protocol,mobility,N,P_bytes,Q,seed,p_s,S_bps,L_avg_s,N_R,discarded\n";
    for (const SweepPointResult& pt : points) {
        const std::string prefix = std::string(routing_mode_name(pt.protocol)) + ',' +
                                   (pt.dynamic ? "dynamic" : "static") + ',' +
                                   std::to_string(pt.n) + ',' + std::to_string(pt.p_bytes) +
                                   ',' + std::to_string(pt.q) + ',';
        double nr_sum = 0, disc_sum = 0;
        int ok = 0;
        for (const SweepRun& run : pt.runs) {
            if (run.failed) {
                os << prefix << run.seed << ",failed,failed,failed,0,0\n";
                continue;
            }
            const SimResult& r = run.result;
            os << prefix << run.seed << ',' << fmt(r.p_s) << ',' << fmt(r.throughput_bps)
               << ',' << fmt(r.avg_latency_s) << ',' << r.n_r << ',' << r.discarded
               << '\n';
            nr_sum += static_cast<double>(r.n_r);
            disc_sum += static_cast<double>(r.discarded);
            ++ok;
        }
        if (ok > 0) {
            os << prefix << "mean," << fmt(pt.p_s.mean) << ',' << fmt(pt.s_bps.mean) << ','
               << fmt(pt.latency.mean) << ',' << fmt(nr_sum / ok) << ','
               << fmt(disc_sum / ok) << '\n';
            os << prefix << "stddev," << fmt(pt.p_s.stddev) << ',' << fmt(pt.s_bps.stddev)
               << ',' << fmt(pt.latency.stddev) << ",0,0\n";
        }
    }
}

}  // namespace thzsim
