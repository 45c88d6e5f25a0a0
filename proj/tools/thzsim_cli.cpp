#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thzsim/config.hpp"
#include "thzsim/coverage.hpp"
#include "thzsim/errors.hpp"
#include "thzsim/simulation.hpp"
#include "thzsim/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRunFailure = 3;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed_base;
    std::optional<int> runs;
    std::string out_path;
    std::string trace_path;
    int threads = 0;
};

thzsim::RunConfig load_with_overrides(const CommonOpts& o) {
    thzsim::RunConfig cfg = thzsim::load_config_file(o.config_path);
    if (o.seed_base) cfg.seed_base = *o.seed_base;
    if (o.runs) cfg.runs = *o.runs;
    return cfg;
}

int emit_csv(const std::string& out_path,
             const std::vector<thzsim::SweepPointResult>& points) {
    bool any_failed = false;
    for (const auto& pt : points) any_failed |= pt.any_failed;
    if (out_path.empty()) {
        thzsim::write_results_csv(std::cout, points);
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "error: cannot open output file '" << out_path << "'\n";
            return kExitRunFailure;
        }
        thzsim::write_results_csv(f, points);
    }
    if (any_failed) {
        for (const auto& pt : points) {
            for (const auto& run : pt.runs) {
                if (run.failed) {
                    std::cerr << "run failure (seed " << run.seed << "): " << run.error
                              << "\n";
                }
            }
        }
        return kExitRunFailure;
    }
    return kExitOk;
}

// Serial execution with per-run event traces; CSV output matches run_sweep.
int do_traced_run(const thzsim::RunConfig& cfg, const CommonOpts& o) {
    thzsim::SweepPointResult pt;
    pt.protocol = cfg.protocol;
    pt.dynamic = cfg.dynamic;
    pt.n = cfg.n_ues;
    pt.p_bytes = cfg.mac.data_bytes;
    pt.q = cfg.mac.queue_capacity;
    std::vector<double> ps, s, lat;
    for (int r = 0; r < cfg.runs; ++r) {
        thzsim::SweepRun run;
        run.seed = cfg.seed_base + static_cast<std::uint64_t>(r);
        try {
            thzsim::SimConfig sc = thzsim::to_sim_config(cfg, run.seed);
            sc.trace_enabled = true;
            thzsim::Simulation sim(sc);
            run.result = sim.run();
            const std::string path =
                cfg.runs == 1 ? o.trace_path
                              : o.trace_path + "." + std::to_string(run.seed);
            sim.trace().write_csv_file(path);
            ps.push_back(run.result.p_s);
            s.push_back(run.result.throughput_bps);
            lat.push_back(run.result.avg_latency_s);
        } catch (const std::exception& e) {
            run.failed = true;
            run.error = e.what();
            pt.any_failed = true;
        }
        pt.runs.push_back(std::move(run));
    }
    pt.p_s = thzsim::summarize(ps);
    pt.s_bps = thzsim::summarize(s);
    pt.latency = thzsim::summarize(lat);
    return emit_csv(o.out_path, {pt});
}

std::vector<thzsim::RoutingMode> parse_protocols(const std::vector<std::string>& names) {
    std::vector<thzsim::RoutingMode> out;
    for (const std::string& n : names) {
        if (n == "ualoha") out.push_back(thzsim::RoutingMode::Ualoha);
        else if (n == "tl") out.push_back(thzsim::RoutingMode::TableLess);
        else if (n == "tb") out.push_back(thzsim::RoutingMode::TableBased);
        else throw thzsim::ConfigError("unknown protocol '" + n + "'");
    }
    return out;
}

std::vector<bool> parse_mobility(const std::vector<std::string>& names) {
    std::vector<bool> out;
    for (const std::string& n : names) {
        if (n == "static") out.push_back(false);
        else if (n == "dynamic") out.push_back(true);
        else throw thzsim::ConfigError("unknown mobility mode '" + n + "'");
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator of multi-hop sub-THz industrial networks"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<std::string> sweep_protocols, sweep_mobility;
    std::vector<int> sweep_n, sweep_p, sweep_q;
    double cov_resolution = 0.25, cov_height = 1.5;

    auto add_common = [&](CLI::App* sub, bool needs_out_axes) {
        sub->add_option("--config", opts.config_path, "Config file path")->required();
        sub->add_option("--seed-base", opts.seed_base, "Override [run] seed_base");
        sub->add_option("--runs", opts.runs, "Override [run] runs");
        sub->add_option("--out", opts.out_path, "Output CSV path (default stdout)");
        sub->add_option("--threads", opts.threads, "Worker threads (default: hardware)");
        (void)needs_out_axes;
    };

    CLI::App* run_cmd = app.add_subcommand("run", "Run a single configuration");
    add_common(run_cmd, false);
    run_cmd->add_option("--trace", opts.trace_path,
                        "Write per-run event trace CSV(s) to this path");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a sweep over axes");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--protocols", sweep_protocols, "ualoha,tl,tb")->delimiter(',');
    sweep_cmd->add_option("--mobility", sweep_mobility, "static,dynamic")->delimiter(',');
    sweep_cmd->add_option("--n", sweep_n, "UE counts")->delimiter(',');
    sweep_cmd->add_option("--p", sweep_p, "DATA payload bytes")->delimiter(',');
    sweep_cmd->add_option("--q", sweep_q, "Queue capacities")->delimiter(',');

    CLI::App* cov_cmd = app.add_subcommand("coverage", "Emit the uplink SNR grid");
    cov_cmd->add_option("--config", opts.config_path, "Config file path")->required();
    cov_cmd->add_option("--out", opts.out_path, "Output CSV path (default stdout)");
    cov_cmd->add_option("--resolution", cov_resolution, "Grid resolution, meters");
    cov_cmd->add_option("--height", cov_height, "Evaluation height, meters");

    CLI::App* val_cmd = app.add_subcommand("validate", "Parse and echo the config");
    val_cmd->add_option("--config", opts.config_path, "Config file path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (val_cmd->parsed()) {
            thzsim::RunConfig cfg = thzsim::load_config_file(opts.config_path);
            std::cout << thzsim::print_config(cfg);
            return kExitOk;
        }

        if (cov_cmd->parsed()) {
            thzsim::RunConfig cfg = thzsim::load_config_file(opts.config_path);
            if (cov_resolution <= 0) throw thzsim::ConfigError("resolution must be > 0");
            thzsim::Plant plant = thzsim::build_plant(cfg.plant_dims, cfg.machines);
            thzsim::ChannelModel ch;
            ch.params = cfg.radio;
            auto cells = thzsim::coverage_grid(plant, ch, cov_resolution, cov_height);
            if (opts.out_path.empty()) {
                thzsim::write_coverage_csv(std::cout, cells);
            } else {
                std::ofstream f(opts.out_path);
                if (!f) throw std::runtime_error("cannot open '" + opts.out_path + "'");
                thzsim::write_coverage_csv(f, cells);
            }
            return kExitOk;
        }

        thzsim::RunConfig cfg = load_with_overrides(opts);

        if (run_cmd->parsed()) {
            if (!opts.trace_path.empty()) return do_traced_run(cfg, opts);
            auto points = thzsim::run_sweep(cfg, thzsim::axes_from_config(cfg),
                                            opts.threads);
            return emit_csv(opts.out_path, points);
        }

        // sweep
        thzsim::SweepAxes axes = thzsim::axes_from_config(cfg);
        if (!sweep_protocols.empty()) axes.protocols = parse_protocols(sweep_protocols);
        if (!sweep_mobility.empty()) axes.mobility = parse_mobility(sweep_mobility);
        if (!sweep_n.empty()) axes.n_values = sweep_n;
        if (!sweep_p.empty()) axes.p_values = sweep_p;
        if (!sweep_q.empty()) axes.q_values = sweep_q;
        auto points = thzsim::run_sweep(cfg, axes, opts.threads);
        return emit_csv(opts.out_path, points);
    } catch (const thzsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }
}
