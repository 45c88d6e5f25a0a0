#ifndef THZSIM_METRICS_HPP
#define THZSIM_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "thzsim/packet.hpp"
#include "thzsim/time.hpp"

namespace thzsim {

/// Per-run KPI bookkeeping. Counts are per originating UE:
///   n_tx = distinct originated DATA transmitted at least once,
///   n_rx = distinct own DATA accepted (deduplicated) at the sink,
///   discarded = own DATA dropped after retry exhaustion.
/// Latency is recorded once per packet, first resolution wins.
class KpiAccumulator {
public:
    explicit KpiAccumulator(int n_ues)
        : n_tx_(n_ues, 0), n_rx_(n_ues, 0), discarded_(n_ues, 0),
          latency_sum_(n_ues, 0.0), latency_count_(n_ues, 0) {}

    void note_generated(const PacketId& id, SimTime t) { meta_[id].gen_time = t; }

    void note_transmitted(const PacketId& id) {
        Meta& m = meta_.at(id);
        if (m.transmitted) return;
        m.transmitted = true;
        n_tx_[id.origin] += 1;
    }

    /// First (deduplicated) acceptance of this id at the sink.
    void note_bs_accept(const PacketId& id) { n_rx_[id.origin] += 1; }

    bool latency_recorded(const PacketId& id) const {
        auto it = meta_.find(id);
        return it != meta_.end() && it->second.latency_done;
    }

    void note_latency(const PacketId& id, double seconds) {
        Meta& m = meta_.at(id);
        if (m.latency_done) return;
        m.latency_done = true;
        latency_sum_[id.origin] += seconds;
        latency_count_[id.origin] += 1;
    }

    void note_discarded(const PacketId& id) { discarded_[id.origin] += 1; }

    SimTime generation_time(const PacketId& id) const { return meta_.at(id).gen_time; }

    /// Mean over UEs of the per-UE delivery ratio n_rx / n_tx.
    double success_probability() const {
        double acc = 0;
        for (std::size_t j = 0; j < n_tx_.size(); ++j) {
            if (n_tx_[j] > 0) acc += double(n_rx_[j]) / double(n_tx_[j]);
        }
        return n_tx_.empty() ? 0.0 : acc / double(n_tx_.size());
    }

    double throughput_bps(int data_bytes, double t_sim_s) const {
        return 8.0 * data_bytes * double(unique_received()) / t_sim_s;
    }

    /// Mean over UEs (with at least one sample) of the per-UE mean latency.
    double average_latency_s() const {
        double acc = 0;
        int ues = 0;
        for (std::size_t j = 0; j < latency_sum_.size(); ++j) {
            if (latency_count_[j] == 0) continue;
            acc += latency_sum_[j] / double(latency_count_[j]);
            ++ues;
        }
        return ues == 0 ? 0.0 : acc / ues;
    }

    std::uint64_t unique_received() const {
        std::uint64_t s = 0;
        for (std::uint64_t v : n_rx_) s += v;
        return s;
    }

    std::uint64_t total_discarded() const {
        std::uint64_t s = 0;
        for (std::uint64_t v : discarded_) s += v;
        return s;
    }

    const std::vector<std::uint64_t>& per_ue_tx() const { return n_tx_; }
    const std::vector<std::uint64_t>& per_ue_rx() const { return n_rx_; }

private:
    struct Meta {
        SimTime gen_time = 0;
        bool transmitted = false;
        bool latency_done = false;
    };

    std::vector<std::uint64_t> n_tx_, n_rx_, discarded_;
    std::vector<double> latency_sum_;
    std::vector<std::uint64_t> latency_count_;
    std::map<PacketId, Meta> meta_;
};

struct Summary {
    double mean = 0;
    double stddev = 0;  // sample standard deviation
};

inline Summary summarize(const std::vector<double>& xs) {
    Summary s;
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= double(xs.size());
    if (xs.size() < 2) return s;
    double var = 0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(var / double(xs.size() - 1));
    return s;
}

}  // namespace thzsim

#endif
