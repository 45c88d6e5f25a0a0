#ifndef THZSIM_SIMULATION_HPP
#define THZSIM_SIMULATION_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thzsim/channel.hpp"
#include "thzsim/event_queue.hpp"
#include "thzsim/mac_params.hpp"
#include "thzsim/metrics.hpp"
#include "thzsim/packet.hpp"
#include "thzsim/routing.hpp"
#include "thzsim/scenario.hpp"
#include "thzsim/trace.hpp"

namespace thzsim {

struct SimConfig {
    Plant plant;
    RadioParams radio;
    MacParams mac;
    RoutingMode mode = RoutingMode::Ualoha;
    int n_ues = 4;
    bool dynamic = false;
    double p_move = 0.5;
    SimTime t_sim = 500 * kMicrosecond;  // 0.5 ms
    SimTime t_move = 0;                  // 0 -> t_sim / 10
    std::uint64_t seed = 1;
    bool trace_enabled = false;
    int placement_attempts = 100000;
};

struct SimResult {
    double p_s = 0;
    double throughput_bps = 0;
    double avg_latency_s = 0;
    std::uint64_t n_r = 0;
    std::uint64_t discarded = 0;
    std::uint64_t dispatched = 0;
};

/// One seeded simulation run: stations, the unslotted-Aloha MAC cycle
/// (backoff, burst transmission, WAIT), receiver-side collision resolution
/// with per-link propagation delays, and the selected routing mode.
class Simulation {
public:
    explicit Simulation(const SimConfig& cfg);

    SimResult run();

    const TraceLog& trace() const { return trace_; }
    const KpiAccumulator& kpis() const { return *kpis_; }
    const NodePlacement& placement() const { return placement_; }
    const MacTiming& timing() const { return timing_; }

    /// Highest hop count carried by any DATA accepted at a relay or the BS.
    int max_accepted_hops() const { return max_accepted_hops_; }

private:
    struct Arrival {
        Packet pkt;
        std::uint64_t tx_uid = 0;
        int rx = 0;
        SimTime start = 0, end = 0;
        double snr_db = 0;
        bool started = false;
        bool busy = false;
        bool collided = false;
        bool missed_listen = false;
    };

    struct QueuedPacket {
        Packet pkt;
        int attempt = 1;
        bool outstanding = false;  // transmitted at least once, not yet resolved
        bool is_own = false;
    };

    struct NodeRadio {
        bool transmitting = false;
        SimTime tx_until = 0;
        bool listening = false;
    };

    struct UeState {
        std::vector<QueuedPacket> queue;
        std::uint64_t next_seq = 0;
        NeighborTable table;
        bool in_wait = false;
        bool discovery_wait = false;
        bool pending_burst = false;
        bool burst_is_discovery = false;
        bool dest_acked = false;  // any ACK from burst_dest since the burst
        BsDedup sink_confirmed;   // ids this node saw the sink acknowledge
        std::optional<int> burst_dest;  // nullopt = broadcast
        std::size_t burst_index = 0;
        std::deque<Packet> ack_jobs;    // immediate ACKs, sent back-to-back
        std::vector<Packet> eow_acks;   // deferred to the end of the WAIT phase
        BsDedup relayed;                // ids ever accepted here: never re-relay
                                        // (keeps delivered paths loop-free)
        EventHandle wait_handle;
    };

    int idx(int node) const { return node == kBsId ? cfg_.n_ues : node; }
    bool is_bs(int node) const { return node == kBsId; }
    const Vec3& pos(int node) const {
        return node == kBsId ? placement_.bs_pos : placement_.ue_pos[node];
    }

    QueuedPacket make_own_packet(int u);
    void set_listening(int node, bool on);
    void begin_tx(int node, const Packet& pkt, SimTime airtime,
                  std::function<void()> done);
    void finalize_arrival(const std::shared_ptr<Arrival>& a, const std::string& pid);

    void start_cycle(int u);
    void on_backoff_expiry(int u);
    void start_burst(int u);
    void next_burst_frame(int u);
    void enter_wait(int u);
    void on_wait_expiry(int u);
    void wait_end(int u);

    void ue_on_delivered(int u, const Arrival& a);
    void ue_on_data(int u, const Packet& pkt);
    void ue_on_ack(int u, const Arrival& a);
    void resolve_packet(int u, std::size_t i);
    void maybe_end_wait_early(int u);
    SimTime rx_busy_until(int node) const;
    void enqueue_ack(int u, const Packet& ack);
    void ue_send_next_ack(int u);

    void bs_on_delivered(const Arrival& a);
    void bs_send_next_ack();

    SimConfig cfg_;
    ChannelModel channel_;
    MacTiming timing_;
    EventQueue q_;
    TraceLog trace_;
    NodePlacement placement_;
    std::vector<UeState> ues_;
    std::vector<NodeRadio> radio_;  // UEs then BS at index n_ues
    std::vector<std::vector<std::shared_ptr<Arrival>>> arrivals_;
    std::vector<RngStream> backoff_rngs_;
    RngStream mobility_rng_;
    std::unique_ptr<KpiAccumulator> kpis_;
    BsDedup dedup_;
    std::deque<Packet> bs_acks_;
    std::uint64_t next_tx_uid_ = 0;
    int max_accepted_hops_ = 0;
    long dbg_early_waits_ = 0;
};

}  // namespace thzsim

#endif
