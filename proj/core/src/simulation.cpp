#include "thzsim/simulation.hpp"

#include <algorithm>

namespace thzsim {

namespace {

std::string frame_id(const Packet& pkt, std::uint64_t tx_uid) {
    return pkt.debug_id() + "#" + std::to_string(tx_uid);
}

}  // namespace

Simulation::Simulation(const SimConfig& cfg)
    : cfg_(cfg),
      timing_(MacTiming::derive(cfg.radio, cfg.mac, cfg.plant.dims.norm())),
      mobility_rng_(cfg.seed, "mobility") {
    channel_.params = cfg_.radio;
    ues_.resize(cfg_.n_ues);
    radio_.resize(cfg_.n_ues + 1);
    arrivals_.resize(cfg_.n_ues + 1);
    backoff_rngs_.reserve(cfg_.n_ues);
    for (int u = 0; u < cfg_.n_ues; ++u) {
        backoff_rngs_.emplace_back(cfg_.seed, "backoff:" + std::to_string(u));
    }
}

Simulation::QueuedPacket Simulation::make_own_packet(int u) {
    QueuedPacket qp;
    qp.pkt.kind = PacketKind::Data;
    qp.pkt.id = {u, ues_[u].next_seq++};
    qp.pkt.hops = 0;
    qp.pkt.size_bytes = cfg_.mac.data_bytes;
    qp.pkt.tx_src = u;
    qp.is_own = true;
    kpis_->note_generated(qp.pkt.id, q_.now());
    return qp;
}

void Simulation::set_listening(int node, bool on) {
    NodeRadio& r = radio_[idx(node)];
    if (r.listening == on) return;
    r.listening = on;
    if (cfg_.trace_enabled) {
        trace_.record(q_.now(), node, on ? "listen_on" : "listen_off");
    }
    if (!on) {
        // an arrival in progress when the radio stops listening is lost
        for (auto& a : arrivals_[idx(node)]) {
            if (a->started && a->end > q_.now()) a->missed_listen = true;
        }
    }
}

void Simulation::begin_tx(int node, const Packet& pkt, SimTime airtime,
                          std::function<void()> done) {
    const SimTime now = q_.now();
    const SimTime tx_end = now + airtime;
    NodeRadio& r = radio_[idx(node)];
    r.transmitting = true;
    r.tx_until = tx_end;
    const std::uint64_t uid = next_tx_uid_++;
    const std::string pid = frame_id(pkt, uid);
    if (cfg_.trace_enabled) trace_.record(now, node, "tx_start", pid);

    // half-duplex: receptions overlapping our own transmission are aborted
    for (auto& a : arrivals_[idx(node)]) {
        if (a->end > now && a->start < tx_end) a->busy = true;
    }

    for (int rx = kBsId; rx < cfg_.n_ues; ++rx) {
        if (rx == node) continue;
        const LinkClass lc = classify_link(pos(node), pos(rx), cfg_.plant);
        const LinkBudget b =
            channel_.link_budget(pos(node), pos(rx), is_bs(node), is_bs(rx), lc);
        if (!b.decodable) continue;  // sub-threshold: neither delivers nor interferes

        auto a = std::make_shared<Arrival>();
        a->pkt = pkt;
        a->tx_uid = uid;
        a->rx = rx;
        a->start = now + b.prop_delay;
        a->end = a->start + airtime;
        a->snr_db = b.snr_db;

        const NodeRadio& rr = radio_[idx(rx)];
        if (rr.transmitting && a->start < rr.tx_until) a->busy = true;
        // closed-interval overlap between distinct sources: touching arrivals
        // collide, no capture effect
        for (auto& other : arrivals_[idx(rx)]) {
            // one radio transmits serially: its consecutive frames only touch
            // and stay individually decodable, so same-source pairs never collide
            if (other->pkt.tx_src == a->pkt.tx_src) continue;
            if (other->end >= a->start && other->start <= a->end) {
                other->collided = true;
                a->collided = true;
            }
        }
        arrivals_[idx(rx)].push_back(a);

        q_.schedule(a->start, EventKind::ArrivalStart, rx, [this, a, pid] {
            a->started = true;
            if (!radio_[idx(a->rx)].listening) a->missed_listen = true;
            if (cfg_.trace_enabled) trace_.record(q_.now(), a->rx, "arr_start", pid);
        });
        q_.schedule(a->end, EventKind::ArrivalEnd, rx,
                    [this, a, pid] { finalize_arrival(a, pid); });
    }

    q_.schedule(tx_end, EventKind::TxEnd, node,
                [this, node, pid, done = std::move(done)] {
                    radio_[idx(node)].transmitting = false;
                    if (cfg_.trace_enabled) trace_.record(q_.now(), node, "tx_end", pid);
                    done();
                });
}

void Simulation::finalize_arrival(const std::shared_ptr<Arrival>& a,
                                  const std::string& pid) {
    auto& v = arrivals_[idx(a->rx)];
    v.erase(std::remove(v.begin(), v.end(), a), v.end());

    const char* verdict;
    bool delivered = false;
    if (a->busy) {
        verdict = "lost_busy";
    } else if (a->collided) {
        verdict = "lost_collision";
    } else if (a->missed_listen) {
        verdict = "lost_not_listening";
    } else {
        verdict = "delivered";
        delivered = true;
    }
    if (cfg_.trace_enabled) trace_.record(q_.now(), a->rx, "arr_end", pid, verdict);
    if (!delivered) return;
    if (a->rx == kBsId) {
        bs_on_delivered(*a);
    } else {
        ue_on_delivered(a->rx, *a);
    }
}

void Simulation::start_cycle(int u) {
    UeState& st = ues_[u];
    st.in_wait = false;
    st.discovery_wait = false;
    int iw = 1;
    for (const QueuedPacket& qp : st.queue) iw = std::max(iw, qp.attempt);
    const std::int64_t slots =
        backoff_rngs_[u].uniform_int(1, (std::int64_t{1} << iw) * cfg_.mac.contention_base);
    SimTime tb = cfg_.mac.backoff_slot * slots;
    if (cfg_.mode != RoutingMode::Ualoha) {
        tb += timing_.t_data + timing_.tau_p_max;  // listening prefix
    }
    set_listening(u, cfg_.mode != RoutingMode::Ualoha);
    q_.schedule(q_.now() + tb, EventKind::BackoffExpiry, u,
                [this, u] { on_backoff_expiry(u); });
}

void Simulation::on_backoff_expiry(int u) {
    if (radio_[u].transmitting) {
        // an ACK is in flight; the burst starts right after it completes
        ues_[u].pending_burst = true;
        return;
    }
    // half-duplex: transmitting now would wipe out the frame currently being
    // received, so the burst starts once the in-progress arrivals run out
    // (the expired backoff timer is never extended by later arrivals)
    const SimTime busy = rx_busy_until(u);
    if (busy > q_.now()) {
        q_.schedule(busy, EventKind::TxStart, u, [this, u] { on_backoff_expiry(u); });
        return;
    }
    start_burst(u);
}

void Simulation::start_burst(int u) {
    UeState& st = ues_[u];
    st.burst_is_discovery = false;
    switch (cfg_.mode) {
        case RoutingMode::Ualoha:
            st.burst_dest = kBsId;
            break;
        case RoutingMode::TableLess:
            st.burst_dest = std::nullopt;
            break;
        case RoutingMode::TableBased:
            if (st.table.empty()) {
                st.burst_dest = std::nullopt;
                st.burst_is_discovery = true;
            } else {
                st.burst_dest = st.table.select_next_hop();
            }
            break;
    }
    set_listening(u, false);
    st.burst_index = 0;
    next_burst_frame(u);
}

void Simulation::next_burst_frame(int u) {
    UeState& st = ues_[u];
    if (st.burst_index >= st.queue.size()) {
        enter_wait(u);
        return;
    }
    QueuedPacket& qp = st.queue[st.burst_index];
    qp.pkt.dest = st.burst_dest;
    // A relayed packet is never addressed back to its own origin (the origin
    // would drop it); fall back to the next-best neighbor, or broadcast.
    if (cfg_.mode == RoutingMode::TableBased && !st.burst_is_discovery &&
        st.burst_dest && *st.burst_dest == qp.pkt.id.origin)
        qp.pkt.dest = st.table.select_next_hop(qp.pkt.id.origin);
    qp.pkt.tx_src = u;
    qp.outstanding = true;
    if (qp.is_own) kpis_->note_transmitted(qp.pkt.id);
    ++st.burst_index;
    begin_tx(u, qp.pkt, timing_.t_data, [this, u] { next_burst_frame(u); });
}

void Simulation::enter_wait(int u) {
    UeState& st = ues_[u];
    // ACKs still deferred when the burst began are owed at the end of the WAIT
    for (const Packet& ack : st.ack_jobs) st.eow_acks.push_back(ack);
    st.ack_jobs.clear();
    st.in_wait = true;
    st.discovery_wait = st.burst_is_discovery;
    st.dest_acked = false;
    set_listening(u, true);
    st.wait_handle = q_.schedule(q_.now() + timing_.t_wait, EventKind::WaitExpiry, u,
                                 [this, u] { on_wait_expiry(u); });
}

void Simulation::on_wait_expiry(int u) {
    UeState& st = ues_[u];
    bool any_unresolved = false;
    for (const QueuedPacket& qp : st.queue) any_unresolved |= qp.outstanding;
    if (getenv("THZSIM_DEBUG_WAIT")) {
        static long full = 0, own_stuck = 0, rel_stuck = 0;
        full++;
        for (const QueuedPacket& qp : st.queue)
            if (qp.outstanding) (qp.is_own ? own_stuck : rel_stuck)++;
        if (full % 500 == 0)
            fprintf(stderr, "WAITDBG full=%ld own_stuck=%ld rel_stuck=%ld early=%ld\n",
                    full, own_stuck, rel_stuck, dbg_early_waits_);
    }

    if (cfg_.mode == RoutingMode::TableBased && !st.discovery_wait && st.burst_dest &&
        any_unresolved) {
        st.table.on_timeout(*st.burst_dest, cfg_.mac.neighbor_ttl);
    }

    for (std::size_t i = 0; i < st.queue.size();) {
        QueuedPacket& qp = st.queue[i];
        if (!qp.outstanding) {
            ++i;
            continue;
        }
        qp.attempt += 1;
        if (qp.attempt > cfg_.mac.max_retries) {
            if (qp.is_own) {
                kpis_->note_discarded(qp.pkt.id);
                st.queue[i] = make_own_packet(u);  // full buffer
                ++i;
            } else {
                // the forwarding commitment ends unfulfilled, so a fresh copy
                // of this id may be accepted again later
                st.relayed.forget(qp.pkt.id);
                if (getenv("THZSIM_DEBUG_DISCARD")) {
                    const double d = distance(pos(u), placement_.bs_pos);
                    fprintf(stderr, "RDISC u=%d origin=%d hops=%d d_bs=%.1f dest=%d\n",
                            u, qp.pkt.id.origin, qp.pkt.hops, d,
                            st.burst_dest ? *st.burst_dest : -99);
                }
                st.queue.erase(st.queue.begin() + i);
            }
        } else {
            ++i;
        }
    }
    wait_end(u);
}

void Simulation::wait_end(int u) {
    UeState& st = ues_[u];
    st.in_wait = false;
    st.discovery_wait = false;
    start_cycle(u);
    // ACKs owed for DATA accepted during WAIT go out now, back-to-back,
    // while the fresh backoff timer is already running
    for (const Packet& ack : st.eow_acks) st.ack_jobs.push_back(ack);
    st.eow_acks.clear();
    if (!st.ack_jobs.empty() && !radio_[u].transmitting) ue_send_next_ack(u);
}

void Simulation::ue_on_delivered(int u, const Arrival& a) {
    if (a.pkt.kind == PacketKind::Ack) {
        ue_on_ack(u, a);
        return;
    }
    if (cfg_.mode == RoutingMode::Ualoha) return;  // single-hop: never relays
    ue_on_data(u, a.pkt);
}

void Simulation::ue_on_data(int u, const Packet& pkt) {
    UeState& st = ues_[u];
    if (pkt.dest && *pkt.dest != u) return;  // unicast to someone else
    if (pkt.id.origin == u) return;          // own packet echoed back: loop prevention

    // Hearing a relayed id this node also holds proves another live custodian
    // exists, so the local copy is redundant and is dropped silently — the
    // node on the air keeps custody, which can never annihilate the packet. A
    // copy that was never transmitted here is forgotten entirely (a later
    // fresh copy may be accepted again); a copy already put on the air stays
    // remembered so this node never relays the same id twice. The one
    // exception is the packet's own origin retransmitting: that means no ACK
    // reached it yet, so the custodian answers with a duplicate ACK and keeps
    // its copy instead of abandoning the packet.
    static long dbg_acc = 0, dbg_dup = 0, dbg_seen = 0, dbg_hop = 0, dbg_full = 0, dbg_qlen = 0, dbg_n = 0;
    bool duplicate = false;
    for (std::size_t i = 0; i < st.queue.size(); ++i) {
        if (st.queue[i].pkt.id != pkt.id) continue;
        if (!st.queue[i].is_own && pkt.tx_src != pkt.id.origin) {
            if (!st.queue[i].outstanding) st.relayed.forget(pkt.id);
            st.queue.erase(st.queue.begin() + i);
            maybe_end_wait_early(u);
            return;
        }
        duplicate = true;
        break;
    }
    if (getenv("THZSIM_DEBUG_TL")) {
        static long c_full = 0, c_n = 0, d_full = 0, d_n = 0, c_q = 0, d_q = 0;
        const bool conn = distance(pos(u), placement_.bs_pos) <= 12.96758;
        (conn ? c_n : d_n)++;
        (conn ? c_q : d_q) += st.queue.size();
        dbg_n++; dbg_qlen += st.queue.size();
        if (duplicate) dbg_dup++;
        else if (st.relayed.seen(pkt.id) && !pkt.dest) dbg_seen++;
        else if (pkt.hops + 1 > cfg_.mac.max_hops) dbg_hop++;
        else if (static_cast<int>(st.queue.size()) >= cfg_.mac.queue_capacity) {
            dbg_full++;
            (conn ? c_full : d_full)++;
        }
        else dbg_acc++;
        if (dbg_n % 20000 == 0)
            fprintf(stderr,
                    "TLDBG n=%ld acc=%ld dup=%ld seen=%ld hop=%ld full=%ld qbar=%.2f "
                    "conn[n=%ld full=%.2f q=%.2f] disc[n=%ld full=%.2f q=%.2f]\n",
                    dbg_n, dbg_acc, dbg_dup, dbg_seen, dbg_hop, dbg_full,
                    (double)dbg_qlen / dbg_n, c_n, (double)c_full / c_n,
                    (double)c_q / c_n, d_n, (double)d_full / d_n, (double)d_q / d_n);
    }
    if (!duplicate && cfg_.mode == RoutingMode::TableBased &&
        st.sink_confirmed.seen(pkt.id)) {
        // Table-based senders pick one next hop and hang on it, so a copy of
        // an id the sink has already confirmed to this node is answered with
        // an ACK (the sender stops retrying) without taking the packet on.
        // Table-less flooding relies on redundancy instead: answering from
        // every past holder would add traffic exactly where it saturates
        Packet ack;
        ack.kind = PacketKind::Ack;
        ack.id = pkt.id;
        ack.dest = pkt.tx_src;
        ack.size_bytes = cfg_.mac.ack_bytes;
        ack.tx_src = u;
        ack.has_bs_flag =
            cfg_.mode == RoutingMode::TableBased && st.table.has_bs_route();
        if (st.in_wait) st.eow_acks.push_back(ack);
        else enqueue_ack(u, ack);
        return;
    }
    if (!duplicate && st.relayed.seen(pkt.id)) {
        // an id relayed here before and already resolved: broadcast copies die
        // silently (answering them from every past holder would flood the
        // channel), but a sender addressing this node directly is taken at its
        // word that the packet still needs forwarding, and the id is accepted
        // afresh — the earlier commitment is over, so no relay chain can loop
        if (!pkt.dest) return;
    }
    if (!duplicate) {
        // over-hopped or overflowing DATA is dropped silently (the sender
        // retries or another relay takes it)
        if (pkt.hops + 1 > cfg_.mac.max_hops) return;
        if (static_cast<int>(st.queue.size()) >= cfg_.mac.queue_capacity) return;
        QueuedPacket qp;
        qp.pkt = pkt;
        qp.pkt.hops += 1;
        qp.pkt.dest = std::nullopt;
        max_accepted_hops_ = std::max(max_accepted_hops_, qp.pkt.hops);
        st.queue.push_back(qp);
        st.relayed.accept(pkt.id);
    }

    Packet ack;
    ack.kind = PacketKind::Ack;
    ack.id = pkt.id;
    ack.dest = pkt.tx_src;
    ack.size_bytes = cfg_.mac.ack_bytes;
    ack.tx_src = u;
    ack.has_bs_flag =
        cfg_.mode == RoutingMode::TableBased && st.table.has_bs_route();
    if (st.in_wait) {
        st.eow_acks.push_back(ack);
    } else {
        enqueue_ack(u, ack);
    }
}

void Simulation::ue_on_ack(int u, const Arrival& a) {
    const Packet& ack = a.pkt;
    if (!ack.dest || *ack.dest != u) return;  // not intended for us
    UeState& st = ues_[u];
    if (cfg_.mode == RoutingMode::TableBased) {
        st.table.on_ack(ack.tx_src, a.snr_db, ack.has_bs_flag);
    }
    if (ack.tx_src == kBsId) st.sink_confirmed.accept(ack.id);
    if (st.burst_dest && ack.tx_src == *st.burst_dest) st.dest_acked = true;
    for (std::size_t i = 0; i < st.queue.size(); ++i) {
        if (st.queue[i].outstanding && st.queue[i].pkt.id == ack.id) {
            resolve_packet(u, i);
            break;
        }
    }
}

void Simulation::resolve_packet(int u, std::size_t i) {
    UeState& st = ues_[u];
    const QueuedPacket qp = st.queue[i];
    if (qp.is_own) {
        if (!kpis_->latency_recorded(qp.pkt.id)) {
            kpis_->note_latency(
                qp.pkt.id, to_seconds(q_.now() - kpis_->generation_time(qp.pkt.id)));
        }
        st.queue[i] = make_own_packet(u);  // full buffer
    } else {
        st.queue.erase(st.queue.begin() + i);
    }
    maybe_end_wait_early(u);
}

void Simulation::maybe_end_wait_early(int u) {
    UeState& st = ues_[u];
    if (!st.in_wait || st.discovery_wait) return;
    for (const QueuedPacket& qp : st.queue) {
        if (qp.outstanding) return;
    }
    dbg_early_waits_++;
    q_.cancel(st.wait_handle);
    wait_end(u);
}

SimTime Simulation::rx_busy_until(int node) const {
    SimTime until = 0;
    for (const auto& a : arrivals_[idx(node)]) {
        if (a->start <= q_.now() && a->end > q_.now()) until = std::max(until, a->end);
    }
    return until;
}

void Simulation::enqueue_ack(int u, const Packet& ack) {
    ues_[u].ack_jobs.push_back(ack);
    if (!radio_[u].transmitting) ue_send_next_ack(u);
}

void Simulation::ue_send_next_ack(int u) {
    // a mid-reception transmit would destroy the frame being received, so a
    // pending ACK waits for the in-progress arrivals to run out
    const SimTime busy = rx_busy_until(u);
    if (busy > q_.now()) {
        if (ues_[u].pending_burst) {
            // an expired backoff takes precedence over deferred ACKs; the
            // leftovers go out at the end of the WAIT phase
            ues_[u].pending_burst = false;
            on_backoff_expiry(u);
            return;
        }
        q_.schedule(busy, EventKind::TxStart, u, [this, u] {
            if (!radio_[u].transmitting && !ues_[u].ack_jobs.empty())
                ue_send_next_ack(u);
        });
        return;
    }
    UeState& st = ues_[u];
    const Packet ack = st.ack_jobs.front();
    st.ack_jobs.pop_front();
    begin_tx(u, ack, timing_.t_ack, [this, u] {
        UeState& s = ues_[u];
        if (!s.ack_jobs.empty()) {
            ue_send_next_ack(u);
        } else if (s.pending_burst) {
            s.pending_burst = false;
            on_backoff_expiry(u);
        }
    });
}

void Simulation::bs_on_delivered(const Arrival& a) {
    if (a.pkt.kind != PacketKind::Data) return;
    max_accepted_hops_ = std::max(max_accepted_hops_, a.pkt.hops);
    if (dedup_.accept(a.pkt.id)) {
        kpis_->note_bs_accept(a.pkt.id);
        if (!kpis_->latency_recorded(a.pkt.id)) {
            // the packet resolves when the sink's ACK reaches the last relay
            const SimTime prop =
                prop_delay_ps(distance(placement_.bs_pos, pos(a.pkt.tx_src)));
            const SimTime resolved = q_.now() + timing_.t_ack + prop;
            kpis_->note_latency(
                a.pkt.id, to_seconds(resolved - kpis_->generation_time(a.pkt.id)));
        }
    }
    Packet ack;
    ack.kind = PacketKind::Ack;
    ack.id = a.pkt.id;
    ack.dest = a.pkt.tx_src;
    ack.size_bytes = cfg_.mac.ack_bytes;
    ack.tx_src = kBsId;
    ack.has_bs_flag = true;
    bs_acks_.push_back(ack);
    if (!radio_[idx(kBsId)].transmitting) bs_send_next_ack();
}

void Simulation::bs_send_next_ack() {
    // like the UEs, the sink holds its ACKs while a frame is still arriving
    // (acknowledging mid-burst would wipe out the rest of the burst)
    const SimTime busy = rx_busy_until(kBsId);
    if (busy > q_.now()) {
        q_.schedule(busy, EventKind::TxStart, kBsId, [this] {
            if (!radio_[idx(kBsId)].transmitting && !bs_acks_.empty())
                bs_send_next_ack();
        });
        return;
    }
    const Packet ack = bs_acks_.front();
    bs_acks_.pop_front();
    begin_tx(kBsId, ack, timing_.t_ack, [this] {
        if (!bs_acks_.empty()) bs_send_next_ack();
    });
}

SimResult Simulation::run() {
    RngStream placement_rng(cfg_.seed, "placement");
    placement_ =
        place_ues(cfg_.plant, cfg_.n_ues, placement_rng, channel_, cfg_.placement_attempts);
    kpis_ = std::make_unique<KpiAccumulator>(cfg_.n_ues);

    set_listening(kBsId, true);
    for (int u = 0; u < cfg_.n_ues; ++u) {
        ues_[u].queue.push_back(make_own_packet(u));
    }
    for (int u = 0; u < cfg_.n_ues; ++u) start_cycle(u);

    if (cfg_.dynamic) {
        const SimTime tm = cfg_.t_move > 0 ? cfg_.t_move : cfg_.t_sim / 10;
        for (SimTime t = tm; t < cfg_.t_sim; t += tm) {
            q_.schedule(t, EventKind::MobilityEpoch, kBsId, [this] {
                mobility_epoch(placement_, cfg_.plant, cfg_.p_move, mobility_rng_);
            });
        }
    }

    SimResult res;
    res.dispatched = q_.run_until(cfg_.t_sim);
    res.p_s = kpis_->success_probability();
    res.throughput_bps = kpis_->throughput_bps(cfg_.mac.data_bytes, to_seconds(cfg_.t_sim));
    res.avg_latency_s = kpis_->average_latency_s();
    res.n_r = kpis_->unique_received();
    res.discarded = kpis_->total_discarded();
    return res;
}

}  // namespace thzsim
