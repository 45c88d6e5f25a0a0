#ifndef THZSIM_ROUTING_HPP
#define THZSIM_ROUTING_HPP

#include <map>
#include <optional>
#include <set>

#include "thzsim/packet.hpp"

namespace thzsim {

enum class RoutingMode { Ualoha, TableLess, TableBased };

struct NeighborEntry {
    bool has_bs = false;
    int ack_count = 0;
    double last_snr_db = 0.0;
    int miss_count = 0;
};

/// Per-UE neighbor table for table-based routing, populated purely from
/// received ACKs. Entries are evicted after `ttl` consecutive missed ACKs.
class NeighborTable {
public:
    bool empty() const { return entries_.empty(); }
    bool contains(int id) const { return entries_.count(id) > 0; }
    bool has_bs_route() const { return contains(kBsId); }
    const std::map<int, NeighborEntry>& entries() const { return entries_; }

    void on_ack(int sender, double snr_db, bool sender_has_bs) {
        NeighborEntry& e = entries_[sender];
        e.ack_count += 1;
        e.last_snr_db = snr_db;
        e.miss_count = 0;
        if (sender == kBsId || sender_has_bs) e.has_bs = true;
    }

    /// One consecutive miss toward dest; evicts the entry at ttl misses.
    void on_timeout(int dest, int ttl) {
        auto it = entries_.find(dest);
        if (it == entries_.end()) return;
        if (++it->second.miss_count >= ttl) entries_.erase(it);
    }

    /// Best next hop: the BS when present, otherwise lexicographically by
    /// (has_bs desc, ack_count desc, last_snr desc, id asc). nullopt when the
    /// table is empty (discovery broadcast). `exclude` skips a node that is
    /// known to refuse the packet (its own origin).
    std::optional<int> select_next_hop(int exclude = kBsId - 1) const {
        if (entries_.empty()) return std::nullopt;
        if (has_bs_route()) return kBsId;
        const std::pair<const int, NeighborEntry>* best = nullptr;
        for (const auto& kv : entries_) {
            if (kv.first == exclude) continue;
            if (!best || better(kv, *best)) best = &kv;
        }
        if (!best) return std::nullopt;
        return best->first;
    }

private:
    static bool better(const std::pair<const int, NeighborEntry>& a,
                       const std::pair<const int, NeighborEntry>& b) {
        if (a.second.has_bs != b.second.has_bs) return a.second.has_bs;
        if (a.second.ack_count != b.second.ack_count)
            return a.second.ack_count > b.second.ack_count;
        if (a.second.last_snr_db != b.second.last_snr_db)
            return a.second.last_snr_db > b.second.last_snr_db;
        return a.first < b.first;
    }

    std::map<int, NeighborEntry> entries_;
};

/// BS-side duplicate filter over originated DATA ids.
class BsDedup {
public:
    /// True when the id is new this run (counted toward N_R).
    bool accept(const PacketId& id) { return seen_.insert(id).second; }
    bool seen(const PacketId& id) const { return seen_.count(id) > 0; }
    void forget(const PacketId& id) { seen_.erase(id); }

private:
    std::set<PacketId> seen_;
};

}  // namespace thzsim

#endif
