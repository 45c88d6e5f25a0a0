#ifndef THZSIM_PACKET_HPP
#define THZSIM_PACKET_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "thzsim/time.hpp"

namespace thzsim {

/// Station index; UEs are 0..N-1, the BS is -1.
constexpr int kBsId = -1;

/// Identity of an originated DATA packet.
struct PacketId {
    int origin = 0;
    std::uint64_t seq = 0;

    bool operator==(const PacketId& o) const { return origin == o.origin && seq == o.seq; }
    bool operator<(const PacketId& o) const {
        if (origin != o.origin) return origin < o.origin;
        return seq < o.seq;
    }
};

enum class PacketKind { Data, Ack };

/// On-air frame. dest == nullopt means broadcast. For ACKs, acked_id names
/// the confirmed DATA and has_bs_flag advertises whether the sender can see
/// the BS (directly, or through its own neighbor table).
struct Packet {
    PacketKind kind = PacketKind::Data;
    PacketId id;                 // DATA identity; for ACKs, identity of the acked DATA
    int hops = 0;                // relays traversed so far (DATA only)
    std::optional<int> dest;     // nullopt = broadcast
    int size_bytes = 0;
    int tx_src = 0;              // transmitting station of this frame
    bool has_bs_flag = false;    // ACK only

    std::string debug_id() const {
        const char k = kind == PacketKind::Data ? 'D' : 'A';
        return std::string(1, k) + ":" + std::to_string(id.origin) + ":" +
               std::to_string(id.seq);
    }
};

}  // namespace thzsim

#endif
