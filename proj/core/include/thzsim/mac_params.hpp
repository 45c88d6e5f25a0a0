#ifndef THZSIM_MAC_PARAMS_HPP
#define THZSIM_MAC_PARAMS_HPP

#include <cmath>
#include <cstdint>

#include "thzsim/channel.hpp"
#include "thzsim/time.hpp"

namespace thzsim {

/// MAC-layer parameters.
struct MacParams {
    int contention_base = 5;       // C: backoff window is [1, 2^i * C] slots
    int max_retries = 3;           // R: attempts use i = 1..R
    int max_hops = 4;              // H
    int data_bytes = 20;           // P
    int ack_bytes = 10;            // P_A
    int queue_capacity = 5;        // Q
    int neighbor_ttl = 3;          // consecutive ACK misses before eviction
    SimTime backoff_slot = 1600;   // T_BO = 1.6 ns
};

/// Timing quantities derived from the radio and MAC parameters.
struct MacTiming {
    SimTime t_data = 0;        // 8 P / R_b
    SimTime t_ack = 0;         // 8 P_A / R_b
    SimTime t_wait = 0;        // T_ACK + 2 tau_p_max
    SimTime tau_p_max = 0;     // propagation delay over the plant diagonal

    static MacTiming derive(const RadioParams& radio, const MacParams& mac,
                            double plant_diagonal_m) {
        MacTiming t;
        const double rb = radio.bit_rate();
        t.t_data = seconds_to_ticks(8.0 * mac.data_bytes / rb);
        t.t_ack = seconds_to_ticks(8.0 * mac.ack_bytes / rb);
        t.tau_p_max = prop_delay_ps(plant_diagonal_m);
        t.t_wait = t.t_ack + 2 * t.tau_p_max;
        return t;
    }

    SimTime airtime(int size_bytes, const RadioParams& radio) const {
        return seconds_to_ticks(8.0 * size_bytes / radio.bit_rate());
    }
};

}  // namespace thzsim

#endif
