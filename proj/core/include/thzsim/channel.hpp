#ifndef THZSIM_CHANNEL_HPP
#define THZSIM_CHANNEL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "thzsim/geometry.hpp"
#include "thzsim/time.hpp"

namespace thzsim {

constexpr double kSpeedOfLight = 2.998e8;       // m/s
constexpr double kBoltzmann = 1.380649e-23;     // J/K

/// Radio-layer parameters (defaults match the simulated deployment).
struct RadioParams {
    double fc_ghz = 100.0;        // carrier frequency
    double bandwidth_hz = 25e9;   // B
    int modulation_order = 4;     // M
    double ptx_ue_dbm = 25.0;     // UE transmit power
    double ptx_bs_dbm = 30.0;     // BS transmit power
    double eta_ue_db = 0.0;       // antenna efficiencies
    double eta_bs_db = 0.0;
    double gain_ue_db = 8.0;      // antenna gains
    double gain_bs_db = 10.0;
    double nf_ue_db = 9.0;        // noise figures
    double nf_bs_db = 8.0;
    double temperature_k = 290.0; // T_0
    double snr_threshold_db = 7.0;

    double bit_rate() const { return bandwidth_hz * std::log2(double(modulation_order)); }
};

struct PathLossCoeffs {
    double beta = 0, alpha = 0, gamma = 0;

    double eval(double d_m, double fc_ghz) const {
        return beta + alpha * std::log10(d_m) + gamma * std::log10(fc_ghz);
    }
};

enum class HeightClass { Low, High };

struct LinkClass {
    bool los = false;
    HeightClass height = HeightClass::Low;

    bool operator==(const LinkClass& o) const {
        return los == o.los && height == o.height;
    }
};

struct LinkBudget {
    double pl_db = 0;
    double snr_db = 0;
    SimTime prop_delay = 0;
    bool decodable = false;
};

inline SimTime prop_delay_ps(double d_m) {
    return static_cast<SimTime>(std::llround(d_m / kSpeedOfLight * 1e12));
}

/// Deterministic narrowband indoor-factory channel: log-distance path loss
/// with per-class coefficients (sparse clutter), thermal noise floor, and an
/// SNR threshold decodability rule. NLOS is floored at the co-located LOS
/// value so obstruction never improves the link.
class ChannelModel {
public:
    RadioParams params;
    // Indoor-factory coefficients (beta, alpha, gamma), sparse clutter.
    PathLossCoeffs los_coeffs{31.84, 21.50, 19.00};
    PathLossCoeffs nlos_sparse_low{33.0, 25.5, 20.0};    // InF-SL
    PathLossCoeffs nlos_sparse_high{32.4, 23.0, 20.0};   // InF-SH

    double path_loss_db(double d_m, const LinkClass& link) const {
        const double d = std::max(d_m, 1.0);  // model validity floor
        const double los_pl = los_coeffs.eval(d, params.fc_ghz);
        if (link.los) return los_pl;
        const PathLossCoeffs& c =
            link.height == HeightClass::High ? nlos_sparse_high : nlos_sparse_low;
        return std::max(los_pl, c.eval(d, params.fc_ghz));
    }

    double noise_power_dbw(double nf_db) const {
        return 10.0 * std::log10(kBoltzmann * params.temperature_k * params.bandwidth_hz)
               + nf_db;
    }

    /// Full budget for a directed link; is_bs flags select per-end power,
    /// gain, efficiency and the receiver noise figure.
    LinkBudget link_budget(const Vec3& tx, const Vec3& rx, bool tx_is_bs,
                           bool rx_is_bs, const LinkClass& link) const {
        const double d = distance(tx, rx);
        LinkBudget b;
        b.pl_db = path_loss_db(d, link);
        const double ptx = tx_is_bs ? params.ptx_bs_dbm - 30.0 : params.ptx_ue_dbm - 30.0;
        const double eta_tx = tx_is_bs ? params.eta_bs_db : params.eta_ue_db;
        const double eta_rx = rx_is_bs ? params.eta_bs_db : params.eta_ue_db;
        const double g_tx = tx_is_bs ? params.gain_bs_db : params.gain_ue_db;
        const double g_rx = rx_is_bs ? params.gain_bs_db : params.gain_ue_db;
        const double pn = noise_power_dbw(rx_is_bs ? params.nf_bs_db : params.nf_ue_db);
        b.snr_db = ptx + eta_tx + eta_rx + g_tx + g_rx - b.pl_db - pn;
        b.prop_delay = prop_delay_ps(d);
        b.decodable = b.snr_db >= params.snr_threshold_db;
        return b;
    }
};

}  // namespace thzsim

#endif
