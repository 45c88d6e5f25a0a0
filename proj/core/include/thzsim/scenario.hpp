#ifndef THZSIM_SCENARIO_HPP
#define THZSIM_SCENARIO_HPP

#include <vector>

#include "thzsim/channel.hpp"
#include "thzsim/geometry.hpp"
#include "thzsim/rng.hpp"

namespace thzsim {

/// Footprint-centered machine cube standing on the floor.
struct MachineSpec {
    double cx = 0, cy = 0, side = 0;
};

struct Plant {
    Vec3 dims{52.36, 35.4, 8.5};
    std::vector<Box> machines;

    double floor_area() const { return dims.x * dims.y; }

    /// Ratio of machine footprint area to plant floor area.
    double clutter_density() const;

    /// Tallest machine side; the height threshold for the link height class.
    double clutter_height() const;

    /// Index of the machine containing p, or -1.
    int machine_containing(const Vec3& p) const;

    Vec3 bs_position() const { return {dims.x / 2.0, dims.y / 2.0, dims.z}; }
};

/// Validates geometry: machines fully inside the plant, pairwise disjoint.
Plant build_plant(const Vec3& dims, const std::vector<MachineSpec>& machines);

struct NodePlacement {
    Vec3 bs_pos;
    std::vector<Vec3> ue_pos;
    std::vector<int> containing_machine;
};

/// LOS/NLOS and height classification from the endpoint geometry.
LinkClass classify_link(const Vec3& a, const Vec3& b, const Plant& plant);

/// Uplink (UE -> BS) budget including link classification.
LinkBudget uplink_budget(const Vec3& ue, const Plant& plant, const ChannelModel& ch);

/// Rejection-samples n UEs uniformly inside uniformly chosen machines until
/// exactly floor(n/2) of them have uplink SNR >= SNR_TH. Throws ConfigError
/// when the constraint is not met within the attempt budget.
NodePlacement place_ues(const Plant& plant, int n, RngStream& rng,
                        const ChannelModel& ch, int max_attempts = 100000);

/// Each UE independently teleports with probability p_move to a uniform point
/// in a uniformly chosen machine. The half-connected constraint is not
/// re-enforced.
void mobility_epoch(NodePlacement& placement, const Plant& plant, double p_move,
                    RngStream& rng);

/// Default 4-small + 4-large machine layout; chosen so the half-connected
/// placement constraint is satisfiable and disconnected UEs usually have a
/// connected relay in radio range.
std::vector<MachineSpec> default_machine_layout();

}  // namespace thzsim

#endif
