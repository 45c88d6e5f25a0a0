#include "thzsim/scenario.hpp"

#include <algorithm>
#include <sstream>

#include "thzsim/errors.hpp"

namespace thzsim {

double Plant::clutter_density() const {
    double a = 0;
    for (const Box& m : machines) {
        a += (m.hi.x - m.lo.x) * (m.hi.y - m.lo.y);
    }
    return a / floor_area();
}

double Plant::clutter_height() const {
    double h = 0;
    for (const Box& m : machines) h = std::max(h, m.hi.z);
    return h;
}

int Plant::machine_containing(const Vec3& p) const {
    for (std::size_t i = 0; i < machines.size(); ++i) {
        if (machines[i].contains(p)) return static_cast<int>(i);
    }
    return -1;
}

Plant build_plant(const Vec3& dims, const std::vector<MachineSpec>& machines) {
    Plant plant;
    plant.dims = dims;
    for (const MachineSpec& m : machines) {
        if (m.side <= 0) throw ConfigError("machine side must be positive");
        const double h = m.side / 2.0;
        Box b{{m.cx - h, m.cy - h, 0.0}, {m.cx + h, m.cy + h, m.side}};
        if (b.lo.x < 0 || b.lo.y < 0 || b.hi.x > dims.x || b.hi.y > dims.y ||
            b.hi.z > dims.z) {
            std::ostringstream os;
            os << "machine at (" << m.cx << ", " << m.cy << ") side " << m.side
               << " extends outside the plant";
            throw ConfigError(os.str());
        }
        for (const Box& other : plant.machines) {
            if (b.overlaps_footprint(other)) {
                std::ostringstream os;
                os << "machine at (" << m.cx << ", " << m.cy << ") overlaps another machine";
                throw ConfigError(os.str());
            }
        }
        plant.machines.push_back(b);
    }
    return plant;
}

LinkClass classify_link(const Vec3& a, const Vec3& b, const Plant& plant) {
    LinkClass lc;
    const double h = plant.clutter_height();
    lc.height = (a.z > h || b.z > h) ? HeightClass::High : HeightClass::Low;

    const int ma = plant.machine_containing(a);
    const int mb = plant.machine_containing(b);
    if (ma >= 0 && ma == mb) {
        lc.los = false;  // intra-machine link
        return lc;
    }
    lc.los = true;
    for (const Box& m : plant.machines) {
        if (segment_intersects_box(a, b, m)) {
            lc.los = false;
            break;
        }
    }
    return lc;
}

LinkBudget uplink_budget(const Vec3& ue, const Plant& plant, const ChannelModel& ch) {
    const Vec3 bs = plant.bs_position();
    return ch.link_budget(ue, bs, /*tx_is_bs=*/false, /*rx_is_bs=*/true,
                          classify_link(ue, bs, plant));
}

namespace {

Vec3 sample_in_machine(const Box& m, RngStream& rng) {
    return {rng.uniform(m.lo.x, m.hi.x), rng.uniform(m.lo.y, m.hi.y),
            rng.uniform(m.lo.z, m.hi.z)};
}

}  // namespace

NodePlacement place_ues(const Plant& plant, int n, RngStream& rng,
                        const ChannelModel& ch, int max_attempts) {
    if (n < 2 || n % 2 != 0) throw ConfigError("UE count must be even and >= 2");
    if (plant.machines.empty()) throw ConfigError("cannot place UEs without machines");

    const int want_connected = n / 2;
    NodePlacement placement;
    placement.bs_pos = plant.bs_position();

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<Vec3> pos(n);
        std::vector<int> machine(n);
        int connected = 0;
        for (int j = 0; j < n; ++j) {
            machine[j] = static_cast<int>(
                rng.uniform_int(0, static_cast<std::int64_t>(plant.machines.size()) - 1));
            pos[j] = sample_in_machine(plant.machines[machine[j]], rng);
            if (uplink_budget(pos[j], plant, ch).decodable) ++connected;
        }
        if (connected == want_connected) {
            placement.ue_pos = std::move(pos);
            placement.containing_machine = std::move(machine);
            return placement;
        }
    }
    throw ConfigError("half-connected placement constraint unsatisfiable within budget");
}

void mobility_epoch(NodePlacement& placement, const Plant& plant, double p_move,
                    RngStream& rng) {
    for (std::size_t j = 0; j < placement.ue_pos.size(); ++j) {
        if (rng.uniform01() >= p_move) continue;
        const int m = static_cast<int>(
            rng.uniform_int(0, static_cast<std::int64_t>(plant.machines.size()) - 1));
        placement.containing_machine[j] = m;
        placement.ue_pos[j] = sample_in_machine(plant.machines[m], rng);
    }
}

std::vector<MachineSpec> default_machine_layout() {
    // Cluster of machines straddling the uplink coverage boundary east of the
    // BS; disconnected volumes sit within UE-UE relay range of the connected
    // volumes, so multi-hop paths to the BS usually exist.
    return {
        {38.27, 25.41, 4.0},
        {35.64, 21.39, 4.0},
        {39.67, 19.36, 4.0},
        {34.19, 25.51, 4.0},
        {38.89, 16.16, 2.0},
        {38.91, 22.37, 2.0},
        {36.84, 16.24, 2.0},
        {36.66, 18.36, 2.0},
    };
}

}  // namespace thzsim
