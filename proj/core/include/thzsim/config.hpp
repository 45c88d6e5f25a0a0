#ifndef THZSIM_CONFIG_HPP
#define THZSIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "thzsim/scenario.hpp"
#include "thzsim/simulation.hpp"

namespace thzsim {

/// Full experiment configuration, as read from the sectioned key=value config
/// file. Every field has a default; only the protocol must be given.
struct RunConfig {
    // [scenario]
    Vec3 plant_dims{52.36, 35.4, 8.5};
    std::vector<MachineSpec> machines = default_machine_layout();
    int n_ues = 4;
    bool dynamic = false;
    double t_move_s = 0;  // 0 -> t_sim / 10
    double p_move = 0.5;
    // [radio]
    RadioParams radio;
    // [mac]
    MacParams mac;
    // [run]
    RoutingMode protocol = RoutingMode::Ualoha;
    std::uint64_t seed_base = 1;
    int runs = 20;
    double t_sim_s = 0.5e-3;

    bool operator==(const RunConfig& o) const;
};

/// Parses the sectioned key=value format ('#' comments). Unknown sections or
/// keys, malformed values, and out-of-range settings raise ConfigError with
/// the offending line number.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

/// Prints a config document that parses back to an identical RunConfig.
std::string print_config(const RunConfig& cfg);

const char* routing_mode_name(RoutingMode m);

/// Materializes one seeded run (plant built and validated here).
SimConfig to_sim_config(const RunConfig& cfg, std::uint64_t seed);

}  // namespace thzsim

#endif
