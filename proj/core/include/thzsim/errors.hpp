#ifndef THZSIM_ERRORS_HPP
#define THZSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thzsim {

/// Invalid user-supplied configuration (bad file, impossible scenario, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace thzsim

#endif
