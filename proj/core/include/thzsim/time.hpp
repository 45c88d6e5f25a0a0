#ifndef THZSIM_TIME_HPP
#define THZSIM_TIME_HPP

#include <cstdint>
#include <cmath>

namespace thzsim {

/// Virtual time in integer picoseconds. All protocol timings (backoff slots,
/// airtimes, propagation delays) are exact in this unit.
using SimTime = std::int64_t;

constexpr SimTime kPicosecond = 1;
constexpr SimTime kNanosecond = 1'000;
constexpr SimTime kMicrosecond = 1'000'000;
constexpr SimTime kMillisecond = 1'000'000'000;

constexpr double to_seconds(SimTime t) { return static_cast<double>(t) * 1e-12; }

inline SimTime seconds_to_ticks(double s) {
    return static_cast<SimTime>(std::llround(s * 1e12));
}

}  // namespace thzsim

#endif
