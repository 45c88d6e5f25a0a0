#ifndef THZSIM_RNG_HPP
#define THZSIM_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace thzsim {

/// Labeled, seeded random stream. The same (seed, label) pair reproduces the
/// same draw sequence on every platform: mt19937_64 is fully specified by the
/// standard and the bounded draws below avoid std::uniform_int_distribution,
/// whose output is implementation-defined.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label)
        : label_(label), engine_(mix(seed, fnv1a(label))) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [lo, hi], both inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::logic_error("RngStream::uniform_int: lo > hi");
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1u;
        if (range == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit span
        // rejection sampling, no modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % range);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    const std::string& label() const { return label_; }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t label_hash) {
        // splitmix64 finalizer over the combined value
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull + label_hash;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::string label_;
    std::mt19937_64 engine_;
};

}  // namespace thzsim

#endif
