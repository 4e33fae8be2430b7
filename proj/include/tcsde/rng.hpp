#pragma once

#include <cstdint>
#include <random>

namespace tcsde {

using Rng = std::mt19937_64;

// Independent random streams per (seed, path index). Each component of a
// simulated path draws from its own stream so that e.g. lengthening the
// Brownian path never shifts the jump marks.
enum class Stream : std::uint32_t {
    clock = 1,
    brownian = 2,
    small_marks = 3,
    large_marks = 4,
    auxiliary = 5,
};

Rng make_stream(std::uint64_t seed, std::uint64_t path_index, Stream stream);

// Uniform on the open interval (0, 1) from 53 random bits.
inline double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace tcsde
