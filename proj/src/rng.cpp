#include "tcsde/rng.hpp"

namespace tcsde {

Rng make_stream(std::uint64_t seed, std::uint64_t path_index, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path_index),
                      static_cast<std::uint32_t>(path_index >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Rng(seq);
}

}  // namespace tcsde
