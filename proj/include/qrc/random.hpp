#pragma once

#include <cstdint>
#include <random>

namespace qrc {

/// Independent generator streams derived from one user seed.
enum class Stream : std::uint32_t { Couplings = 0, Inputs = 1, EsnWeights = 2 };

inline std::mt19937_64 make_engine(std::uint64_t seed, Stream stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) from the top 53 bits; identical across standard libraries.
inline double uniform01(std::mt19937_64& engine)
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

} // namespace qrc
