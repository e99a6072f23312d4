#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, index), so parallel schedules cannot change the output.
// The bit generator is Philox4x32-10 (Salmon et al., SC'11).

#include <array>
#include <cstdint>

namespace nlpsa {

using PhiloxBlock = std::array<std::uint32_t, 4>;

/// Ten rounds of Philox4x32 on `counter` under a 64-bit key.
PhiloxBlock philox4x32(PhiloxBlock counter, std::uint64_t key) noexcept;

/// Two independent uniforms in (0, 1), 53-bit resolution.
std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t index) noexcept;

/// Standard normal via Box-Muller on uniform_pair(seed, stream, index).
double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

}  // namespace nlpsa
