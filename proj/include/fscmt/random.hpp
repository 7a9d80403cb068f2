#pragma once

#include <cstdint>
#include <random>

namespace fscmt {

using Rng = std::mt19937_64;

/// Independent stream for one Monte Carlo trial, a function of its arguments only.
inline Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

}  // namespace fscmt
