#pragma once

#include <cstdint>

namespace aicsel {

/// Purpose tags keep independent random streams apart.
enum class StreamTag : std::uint64_t {
  kPerturbation = 0x5045,  // random PI state for a repetition
  kSampling = 0x5341,      // multinomial shots for (repetition, M)
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stream seed for (base, repetition, M-index, tag). Each coordinate is folded
/// in through mix64, so appending grid points or repetitions never changes
/// the seeds of existing work items.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t repetition, std::uint64_t mIndex,
                          StreamTag tag);

}  // namespace aicsel
