#include "aicsel/seeds.hpp"

namespace aicsel {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t repetition, std::uint64_t mIndex,
                          StreamTag tag) {
  std::uint64_t h = mix64(base);
  h = mix64(h ^ static_cast<std::uint64_t>(tag));
  h = mix64(h ^ repetition);
  h = mix64(h ^ mIndex);
  return h;
}

}  // namespace aicsel
