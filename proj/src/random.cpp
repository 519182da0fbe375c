#include "tssort/random.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace tssort {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t part : parts) h = mix64(h ^ mix64(part));
  return h;
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below needs a positive bound");
  // Largest multiple of bound representable in 64 bits, minus one.
  const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - bound) % bound;
  std::uint64_t x = next();
  while (limit != 0 && x >= limit) x = next();
  return x % bound;
}

std::vector<std::size_t> shuffled_identity(std::size_t n, Rng& rng) {
  std::vector<std::size_t> list(n);
  std::iota(list.begin(), list.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(list[i - 1], list[j]);
  }
  return list;
}

}  // namespace tssort
