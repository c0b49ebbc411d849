#include "mxspec/rng.hpp"

#include <bit>

namespace mxspec {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::next() noexcept {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double Rng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // 128-bit multiply-shift with rejection of the biased low zone.
  auto product = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                          std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t name = 0xCBF29CE484222325ULL;
  for (unsigned char c : stream) {
    name ^= c;
    name *= 0x100000001B3ULL;
  }
  std::uint64_t h = mix64(master ^ 0x9E3779B97F4A7C15ULL);
  h = mix64(h ^ name);
  for (std::uint64_t t : tags) h = mix64(h + 0x9E3779B97F4A7C15ULL + t);
  return h;
}

std::uint64_t real_tag(double value) noexcept {
  if (value == 0.0) value = 0.0;
  return std::bit_cast<std::uint64_t>(value);
}

}  // namespace mxspec
