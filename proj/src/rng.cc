#include "pairrank/rng.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pairrank {
namespace {

// FNV-1a over the stream name.
uint64_t HashName(std::string_view name) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng Rng::Substream(uint64_t master_seed, std::string_view name) {
  return Rng(SplitMix64(SplitMix64(master_seed) ^ HashName(name)));
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

uint64_t Rng::UniformInt(uint64_t n) {
  if (n == 0) throw std::invalid_argument("UniformInt: n must be positive");
  // Rejection sampling removes modulo bias.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Normal() {
  // Box-Muller; one variate per call keeps the stream position simple.
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::string Rng::Serialize() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

Rng Rng::Deserialize(const std::string& state) {
  Rng rng;
  std::istringstream in(state);
  in >> rng.engine_;
  if (in.fail()) throw std::invalid_argument("malformed rng state");
  return rng;
}

}  // namespace pairrank
