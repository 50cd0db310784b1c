#ifndef PAIRRANK_RNG_H_
#define PAIRRANK_RNG_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace pairrank {

// Seeded random stream. Wraps a 64-bit Mersenne twister and draws doubles
// from the top 53 bits so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  // Derives an independent stream from a master seed and a stream name, so
  // adding draws to one consumer never shifts another.
  static Rng Substream(uint64_t master_seed, std::string_view name);

  // Uniform in [0, 1).
  double Uniform();
  // Uniform integer in [0, n). Requires n > 0.
  uint64_t UniformInt(uint64_t n);
  bool Bernoulli(double p) { return Uniform() < p; }
  double Normal();

  uint64_t NextU64() { return engine_(); }

  // Engine state as text, for checkpoints.
  std::string Serialize() const;
  static Rng Deserialize(const std::string& state);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pairrank

#endif  // PAIRRANK_RNG_H_
