#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

namespace discgan {

/// Seeded pseudo-random source. All randomness in the toolkit is drawn from
/// an explicitly passed Rng so runs are reproducible from their seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();  // [0, 1)
  double normal();   // standard normal
  double normal(double mean, double sd) { return mean + sd * normal(); }
  std::size_t index(std::size_t n);  // uniform over [0, n)

  std::mt19937_64& engine() { return engine_; }

  /// Full generator state as text (engine plus the cached normal variate).
  std::string state() const;
  void set_state(const std::string& text);  // StateError on malformed text

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Combines a seed with a stream identifier (splitmix64 finalizer), used to
/// derive independent sub-streams such as hash(seed, step, worker).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

}  // namespace discgan
