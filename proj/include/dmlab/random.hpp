// Deterministic random inputs: SplitMix64 seed derivation and hand-rolled
// distributions, so that identical seeds give byte-identical results on any
// conforming platform.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmlab/grid.hpp"

namespace dmlab {

/// Advance a SplitMix64 state and return the next well-mixed word.
std::uint64_t splitmix64(std::uint64_t& state);

/// Independent child seed for a numbered lane (trial, resolution, ...).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t lane);

/// Small deterministic generator over a SplitMix64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double a, double b);
  /// Standard normal via Box-Muller (spare value cached).
  double normal();
  /// Student t with 3 degrees of freedom, clipped to |t| <= 1e3.
  double student_t3();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class MartingaleLaw { kBounded, kGaussian, kHeavy, kSparse };

/// Parse "bounded" | "gaussian" | "heavy" | "sparse".
MartingaleLaw parse_law(const std::string& name);
std::string law_name(MartingaleLaw law);

/// Random leaf values under the law: bounded uniforms, standard normals,
/// clipped Student-t3 tails, or a handful of isolated spikes.
SampledFunction random_function(DyadicGrid g, MartingaleLaw law, Rng& rng);

/// Centered martingale of a random function (first level zero).
DyadicMartingale random_martingale(DyadicGrid g, MartingaleLaw law, Rng& rng);

/// Predictable multiplier sequence with |v_n| <= 1; entry n multiplies d_{n+1},
/// so the top entry is inert padding that keeps the process shape uniform.
AdaptedProcess random_multipliers(DyadicGrid g, Rng& rng);

/// count independent nonnegative random functions (absolute values of the law).
std::vector<SampledFunction> random_nonneg_batch(DyadicGrid g, int count,
                                                 MartingaleLaw law, Rng& rng);

/// Strictly positive weight with values log-uniform in [lo, hi].
SampledFunction random_weight(DyadicGrid g, Rng& rng, double lo = 0.25, double hi = 4.0);

}  // namespace dmlab
