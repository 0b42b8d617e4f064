// Deterministic distributions over SplitMix64 streams.
#include "dmlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmlab {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t lane) {
  std::uint64_t s = root ^ (0x9e3779b97f4a7c15ULL * (lane + 1));
  splitmix64(s);
  splitmix64(s);
  return s;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 < 0x1p-60);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925287 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double Rng::student_t3() {
  double z = normal();
  double c1 = normal(), c2 = normal(), c3 = normal();
  double chi = c1 * c1 + c2 * c2 + c3 * c3;
  if (chi < 1e-12) chi = 1e-12;
  double t = z / std::sqrt(chi / 3.0);
  return std::clamp(t, -1e3, 1e3);
}

std::size_t Rng::index(std::size_t n) {
  // Rejection-free scaling is fine here: n is a power of two in practice.
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

MartingaleLaw parse_law(const std::string& name) {
  if (name == "bounded") return MartingaleLaw::kBounded;
  if (name == "gaussian") return MartingaleLaw::kGaussian;
  if (name == "heavy") return MartingaleLaw::kHeavy;
  if (name == "sparse") return MartingaleLaw::kSparse;
  throw std::invalid_argument("unknown law '" + name +
                              "' (expected bounded|gaussian|heavy|sparse)");
}

std::string law_name(MartingaleLaw law) {
  switch (law) {
    case MartingaleLaw::kBounded: return "bounded";
    case MartingaleLaw::kGaussian: return "gaussian";
    case MartingaleLaw::kHeavy: return "heavy";
    case MartingaleLaw::kSparse: return "sparse";
  }
  return "?";
}

SampledFunction random_function(DyadicGrid g, MartingaleLaw law, Rng& rng) {
  std::vector<double> v(g.leaf_count(), 0.0);
  switch (law) {
    case MartingaleLaw::kBounded:
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      break;
    case MartingaleLaw::kGaussian:
      for (double& x : v) x = rng.normal();
      break;
    case MartingaleLaw::kHeavy:
      for (double& x : v) x = rng.student_t3();
      break;
    case MartingaleLaw::kSparse: {
      std::size_t spikes = std::max<std::size_t>(2, g.leaf_count() / 32);
      for (std::size_t s = 0; s < spikes; ++s) {
        std::size_t pos = rng.index(g.leaf_count());
        double mag = rng.uniform(0.5, 2.5);
        v[pos] = (rng.uniform() < 0.5) ? -mag : mag;
      }
      break;
    }
  }
  return SampledFunction(g, std::move(v));
}

DyadicMartingale random_martingale(DyadicGrid g, MartingaleLaw law, Rng& rng) {
  return martingale_of(random_function(g, law, rng), true);
}

AdaptedProcess random_multipliers(DyadicGrid g, Rng& rng) {
  std::vector<std::vector<double>> v(static_cast<std::size_t>(g.resolution) + 1);
  for (int n = 0; n < g.resolution; ++n) {
    v[static_cast<std::size_t>(n)].resize(std::size_t{1} << n);
    for (double& x : v[static_cast<std::size_t>(n)]) x = rng.uniform(-1.0, 1.0);
  }
  // Top entry mirrors its parents; nothing downstream multiplies by it.
  if (g.resolution == 0) {
    v.back() = {0.0};
  } else {
    const auto& prev = v[static_cast<std::size_t>(g.resolution - 1)];
    std::vector<double> top(g.leaf_count());
    for (std::size_t i = 0; i < top.size(); ++i) top[i] = prev[i >> 1];
    v.back() = std::move(top);
  }
  return AdaptedProcess(g, std::move(v));
}

std::vector<SampledFunction> random_nonneg_batch(DyadicGrid g, int count,
                                                 MartingaleLaw law, Rng& rng) {
  std::vector<SampledFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    auto f = random_function(g, law, rng);
    for (double& x : f.values) x = std::abs(x);
    out.push_back(std::move(f));
  }
  return out;
}

SampledFunction random_weight(DyadicGrid g, Rng& rng, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("weight range must satisfy 0 < lo < hi");
  std::vector<double> v(g.leaf_count());
  double lr = std::log(lo), hr = std::log(hi);
  for (double& x : v) x = std::exp(rng.uniform(lr, hr));
  return SampledFunction(g, std::move(v));
}

}  // namespace dmlab
