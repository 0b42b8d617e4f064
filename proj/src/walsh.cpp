#include "dmlab/walsh.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace dmlab {

namespace {

/// In-place Walsh–Hadamard butterflies: out[m] = sum_j in[j] (-1)^{popcount(m&j)}.
void wht_inplace(std::vector<double>& a) {
  for (std::size_t len = 1; len < a.size(); len <<= 1)
    for (std::size_t base = 0; base < a.size(); base += 2 * len)
      for (std::size_t k = base; k < base + len; ++k) {
        double u = a[k], v = a[k + len];
        a[k] = u + v;
        a[k + len] = u - v;
      }
}

int parity64(std::uint64_t x) { return std::popcount(x) & 1; }

/// Leaf-index offset of the dyadic translation by 2^{-j-1} (zero once the
/// shift drops below the leaf size; leaf-constant functions do not see it).
std::size_t translation_offset(int j, int N) {
  return (j + 1 <= N) ? (std::size_t{1} << (N - j - 1)) : 0;
}

std::vector<std::size_t> leaf_reversals(const DyadicGrid& g) {
  std::vector<std::size_t> rev(g.leaf_count());
  for (std::size_t i = 0; i < rev.size(); ++i) rev[i] = bit_reverse(i, g.resolution);
  return rev;
}

void check_kernel_order(int n, const DyadicGrid& g) {
  if (n < 1 || (std::size_t)n > g.leaf_count())
    throw std::invalid_argument("kernel order outside [1, 2^N]");
}

}  // namespace

std::size_t bit_reverse(std::size_t i, int bits) {
  std::size_t out = 0;
  for (int b = 0; b < bits; ++b) out |= ((i >> b) & 1u) << (bits - 1 - b);
  return out;
}

SampledFunction rademacher(int n, DyadicGrid grid) {
  if (n < 0 || n >= grid.resolution)
    throw std::invalid_argument("rademacher index not resolvable on this grid");
  std::vector<double> v(grid.leaf_count());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = ((i >> (grid.resolution - 1 - n)) & 1u) ? -1.0 : 1.0;
  return SampledFunction(grid, std::move(v));
}

SampledFunction walsh_function(std::size_t n, DyadicGrid grid) {
  if (n >= grid.leaf_count()) throw std::invalid_argument("walsh index not resolvable on this grid");
  std::vector<double> v(grid.leaf_count());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = parity64(n & bit_reverse(i, grid.resolution)) ? -1.0 : 1.0;
  return SampledFunction(grid, std::move(v));
}

WalshSpectrum analyze(const SampledFunction& f) {
  const int N = f.grid.resolution;
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[bit_reverse(i, N)] = f[i];
  wht_inplace(a);
  const double scale = f.grid.leaf_measure();
  double energy_f = 0.0, energy_c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] *= scale;
    energy_c += a[i] * a[i];
    energy_f += f[i] * f[i];
  }
  energy_f *= scale;
  if (std::fabs(energy_c - energy_f) > 1e-10 * std::max(1.0, energy_f))
    throw std::logic_error("energy identity violated in the coefficient transform");
  return WalshSpectrum{f.grid, std::move(a)};
}

SampledFunction synthesize(const WalshSpectrum& spec) {
  if (spec.coeffs.size() != spec.grid.leaf_count())
    throw std::invalid_argument("spectrum size does not match its grid");
  std::vector<double> a = spec.coeffs;
  wht_inplace(a);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[bit_reverse(i, spec.grid.resolution)];
  return SampledFunction(spec.grid, std::move(out));
}

Kernel dirichlet_kernel(int n, DyadicGrid grid) {
  check_kernel_order(n, grid);
  WalshSpectrum spec{grid, std::vector<double>(grid.leaf_count(), 0.0)};
  for (int k = 0; k < n; ++k) spec.coeffs[static_cast<std::size_t>(k)] = 1.0;
  return Kernel{grid, KernelKind::kDirichlet, n, synthesize(spec)};
}

Kernel fejer_kernel(int n, DyadicGrid grid) {
  check_kernel_order(n, grid);
  WalshSpectrum spec{grid, std::vector<double>(grid.leaf_count(), 0.0)};
  for (int j = 0; j < n; ++j)
    spec.coeffs[static_cast<std::size_t>(j)] = static_cast<double>(n - j) / static_cast<double>(n);
  Kernel out{grid, KernelKind::kFejer, n, synthesize(spec)};

  if ((n & (n - 1)) == 0) {
    // Power-of-two orders obey the half-sum translation identity exactly
    // (every quantity is a dyadic rational, so equality is bitwise).
    const int m = std::countr_zero(static_cast<unsigned>(n));
    const int N = grid.resolution;
    auto d = dirichlet_kernel(n, grid).values;
    for (std::size_t leaf = 0; leaf < grid.leaf_count(); ++leaf) {
      double rhs = std::exp2(-m) * d[leaf];
      for (int j = 0; j <= m; ++j)
        rhs += std::exp2(j - m) * d[leaf ^ translation_offset(j, N)];
      rhs *= 0.5;
      if (rhs != out.values[leaf])
        throw std::logic_error("translation identity failed for a dyadic kernel order");
    }
  }
  return out;
}

SampledFunction fejer_kernel_bound(int n, DyadicGrid grid) {
  check_kernel_order(n, grid);
  const int N = grid.resolution;
  int B = 0;
  while ((1 << B) <= n) ++B;  // 2^{B-1} <= n < 2^B
  std::vector<double> v(grid.leaf_count(), 0.0);
  for (std::size_t leaf = 0; leaf < v.size(); ++leaf) {
    double total = 0.0;
    for (int j = 0; j < B; ++j) {
      std::size_t shifted = leaf ^ translation_offset(j, N);
      double inner = 0.0;
      for (int i = j; i < B; ++i) {
        inner += ((leaf >> (N - i)) == 0 ? std::exp2(i) : 0.0);
        inner += ((shifted >> (N - i)) == 0 ? std::exp2(i) : 0.0);
      }
      total += std::exp2(j - B) * inner;
    }
    v[leaf] = total;
  }
  return SampledFunction(grid, std::move(v));
}

SampledFunction partial_sum(const SampledFunction& f, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("partial sum order must be positive");
  if (n >= static_cast<std::int64_t>(f.size())) return f;
  auto spec = analyze(f);
  for (std::size_t k = static_cast<std::size_t>(n); k < spec.coeffs.size(); ++k)
    spec.coeffs[k] = 0.0;
  return synthesize(spec);
}

SampledFunction partial_sum_convolution(const SampledFunction& f, int n) {
  auto kernel = dirichlet_kernel(n, f.grid).values;
  const double scale = f.grid.leaf_measure();
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t x = 0; x < out.size(); ++x) {
    double acc = 0.0;
    for (std::size_t t = 0; t < out.size(); ++t) acc += f[t] * kernel[x ^ t];
    out[x] = acc * scale;
  }
  return SampledFunction(f.grid, std::move(out));
}

SampledFunction transform_T0(const SampledFunction& f, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("transform order must be positive");
  const int N = f.grid.resolution;
  auto m = martingale_of(f, /*center=*/false);
  SampledFunction out(f.grid, std::vector<double>(f.size(), 0.0));
  // Digit k-1 of n gates d_k; digits at or beyond N gate differences that
  // vanish on a resolution-N function, so the loop stops at N.
  for (int k = 1; k <= N; ++k) {
    if (((n >> (k - 1)) & 1) == 0) continue;
    auto d = m.difference_blocks(k);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i >> (N - k)];
  }
  return out;
}

SampledFunction partial_sum_via_T0(const SampledFunction& f, std::int64_t n) {
  const int N = f.grid.resolution;
  if (n < 1 || n > static_cast<std::int64_t>(f.size()))
    throw std::invalid_argument("transform pathway needs 1 <= n <= 2^N");
  if (n < static_cast<std::int64_t>(f.size())) {
    auto w = walsh_function(static_cast<std::size_t>(n), f.grid);
    auto g = f;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= w[i];
    auto t = transform_T0(g, n);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] *= w[i];
    return t;
  }
  // n = 2^N: w_n oscillates inside leaves, so work one level finer.
  DyadicGrid fine(N + 1);
  SampledFunction f2(fine, std::vector<double>(fine.leaf_count()));
  for (std::size_t i = 0; i < f2.size(); ++i) f2[i] = f[i >> 1];
  auto w = walsh_function(static_cast<std::size_t>(n), fine);
  auto g = f2;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= w[i];
  auto t = transform_T0(g, n);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] *= w[i];
  std::vector<double> coarse(f.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = 0.5 * (t[2 * i] + t[2 * i + 1]);
  return SampledFunction(f.grid, std::move(coarse));
}

SampledFunction fejer_mean(const SampledFunction& f, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("mean order must be positive");
  const auto M = static_cast<std::int64_t>(f.size());
  auto spec = analyze(f);
  if (n <= M) {
    for (std::size_t j = 0; j < spec.coeffs.size(); ++j)
      spec.coeffs[j] *= (static_cast<std::int64_t>(j) < n)
                            ? static_cast<double>(n - static_cast<std::int64_t>(j)) /
                                  static_cast<double>(n)
                            : 0.0;
    return synthesize(spec);
  }
  // Past the spectrum every partial sum equals f, so the average closes up.
  for (std::size_t j = 0; j < spec.coeffs.size(); ++j)
    spec.coeffs[j] *= static_cast<double>(M - static_cast<std::int64_t>(j));
  auto A = synthesize(spec);  // sum_{k<=2^N} s_k f
  SampledFunction out(f.grid, std::vector<double>(f.size()));
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (A[i] + static_cast<double>(n - M) * f[i]) * inv;
  return out;
}

SampledFunction fejer_mean_convolution(const SampledFunction& f, int n) {
  auto kernel = fejer_kernel(n, f.grid).values;
  const double scale = f.grid.leaf_measure();
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t x = 0; x < out.size(); ++x) {
    double acc = 0.0;
    for (std::size_t t = 0; t < out.size(); ++t) acc += f[t] * kernel[x ^ t];
    out[x] = acc * scale;
  }
  return SampledFunction(f.grid, std::move(out));
}

namespace {

/// Shared enumeration for the maximal means: walks n = 1..2^N keeping the
/// running partial sum and its prefix total, then closes the tail with the
/// endpoint values of the monotone map n -> f + (A - 2^N f)/n.
SampledFunction maximal_fejer_impl(const SampledFunction& f, bool dyadic_only) {
  const std::size_t L = f.size();
  auto spec = analyze(f);
  auto rev = leaf_reversals(f.grid);

  std::vector<double> s(L, 0.0);    // current partial sum s_n
  std::vector<double> acc(L, 0.0);  // sum of s_1..s_n
  std::vector<double> best(L, 0.0);
  for (std::size_t n = 1; n <= L; ++n) {
    const double c = spec.coeffs[n - 1];
    for (std::size_t i = 0; i < L; ++i) {
      s[i] += parity64((n - 1) & rev[i]) ? -c : c;
      acc[i] += s[i];
    }
    if (!dyadic_only || (n & (n - 1)) == 0) {
      const double inv = 1.0 / static_cast<double>(n);
      for (std::size_t i = 0; i < L; ++i)
        best[i] = std::max(best[i], std::fabs(acc[i] * inv));
    }
  }
  // Tail: |sigma_n| is convex along 1/n, so only the first out-of-band order
  // and the limit |f| can host the supremum.
  const double Ld = static_cast<double>(L);
  const double first = dyadic_only ? 2.0 * Ld : Ld + 1.0;
  for (std::size_t i = 0; i < L; ++i) {
    double sigma_first = (acc[i] + (first - Ld) * f[i]) / first;
    best[i] = std::max({best[i], std::fabs(sigma_first), std::fabs(f[i])});
  }
  return SampledFunction(f.grid, std::move(best));
}

}  // namespace

SampledFunction maximal_fejer(const SampledFunction& f) { return maximal_fejer_impl(f, false); }

SampledFunction maximal_fejer_dyadic(const SampledFunction& f) {
  return maximal_fejer_impl(f, true);
}

WalshSpectrum read_spectrum_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("ordering", "") != std::string("paley"))
    throw std::runtime_error("spectrum file must declare \"ordering\": \"paley\"");
  const int res = j.at("resolution").get<int>();
  if (res < 0 || res > DyadicGrid::max_resolution())
    throw std::runtime_error("spectrum resolution out of range");
  auto coeffs = j.at("coeffs").get<std::vector<double>>();
  DyadicGrid g(res);
  if (coeffs.size() != g.leaf_count())
    throw std::runtime_error("spectrum size does not match its resolution");
  return WalshSpectrum{g, std::move(coeffs)};
}

void write_spectrum_json(const WalshSpectrum& spec, const std::string& path) {
  nlohmann::json j;
  j["resolution"] = spec.grid.resolution;
  j["ordering"] = "paley";
  j["coeffs"] = spec.coeffs;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dmlab
