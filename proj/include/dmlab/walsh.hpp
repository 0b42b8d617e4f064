// Walsh–Paley analysis on the dyadic grid: Rademacher/Walsh functions, fast
// transform with Parseval self-check, Dirichlet and Fejér kernels with their
// translation identities, partial sums (spectral, convolution, and transform
// pathways), Fejér means with an exact out-of-band tail, and the pointwise
// maximal Fejér function computed without truncation error.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dmlab/grid.hpp"

namespace dmlab {

/// Walsh–Fourier coefficients in Paley order: coeffs[m] = E(f * w_m).
struct WalshSpectrum {
  DyadicGrid grid;
  std::vector<double> coeffs;
};

enum class KernelKind { kDirichlet, kFejer };

struct Kernel {
  DyadicGrid grid;
  KernelKind kind = KernelKind::kDirichlet;
  int order = 1;
  SampledFunction values;
};

/// Reverse the low `bits` bits of i.
std::size_t bit_reverse(std::size_t i, int bits);

/// r_n(x) = sign of the (n+1)th binary digit, sampled on leaves; needs n < N.
SampledFunction rademacher(int n, DyadicGrid grid);

/// w_n = product of Rademacher functions over the set bits of n; needs n < 2^N.
SampledFunction walsh_function(std::size_t n, DyadicGrid grid);

/// Fast O(N 2^N) coefficient transform; throws if the Parseval identity
/// degrades beyond 1e-10 relative (an internal-consistency guard).
WalshSpectrum analyze(const SampledFunction& f);
SampledFunction synthesize(const WalshSpectrum& spec);

/// D_n = sum_{k<n} w_k; needs 1 <= n <= 2^N.
Kernel dirichlet_kernel(int n, DyadicGrid grid);

/// K_n = (1/n) sum_{k=1..n} D_k; needs 1 <= n <= 2^N. Powers of two are
/// cross-checked exactly against the half-sum translation identity
/// K_{2^m}(x) = (1/2)[2^{-m} D_{2^m}(x) + sum_{j<=m} 2^{j-m} D_{2^m}(x + 2^{-j-1})]
/// (dyadic translation), which must match bit for bit.
Kernel fejer_kernel(int n, DyadicGrid grid);

/// Pointwise upper bound for |K_n|: with B the bit width of n (2^{B-1} <= n < 2^B),
/// bound(x) = sum_{j<B} 2^{j-B} sum_{i=j}^{B-1} [D_{2^i}(x) + D_{2^i}(x + 2^{-j-1})].
SampledFunction fejer_kernel_bound(int n, DyadicGrid grid);

/// s_n f = sum_{k<n} fhat(k) w_k via the fast transform; n > 2^N returns f.
SampledFunction partial_sum(const SampledFunction& f, std::int64_t n);

/// Same value through the kernel convolution s_n f(x) = E_t[f(t) D_n(x+t)].
SampledFunction partial_sum_convolution(const SampledFunction& f, int n);

/// T0(f) = sum_k digit_{k-1}(n) d_k(f): the martingale transform whose
/// predictable multipliers are the binary digits of n.
SampledFunction transform_T0(const SampledFunction& f, std::int64_t n);

/// s_n f computed as w_n * T0(f w_n); n = 2^N is handled by refining one
/// level so that w_n is sampleable; needs 1 <= n <= 2^N.
SampledFunction partial_sum_via_T0(const SampledFunction& f, std::int64_t n);

/// sigma_n f = (1/n) sum_{k=1..n} s_k f. For n > 2^N the spectrum is
/// exhausted and the exact form (1/n)[sum_{k<=2^N} s_k f + (n - 2^N) f] is used.
SampledFunction fejer_mean(const SampledFunction& f, std::int64_t n);

/// sigma_n f through the kernel: E_t[f(t) K_n(x+t)]; needs 1 <= n <= 2^N.
SampledFunction fejer_mean_convolution(const SampledFunction& f, int n);

/// Exact sup_{n>=1} |sigma_n f| pointwise. All n <= 2^N are enumerated; past
/// the spectrum sigma_n = f + (A - 2^N f)/n moves monotonically toward f, so
/// the tail supremum is max(|sigma_{2^N+1}|, |f|) with no truncation error.
SampledFunction maximal_fejer(const SampledFunction& f);

/// Same supremum restricted to dyadic orders n = 2^m.
SampledFunction maximal_fejer_dyadic(const SampledFunction& f);

/// JSON: {"resolution": N, "ordering": "paley", "coeffs": [...]}.
WalshSpectrum read_spectrum_json(const std::string& path);
void write_spectrum_json(const WalshSpectrum& spec, const std::string& path);

}  // namespace dmlab
