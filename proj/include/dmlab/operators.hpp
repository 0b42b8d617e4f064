// Martingale operators on the dyadic grid: Doob maximal function, quadratic
// variations, Hardy-space norm bundle, martingale transforms, dual-Doob and
// Stein sums, the vector-valued maximal function, exact weak-type values, and
// the translated-block maximal operators U and V.
#pragma once

#include <vector>

#include "dmlab/grid.hpp"
#include "dmlab/musielak.hpp"

namespace dmlab {

/// Six norms of one martingale under one integrand, plus the processes they
/// were read from where that is useful downstream.
struct HardyNormReport {
  double maximal = 0.0;      // ||max_n |f_n|||
  double square = 0.0;       // ||S(f)||
  double cond_square = 0.0;  // ||s(f)||
  double envelope_max = 0.0;     // ||lambda_N|| for the minimal envelope of |f_n|
  double envelope_square = 0.0;  // same with S_n(f) driving the envelope
  double diff_sum = 0.0;         // ||sum_n |d_n|||
};

/// Pointwise max_{0<=i<=upto} |f_i|; pass upto < 0 (default) for all levels.
SampledFunction doob_maximal(const DyadicMartingale& m, int upto = -1);

enum class VariationKind { kSquare, kConditional };

/// kSquare: (sum_{1<=i<=upto} d_i^2)^(1/2).
/// kConditional: (sum_{1<=i<=upto} E_{i-1}(d_i^2))^(1/2); each partial sum is
/// already block-constant one level early.
SampledFunction variation(const DyadicMartingale& m, VariationKind kind, int upto = -1);

/// Partial variations as an adapted process: entry n is the level-n partial
/// sum (entry 0 is zero). For kConditional, entry n is built on 2^{n-1}
/// blocks and expanded, so its one-level-early measurability is structural.
AdaptedProcess variation_process(const DyadicMartingale& m, VariationKind kind);

/// All six norms for a centered martingale.
HardyNormReport hardy_norms(const DyadicMartingale& m, const MusielakFunction& phi);

/// (Tf)_n = sum_{k<=n} v_{k-1} d_k with (Tf)_0 = 0. Uses entries 0..N-1 of v;
/// requires |v| <= 1 everywhere (checked) and matching grids.
DyadicMartingale martingale_transform(const DyadicMartingale& m, const AdaptedProcess& v);

/// lhs = sum_j E_{k_j}(g_j) with k_j = clamp(j + 1 + shift, 0, N), rhs = sum_j g_j.
/// shift = 0 conditions each summand on its own level; shift = -1 conditions
/// one level earlier, which turns g_j = d_{j+1}^2 into the conditional square
/// function squared. Entries must be nonnegative.
std::pair<SampledFunction, SampledFunction> dual_doob_sum(
    const std::vector<SampledFunction>& gs, int shift = 0);

/// lhs = (sum_j [E_{j+1} g_j]^r)^(1/r), rhs = (sum_j g_j^r)^(1/r); needs r > 1
/// and nonnegative entries.
std::pair<SampledFunction, SampledFunction> stein_sum(
    const std::vector<SampledFunction>& gs, double r);

/// lhs = (sum_j M(f_j)^r)^(1/r) with M the uncentered Doob maximal function,
/// rhs = (sum_j |f_j|^r)^(1/r); needs r > 1.
std::pair<SampledFunction, SampledFunction> vector_maximal(
    const std::vector<SampledFunction>& fs, double r);

/// Exact sup_{rho>0} rho * ||1_{{M(f) > rho}}||_phi, found by enumerating the
/// finitely many level-set boundaries of M(f).
double weak_type_value(const DyadicMartingale& m, const MusielakFunction& phi);

/// U(x) = sum_{j<n} 2^{(j-n)r} * |integral of f over I_x + 2^{-j-1}| / nu(same),
/// where I_x is the level-n block containing x, + is bitwise-xor translation,
/// and nu has density weight (Lebesgue in the overload without a weight).
/// Requires 0 <= n <= resolution, r > 0, strictly positive weight.
SampledFunction U_maximal(const SampledFunction& f, const SampledFunction& weight,
                          double r, int n);
SampledFunction U_maximal(const SampledFunction& f, double r, int n);

/// V(x) = sum_{j<n} sum_{j<=i<n} 2^{(j-n)r} 2^{(i-n)r} 2^{n-i} *
/// |integral of f over B_ij| / nu(B_ij), where B_ij is the level-i ancestor of
/// the xor-translated block: the translation set [2^{-j-1}, 2^{-j-1}+2^{-i})
/// thickens the shifted block up to level i.
SampledFunction V_maximal(const SampledFunction& f, const SampledFunction& weight,
                          double r, int n);
SampledFunction V_maximal(const SampledFunction& f, double r, int n);

}  // namespace dmlab
