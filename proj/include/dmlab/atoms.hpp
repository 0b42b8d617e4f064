// Constructive atomic decompositions of dyadic martingales, the weighted
// stopping-time lemma, atom validation with per-kind provable factors, the
// aggregated atomic norm, the Davis big-jump/small-jump split, and the
// localization property of the three size functionals.
#pragma once

#include <string>
#include <vector>

#include "dmlab/grid.hpp"
#include "dmlab/musielak.hpp"
#include "dmlab/operators.hpp"

namespace dmlab {

/// The three size functionals an atom can be measured with.
enum class AtomOperator { kMax, kSquare, kCondSquare };

/// Construction recipes. kThresholdCond stops on the conditional variation;
/// kEnvelopeMax / kEnvelopeSquare stop on the minimal predictable envelope of
/// |f_n| / S_n(f); kWeightedMax / kWeightedSquare use the weighted stopping
/// time driven by |f_n| / S_n(f). Their conventional one-letter codes are
/// "s", "P", "Q", "M", "S" respectively.
enum class DecomposeKind {
  kThresholdCond,
  kEnvelopeMax,
  kEnvelopeSquare,
  kWeightedMax,
  kWeightedSquare,
};

DecomposeKind parse_decompose_kind(const std::string& code);
std::string decompose_kind_code(DecomposeKind kind);

/// Size functional the atoms of a given construction are validated with.
AtomOperator validation_operator(DecomposeKind kind);

/// Provable size-bound factor for a construction: 1 for every kind except the
/// |f_n|-envelope construction, whose atoms only admit 3/2 (attained).
double validation_factor(DecomposeKind kind);

struct AtomTriple {
  int k = 0;                // dyadic index: the triple handles scale 2^k
  double mu = 0.0;          // coefficient
  DyadicMartingale atom;    // the normalized atom a^k
  StoppingTimeMap nu;       // its stopping time
};

struct AtomicDecomposition {
  DecomposeKind kind = DecomposeKind::kThresholdCond;
  double r = 1.0;           // aggregation exponent in (0, 1]
  MusielakFunction phi;
  std::vector<AtomTriple> triples;  // ordered by k; zero-coefficient levels omitted
};

/// tau(x) = inf{n >= 0 : x.at(n + entry_offset, x) > lambda}, scanning while
/// n + entry_offset <= N; kNever when the threshold is never crossed.
StoppingTimeMap stopping_from_threshold(const AdaptedProcess& x, double lambda,
                                        int entry_offset);

/// Two-sided block-ratio constant of a strictly positive weight:
/// max over levels and blocks of max(parent/child, child/parent) averages.
double weight_regularity_constant(const SampledFunction& w);

/// The stopping time tau with, for G_n = {E_{n-1}(1_{gamma_n > lambda} w) /
/// E_{n-1}(w) >= 1/(2K)}, tau = inf{n : x in G_{n+1}}. The threshold is
/// non-strict: at a dyadic tie the inclusion {gamma_n > lambda} within G_n
/// requires >=. Needs gamma nonnegative and lambda > max gamma_0. If K_out is
/// given it receives the weight's regularity constant.
StoppingTimeMap weighted_stopping_time(const AdaptedProcess& gamma, const SampledFunction& w,
                                       double lambda, double* K_out = nullptr);

struct AtomValidation {
  bool pass = true;
  double vanish_margin = 0.0;      // max |a_n| seen on {nu >= n}
  double functional_sup = 0.0;     // sup of the size functional on B_nu
  double bound = 0.0;              // factor / ||1_{B_nu}||  (inf when B empty)
  double margin = 0.0;             // bound - functional_sup (negative = fail)
};

/// Checks the two atom properties: (i) a_n = 0 wherever nu >= n, and
/// (ii) the chosen functional of a stays below factor / ||1_{B_nu}|| on B_nu.
AtomValidation validate_atom(const DyadicMartingale& a, const StoppingTimeMap& nu,
                             const MusielakFunction& phi, AtomOperator op,
                             double bound_factor = 1.0, double tol = 1e-9);

/// Decomposition driven by thresholding the conditional variation ("s").
AtomicDecomposition s_atomic_decompose(const DyadicMartingale& m, const MusielakFunction& phi,
                                       double r = 1.0);

/// Decompositions driven by the minimal predictable envelope of |f_n|
/// (kEnvelopeMax, "P") or of S_n(f) (kEnvelopeSquare, "Q").
AtomicDecomposition pq_atomic_decompose(const DyadicMartingale& m, const MusielakFunction& phi,
                                        DecomposeKind kind, double r = 1.0);

/// Decompositions through the weighted stopping time at weight phi(., t_star),
/// driven by |f_n| (kWeightedMax, "M") or S_n(f) (kWeightedSquare, "S").
AtomicDecomposition maximal_atomic_decompose(const DyadicMartingale& m,
                                             const MusielakFunction& phi, DecomposeKind kind,
                                             double t_star = 1.0, double r = 1.0);

/// Single dispatcher over the five construction codes.
AtomicDecomposition atomic_decompose(const DyadicMartingale& m, const MusielakFunction& phi,
                                     DecomposeKind kind, double t_star = 1.0, double r = 1.0);

/// sum_k mu^k a^k as a martingale on the given grid (empty sums are zero).
DyadicMartingale reconstruct(const AtomicDecomposition& dec, DyadicGrid grid);

/// The aggregated quantity || [ sum_k (mu^k 1_{B_k} / ||1_{B_k}||)^r ]^{1/r} ||_phi.
double atomic_norm(const AtomicDecomposition& dec);

struct DavisPair {
  DyadicMartingale h;      // compensated big-jump part
  DyadicMartingale g;      // remainder, f - h exactly
  AdaptedProcess lambda;   // the adapted control sequence used for the split
};

/// Splits f = h + g by compensating the differences where the control sequence
/// more than doubles: lambda = S_n(f) for kSquare, running max |f_n| for kMax.
DavisPair davis_decompose(const DyadicMartingale& m, AtomOperator kind);

/// Verifies T(a 1_A) = T(a) 1_A for T in {max, square, cond-square} and a set
/// A compatible with nu (A inter {nu < n} must be a union of level-(n-1)
/// blocks; throws otherwise). Returns the pointwise identity at tolerance tol.
bool atom_localization_check(AtomOperator op, const DyadicMartingale& a,
                             const StoppingTimeMap& nu, const std::vector<std::size_t>& A,
                             double tol = 1e-12);

/// JSON: {"kind", "r", "phi", "resolution", "triples": [{k, mu, nu, atom_final}]}
/// with never-firing stopping entries encoded as -1. Lossless round trip.
void write_decomposition_json(const AtomicDecomposition& dec, DyadicGrid grid,
                              const std::string& path);
AtomicDecomposition read_decomposition_json(const std::string& path, DyadicGrid* grid_out = nullptr);

}  // namespace dmlab
