// Generalized Orlicz integrands phi(x, t) on [0,1) x [0, inf): a closed set of
// built-in families behind one evaluator, modular/Luxemburg norms, complementary
// (Legendre) functions, uniform type estimation, and dyadic weight-class checks.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dmlab/grid.hpp"

namespace dmlab {

/// Geometric evaluation grid in t used by the samplers and checkers.
struct TGrid {
  std::vector<double> points;
  double t_min = 0.0;
  double t_max = 0.0;

  /// 128 log-spaced points on [1e-6, 1e6].
  static TGrid standard();
  static TGrid geometric(double t_min, double t_max, int n);
};

/// Valid uniform type exponents as interval data. Lower types always form an
/// interval (0, lower_sup) or (0, lower_sup]; upper types (upper_inf, inf) or
/// [upper_inf, inf) when any finite upper type exists at all.
struct TypeRange {
  double lower_sup = 0.0;
  bool lower_attained = false;
  double upper_inf = 0.0;
  bool upper_attained = false;
  bool upper_finite = false;
};

/// One integrand phi(x, t): nondecreasing and vanishing-at-zero in t for every
/// x, with per-family metadata (type exponents, x dependence). Immutable and
/// cheap to copy.
class MusielakFunction {
 public:
  MusielakFunction() = default;

  double operator()(double x, double t) const;

  /// Canonical description, e.g. "power:p=2" or "dual(loggrow:alpha=1.5)".
  const std::string& spec() const;
  /// True when phi genuinely varies with x.
  bool x_dependent() const;
  /// Intrinsic x-sampling resolution (weight or exponent file resolution;
  /// 8 for analytic x dependence; 0 when x-independent).
  int natural_x_resolution() const;
  /// Known type exponent ranges for the family.
  const TypeRange& types() const;
  /// True for the improper duals (of powers with p <= 1) that are not
  /// genuine integrands; norm machinery still handles them.
  bool degenerate() const;

  struct Impl;
  explicit MusielakFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  const Impl& impl() const { return *impl_; }
  const std::shared_ptr<const Impl>& impl_shared() const { return impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Parse "family:key=value,...". Families: power(p), wpower(p,w),
/// orlicz-exp, loglow(alpha), loggrow(alpha), logdamp(alpha),
/// double-phase(p,q,w), varexp(pfile), xlog(alpha,beta,gamma).
/// Weight values: a CSV path, "one", or (double-phase only) "zero".
/// Unknown families, unknown keys, and out-of-range parameters all throw.
MusielakFunction parse_phi(const std::string& spec);

/// Convenience: the plain power integrand t^p.
MusielakFunction power_phi(double p);

/// phi_r(x, t) = phi(x, t^r); power families fold to powers with exponent p*r.
MusielakFunction power_rescale(const MusielakFunction& phi, double r);

/// Complementary (Legendre conjugate in t) function. Power families get the
/// closed form; everything else falls back to a 512-point log u-grid on
/// [t_min/100, 100*t_max]. Evaluations whose supremum lands on the top grid
/// edge throw (the grid cannot certify the value).
MusielakFunction complementary(const MusielakFunction& phi,
                               const TGrid& tgrid = TGrid::standard());
/// The numeric path unconditionally (for cross-checking the closed forms).
MusielakFunction complementary_numeric(const MusielakFunction& phi,
                                       const TGrid& tgrid = TGrid::standard());

/// Mean of phi(x_i, |f_i|) over leaf midpoints; +inf propagates.
double modular(const MusielakFunction& phi, const SampledFunction& f);

/// Luxemburg norm inf{lam > 0 : modular(f/lam) <= 1} by bracketed bisection
/// to a relative tolerance; 0 for the zero function, +inf when no bracket
/// exists (degenerate integrands).
double luxemburg_norm(const MusielakFunction& phi, const SampledFunction& f,
                      double rel_tol = 1e-10, int max_iter = 200);

/// Norm of the indicator of a leaf set (by leaf indices).
double indicator_norm(const MusielakFunction& phi, const DyadicGrid& grid,
                      const std::vector<std::size_t>& leaves);

/// sup over sampled (x, t, s) of phi(x, s*t) / (s^p * phi(x, t)) with s drawn
/// from (0,1) for the lower check or [1, 1e3] for the upper check.
struct TypeCheckReport {
  double constant = 0.0;
  bool diverged = false;  // ratio blew past the divergence cap
  double worst_x = 0.0, worst_t = 0.0, worst_s = 0.0;
  double t_min = 0.0, t_max = 0.0;
  int t_points = 0, s_points = 0, x_resolution = 0;
};
TypeCheckReport check_uniform_type(const MusielakFunction& phi, double p, bool lower,
                                   const TGrid& tgrid = TGrid::standard(),
                                   int s_points = 64, int x_resolution = -1);

/// Dyadic Muckenhoupt-style constant at exponent q >= 1 over the sampled
/// (t, level, block) family; holds = constant stayed below the cap.
struct AqReport {
  double q = 1.0;
  double constant = 0.0;
  bool holds = false;
  double worst_t = 0.0;
  int worst_level = 0;
  double t_min = 0.0, t_max = 0.0;
  int t_points = 0, x_resolution = 0;
};
AqReport check_Aq(const MusielakFunction& phi, double q,
                  const TGrid& tgrid = TGrid::standard(), int x_resolution = -1,
                  double K_max = 1e6);

/// Critical exponent q(phi): bisect the smallest q in [1, 64] passing
/// check_Aq within tol. a_infinity=false (with a note) when even q=64 fails
/// on the sample.
struct QPhiReport {
  bool a_infinity = false;
  double q_value = 0.0;
  double constant_at_q = 0.0;
  std::string note;
  double t_min = 0.0, t_max = 0.0;
  int t_points = 0, x_resolution = 0;
};
QPhiReport q_phi(const MusielakFunction& phi, const TGrid& tgrid = TGrid::standard(),
                 double tol = 1e-2, double K_max = 1e6, int x_resolution = -1);

/// Smallest constants comparing phi_n = E_n phi(., t) across adjacent levels:
/// K_minus bounds phi_{n-1} <= K phi_n, K_plus bounds phi_n <= K phi_{n-1}.
struct SConditionReport {
  double K_minus = 0.0;
  double K_plus = 0.0;
  double K = 0.0;  // max of the two
  double t_min = 0.0, t_max = 0.0;
  int t_points = 0, x_resolution = 0;
};
SConditionReport check_S_condition(const MusielakFunction& phi,
                                   const TGrid& tgrid = TGrid::standard(),
                                   int x_resolution = -1);

/// Empirical two-sided duality probe: the best pairing integral f*g over
/// candidates g with ||g||_{phi*} <= 1 must sit below 2*||f||_phi, and the
/// achieved fraction of the norm is reported.
struct DualPairingReport {
  double norm = 0.0;          // ||f||_phi
  double best_pairing = 0.0;  // best integral over the tried candidates
  double upper = 0.0;         // 2 * ||f||_phi
  bool ok = false;            // best_pairing <= upper (+ tol)
};
DualPairingReport dual_pairing_check(const MusielakFunction& phi, const SampledFunction& f,
                                     int samples = 32, std::uint64_t seed = 1);

}  // namespace dmlab
