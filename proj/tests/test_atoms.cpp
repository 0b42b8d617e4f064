#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dmlab/atoms.hpp"
#include "dmlab/grid.hpp"
#include "dmlab/musielak.hpp"
#include "dmlab/operators.hpp"
#include "dmlab/random.hpp"

using namespace dmlab;

namespace {

DyadicMartingale rademacher_martingale(int resolution) {
  const DyadicGrid g(resolution);
  SampledFunction f(g, std::vector<double>(g.leaf_count()));
  for (std::size_t leaf = 0; leaf < g.leaf_count(); ++leaf) {
    f[leaf] = leaf < g.leaf_count() / 2 ? 1.0 : -1.0;
  }
  return martingale_of(f, /*center=*/true);
}

double max_abs_diff(const SampledFunction& a, const SampledFunction& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/// Weighted measure of a leaf set.
double weighted_measure(const SampledFunction& w, const std::vector<char>& member) {
  double total = 0.0;
  for (std::size_t leaf = 0; leaf < w.size(); ++leaf) {
    if (member[leaf]) total += w[leaf];
  }
  return total * w.grid.leaf_measure();
}

/// The martingale attaining the 3/2 size factor for the |f_n|-envelope
/// construction: stopped at nu^0 = 1 on the left half, the remaining swing
/// |f_3 - f_1| reaches 3 while 2^{k+1} = 2.
DyadicMartingale envelope_max_extremal() {
  const DyadicGrid g(3);
  std::vector<std::vector<double>> levels = {
      {0.0},
      {-1.0, 1.0},
      {0.0, -2.0, 1.0, 1.0},
      {2.0, -2.0, -2.0, -2.0, 1.0, 1.0, 1.0, 1.0},
  };
  return DyadicMartingale(g, std::move(levels));
}

}  // namespace

TEST_CASE("kind codes, validation operators, and provable factors") {
  const std::vector<std::pair<std::string, DecomposeKind>> table = {
      {"s", DecomposeKind::kThresholdCond},  {"P", DecomposeKind::kEnvelopeMax},
      {"Q", DecomposeKind::kEnvelopeSquare}, {"M", DecomposeKind::kWeightedMax},
      {"S", DecomposeKind::kWeightedSquare},
  };
  for (const auto& [code, kind] : table) {
    CHECK(parse_decompose_kind(code) == kind);
    CHECK(decompose_kind_code(kind) == code);
  }
  CHECK_THROWS_AS(parse_decompose_kind("x"), std::invalid_argument);

  CHECK(validation_operator(DecomposeKind::kThresholdCond) == AtomOperator::kCondSquare);
  CHECK(validation_operator(DecomposeKind::kEnvelopeMax) == AtomOperator::kMax);
  CHECK(validation_operator(DecomposeKind::kEnvelopeSquare) == AtomOperator::kSquare);
  CHECK(validation_operator(DecomposeKind::kWeightedMax) == AtomOperator::kMax);
  CHECK(validation_operator(DecomposeKind::kWeightedSquare) == AtomOperator::kSquare);

  for (const auto& [code, kind] : table) {
    CHECK(validation_factor(kind) == (code == "P" ? 1.5 : 1.0));
  }
}

TEST_CASE("threshold stopping rule") {
  const DyadicMartingale m = rademacher_martingale(2);
  const AdaptedProcess sproc = variation_process(m, VariationKind::kConditional);

  const StoppingTimeMap lo = stopping_from_threshold(sproc, 0.5, 1);
  const StoppingTimeMap hi = stopping_from_threshold(sproc, 1.0, 1);
  for (std::size_t leaf = 0; leaf < 4; ++leaf) {
    CHECK(lo.tau[leaf] == 0);          // s_1 = 1 > 1/2 everywhere
    CHECK(hi.never_fires(leaf));       // s never exceeds 1
    CHECK(lo.tau[leaf] <= hi.tau[leaf]);
  }

  // A rule reading a finer entry than the filtration allows must be rejected.
  const DyadicGrid g(2);
  const AdaptedProcess skew(g, {{0.0}, {0.0, 0.0}, {5.0, 0.0, 0.0, 0.0}});
  CHECK_THROWS_AS(stopping_from_threshold(skew, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(stopping_from_threshold(skew, 1.0, -1), std::invalid_argument);
}

TEST_CASE("weight regularity constant") {
  const DyadicGrid g1(1);
  CHECK(weight_regularity_constant(SampledFunction::constant(g1, 1.0)) == doctest::Approx(1.0));
  CHECK(weight_regularity_constant(SampledFunction(g1, {2.0, 1.0})) == doctest::Approx(1.5));
  CHECK_THROWS_AS(weight_regularity_constant(SampledFunction(g1, {1.0, 0.0})),
                  std::invalid_argument);
}

TEST_CASE("weighted stopping time on the worked example") {
  const DyadicGrid g(2);
  const AdaptedProcess gamma(g, {{0.0}, {2.0, 0.0}, {1.0, 1.0, 3.0, 1.0}});
  const SampledFunction w = SampledFunction::constant(g, 1.0);

  double K = 0.0;
  const StoppingTimeMap tau = weighted_stopping_time(gamma, w, 1.5, &K);
  CHECK(K == doctest::Approx(1.0));
  for (std::size_t leaf = 0; leaf < 4; ++leaf) CHECK(tau.tau[leaf] == 0);

  // Exceedance measure: max_n gamma_n = (2,2,3,1) crosses 1.5 on three leaves,
  // so the fired mass 1 stays below 2K * 3/4.
  std::vector<char> fired(4, 1);
  std::vector<char> crossed = {1, 1, 1, 0};
  CHECK(weighted_measure(w, fired) <= 2.0 * K * weighted_measure(w, crossed));

  const AdaptedProcess zero(g, {{0.0}, {0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}});
  const StoppingTimeMap never = weighted_stopping_time(zero, w, 1.0);
  for (std::size_t leaf = 0; leaf < 4; ++leaf) CHECK(never.never_fires(leaf));

  const AdaptedProcess high0(g, {{0.5}, {0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}});
  CHECK_THROWS_AS(weighted_stopping_time(high0, w, 0.5), std::invalid_argument);
  const AdaptedProcess negative(g, {{0.0}, {-1.0, 0.0}, {0.0, 0.0, 0.0, 0.0}});
  CHECK_THROWS_AS(weighted_stopping_time(negative, w, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(weighted_stopping_time(gamma, SampledFunction::constant(DyadicGrid(3), 1.0), 1.5),
                  std::invalid_argument);
}

TEST_CASE("weighted stopping time guarantees on random data") {
  const DyadicGrid g(6);
  Rng rng(20260816);
  const MartingaleLaw laws[] = {MartingaleLaw::kBounded, MartingaleLaw::kGaussian,
                                MartingaleLaw::kHeavy, MartingaleLaw::kSparse};
  for (int trial = 0; trial < 60; ++trial) {
    const DyadicMartingale m = random_martingale(g, laws[trial % 4], rng);
    const AdaptedProcess gamma = variation_process(m, VariationKind::kSquare);
    const SampledFunction w =
        trial % 2 == 0 ? SampledFunction::constant(g, 1.0) : random_weight(g, rng);

    double top = 0.0;
    for (int n = 0; n <= g.resolution; ++n) {
      for (double v : gamma.entry_blocks(n)) top = std::max(top, v);
    }
    if (top <= 0.0) continue;

    std::vector<int32_t> prev;
    for (double frac : {0.1, 0.35, 0.7, 1.2}) {
      const double lambda = frac * top;
      double K = 0.0;
      const StoppingTimeMap tau = weighted_stopping_time(gamma, w, lambda, &K);

      std::vector<char> fired(g.leaf_count(), 0);
      std::vector<char> crossed(g.leaf_count(), 0);
      for (std::size_t leaf = 0; leaf < g.leaf_count(); ++leaf) {
        fired[leaf] = tau.never_fires(leaf) ? 0 : 1;
        double run_max = 0.0;
        double stopped_max = 0.0;
        for (int n = 0; n <= g.resolution; ++n) {
          run_max = std::max(run_max, gamma.at(n, leaf));
          if (n <= tau.tau[leaf]) stopped_max = std::max(stopped_max, gamma.at(n, leaf));
        }
        crossed[leaf] = run_max > lambda ? 1 : 0;
        // (st2): every exceedance leaf is captured.
        if (crossed[leaf]) CHECK(fired[leaf] == 1);
        // (st3): the process stays below lambda up to the stopping time.
        CHECK(stopped_max <= lambda + 1e-12);
        // monotone in lambda
        if (!prev.empty()) CHECK(prev[leaf] <= tau.tau[leaf]);
      }
      // (st4): fired mass at most 2K times the exceedance mass.
      CHECK(weighted_measure(w, fired) <=
            2.0 * K * weighted_measure(w, crossed) + 1e-12);
      prev.assign(tau.tau.begin(), tau.tau.end());
    }
  }
}

TEST_CASE("all five decompositions of the first Rademacher function") {
  const DyadicMartingale m = rademacher_martingale(2);
  const MusielakFunction phi = power_phi(2.0);

  SUBCASE("conditional-variation kind") {
    const AtomicDecomposition dec = s_atomic_decompose(m, phi);
    REQUIRE(dec.triples.size() == 1);
    const AtomTriple& t = dec.triples.front();
    CHECK(t.k == -1);
    CHECK(t.mu == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t leaf = 0; leaf < 4; ++leaf) CHECK(t.nu.tau[leaf] == 0);
    CHECK(max_abs_diff(t.atom.final(), m.final()) < 1e-9);
  }

  SUBCASE("envelope kinds") {
    for (DecomposeKind kind : {DecomposeKind::kEnvelopeMax, DecomposeKind::kEnvelopeSquare}) {
      const AtomicDecomposition dec = pq_atomic_decompose(m, phi, kind);
      REQUIRE(dec.triples.size() == 1);
      CHECK(dec.triples.front().k == -1);
      CHECK(dec.triples.front().mu == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(max_abs_diff(dec.triples.front().atom.final(), m.final()) < 1e-9);
    }
  }

  SUBCASE("weighted kinds carry the 3*2^k coefficient") {
    for (DecomposeKind kind : {DecomposeKind::kWeightedMax, DecomposeKind::kWeightedSquare}) {
      const AtomicDecomposition dec = maximal_atomic_decompose(m, phi, kind);
      REQUIRE(dec.triples.size() == 1);
      const AtomTriple& t = dec.triples.front();
      CHECK(t.k == -1);
      CHECK(t.mu == doctest::Approx(1.5).epsilon(1e-9));
      for (std::size_t leaf = 0; leaf < 4; ++leaf) CHECK(t.nu.tau[leaf] == 0);
      SampledFunction scaled = m.final();
      for (double& v : scaled.values) v /= 1.5;
      CHECK(max_abs_diff(t.atom.final(), scaled) < 1e-9);
    }
  }

  SUBCASE("wrong-kind dispatch is rejected") {
    CHECK_THROWS_AS(pq_atomic_decompose(m, phi, DecomposeKind::kThresholdCond),
                    std::invalid_argument);
    CHECK_THROWS_AS(maximal_atomic_decompose(m, phi, DecomposeKind::kEnvelopeMax),
                    std::invalid_argument);
    CHECK_THROWS_AS(s_atomic_decompose(m, phi, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(s_atomic_decompose(m, phi, 0.0), std::invalid_argument);
  }

  SUBCASE("uncentered martingales are rejected") {
    const SampledFunction f = SampledFunction::constant(DyadicGrid(2), 1.0);
    CHECK_THROWS_AS(s_atomic_decompose(martingale_of(f, false), phi), std::invalid_argument);
  }
}

TEST_CASE("the size factor 3/2 for the |f_n|-envelope kind is attained") {
  const DyadicMartingale m = envelope_max_extremal();
  CHECK(m.tower_defect() == 0.0);
  const MusielakFunction phi = power_phi(2.0);

  const AtomicDecomposition dec = pq_atomic_decompose(m, phi, DecomposeKind::kEnvelopeMax);
  REQUIRE(dec.triples.size() == 2);
  CHECK(dec.triples[0].k == -1);
  CHECK(dec.triples[1].k == 0);

  const AtomTriple& t = dec.triples[1];
  // Stopped at 1 on the left half, never on the right.
  for (std::size_t leaf = 0; leaf < 8; ++leaf) {
    if (leaf < 4) {
      CHECK(t.nu.tau[leaf] == 1);
    } else {
      CHECK(t.nu.never_fires(leaf));
    }
  }
  const double half_norm = std::sqrt(0.5);
  CHECK(t.mu == doctest::Approx(2.0 * half_norm).epsilon(1e-9));

  const AtomValidation strict = validate_atom(t.atom, t.nu, phi, AtomOperator::kMax, 1.0);
  CHECK_FALSE(strict.pass);
  const AtomValidation relaxed = validate_atom(t.atom, t.nu, phi, AtomOperator::kMax, 1.5);
  CHECK(relaxed.pass);
  // sup |a_n| lands exactly on the relaxed bound: |f_3 - f_1| = 3 against
  // mu = 2 ||1_B|| gives (3/2) / ||1_B||.
  CHECK(relaxed.functional_sup == doctest::Approx(1.5 / half_norm).epsilon(1e-9));
  CHECK(relaxed.functional_sup >= strict.bound * (1.0 + 1e-6));
}

TEST_CASE("random decompositions validate, reconstruct, and order their stopping times") {
  Rng rng(77001);
  const DyadicGrid g(6);
  const std::vector<MusielakFunction> phis = {power_phi(2.0), parse_phi("loggrow:alpha=1.5")};
  const MartingaleLaw laws[] = {MartingaleLaw::kBounded, MartingaleLaw::kGaussian,
                                MartingaleLaw::kHeavy, MartingaleLaw::kSparse};
  const DecomposeKind kinds[] = {DecomposeKind::kThresholdCond, DecomposeKind::kEnvelopeMax,
                                 DecomposeKind::kEnvelopeSquare, DecomposeKind::kWeightedMax,
                                 DecomposeKind::kWeightedSquare};

  for (int trial = 0; trial < 15; ++trial) {
    const DyadicMartingale m = random_martingale(g, laws[trial % 4], rng);
    double scale = 1.0;
    for (double v : m.final().values) scale = std::max(scale, std::abs(v));
    const MusielakFunction& phi = phis[trial % 2];

    for (DecomposeKind kind : kinds) {
      // Construction already validates every atom at the provable factor and
      // checks reconstruction internally; it must not throw.
      const AtomicDecomposition dec = atomic_decompose(m, phi, kind);
      CHECK(max_abs_diff(reconstruct(dec, g).final(), m.final()) <= 1e-9 * scale);

      for (std::size_t i = 0; i < dec.triples.size(); ++i) {
        const AtomValidation v =
            validate_atom(dec.triples[i].atom, dec.triples[i].nu, phi,
                          validation_operator(kind), validation_factor(kind));
        CHECK(v.pass);
        CHECK(v.vanish_margin == 0.0);
        if (i > 0) {
          CHECK(dec.triples[i].k > dec.triples[i - 1].k);
          for (std::size_t leaf = 0; leaf < g.leaf_count(); ++leaf) {
            CHECK(dec.triples[i - 1].nu.tau[leaf] <= dec.triples[i].nu.tau[leaf]);
          }
        }
      }

      if (kind == DecomposeKind::kThresholdCond) {
        // The fired set at scale k is exactly the super-level set of the
        // conditional variation.
        const SampledFunction s_final = variation(m, VariationKind::kConditional);
        for (const AtomTriple& t : dec.triples) {
          const double lambda = std::ldexp(1.0, t.k);
          for (std::size_t leaf = 0; leaf < g.leaf_count(); ++leaf) {
            CHECK(!t.nu.never_fires(leaf) == (s_final[leaf] > lambda));
          }
        }
      }
    }
  }
}

TEST_CASE("aggregated atomic norm") {
  const DyadicMartingale m = rademacher_martingale(2);
  const MusielakFunction phi = power_phi(2.0);

  SUBCASE("single full-support triple collapses to its coefficient") {
    for (double r : {0.5, 1.0}) {
      const AtomicDecomposition dec = s_atomic_decompose(m, phi, r);
      CHECK(atomic_norm(dec) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }

  SUBCASE("empty decomposition has norm zero") {
    const SampledFunction zero = SampledFunction::constant(DyadicGrid(3), 0.0);
    const AtomicDecomposition dec = s_atomic_decompose(martingale_of(zero, true), phi);
    CHECK(dec.triples.empty());
    CHECK(atomic_norm(dec) == 0.0);
  }

  SUBCASE("two-sided comparison with the conditional variation norm") {
    Rng rng(5150);
    const DyadicGrid g(6);
    const MartingaleLaw laws[] = {MartingaleLaw::kBounded, MartingaleLaw::kGaussian,
                                  MartingaleLaw::kHeavy, MartingaleLaw::kSparse};
    for (int trial = 0; trial < 40; ++trial) {
      const DyadicMartingale f = random_martingale(g, laws[trial % 4], rng);
      const double s_norm = luxemburg_norm(phi, variation(f, VariationKind::kConditional));
      for (double r : {0.5, 1.0}) {
        const double value = atomic_norm(s_atomic_decompose(f, phi, r));
        const double upper = 2.0 * std::pow(std::pow(2.0, r) / (std::pow(2.0, r) - 1.0), 1.0 / r);
        CHECK(value >= s_norm * (1.0 - 1e-8));
        CHECK(value <= upper * s_norm * (1.0 + 1e-8));
      }
    }
  }
}

TEST_CASE("Davis split") {
  SUBCASE("first Rademacher goes entirely to the big-jump part") {
    const DyadicMartingale m = rademacher_martingale(2);
    const DavisPair pair = davis_decompose(m, AtomOperator::kSquare);
    CHECK(max_abs_diff(pair.h.final(), m.final()) == 0.0);
    for (std::size_t leaf = 0; leaf < 4; ++leaf) {
      CHECK(pair.g.final()[leaf] == 0.0);
      CHECK(pair.lambda.at(1, leaf) == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(davis_decompose(m, AtomOperator::kCondSquare), std::invalid_argument);
  }

  SUBCASE("random splits: exact sum, compensated-jump bound, small remainder jumps") {
    Rng rng(99331);
    const DyadicGrid g(6);
    const int N = g.resolution;
    const MartingaleLaw laws[] = {MartingaleLaw::kBounded, MartingaleLaw::kGaussian,
                                  MartingaleLaw::kHeavy, MartingaleLaw::kSparse};
    for (int trial = 0; trial < 50; ++trial) {
      const DyadicMartingale m = random_martingale(g, laws[trial % 4], rng);
      double scale = 1.0;
      for (double v : m.final().values) scale = std::max(scale, std::abs(v));

      for (AtomOperator kind : {AtomOperator::kSquare, AtomOperator::kMax}) {
        const DavisPair pair = davis_decompose(m, kind);
        CHECK(max_abs_diff(add(pair.h, pair.g).final(), m.final()) <= 1e-12 * scale);
        CHECK(pair.h.tower_defect() <= 1e-12 * scale);

        const double jump_cap = kind == AtomOperator::kSquare ? 4.0 : 6.0;
        for (int k = 1; k <= N; ++k) {
          const SampledFunction dg = pair.g.difference(k);
          for (std::size_t leaf = 0; leaf < g.leaf_count(); ++leaf) {
            CHECK(std::abs(dg[leaf]) <=
                  jump_cap * pair.lambda.at(k - 1, leaf) + 1e-12 * scale);
          }
        }

        if (kind == AtomOperator::kSquare) {
          // Absolute jumps of h against twice the control plus twice the
          // compensator of its increments, accumulated level by level.
          std::vector<double> lhs(g.leaf_count(), 0.0);
          std::vector<double> compensated(g.leaf_count(), 0.0);
          for (int n = 1; n <= N; ++n) {
            const SampledFunction dh = pair.h.difference(n);
            std::vector<double> increment(g.leaf_count());
            for (std::size_t leaf = 0; leaf < g.leaf_count(); ++leaf) {
              increment[leaf] = pair.lambda.at(n, leaf) - pair.lambda.at(n - 1, leaf);
            }
            const std::vector<double> cond =
                block_averages(increment, N, n - 1);
            for (std::size_t leaf = 0; leaf < g.leaf_count(); ++leaf) {
              lhs[leaf] += std::abs(dh[leaf]);
              compensated[leaf] += cond[leaf >> (N - (n - 1))];
              const double rhs = 2.0 * pair.lambda.at(n, leaf) + 2.0 * compensated[leaf];
              CHECK(lhs[leaf] <= rhs + 1e-12 * scale);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("localization of the size functionals") {
  const DyadicMartingale m = envelope_max_extremal();
  const MusielakFunction phi = power_phi(2.0);
  const AtomicDecomposition dec = pq_atomic_decompose(m, phi, DecomposeKind::kEnvelopeMax);
  REQUIRE(dec.triples.size() == 2);
  const AtomTriple& t = dec.triples[1];  // nu = 1 on the left half, never on the right

  const std::vector<std::size_t> left = {0, 1, 2, 3};
  const std::vector<std::size_t> everything = {0, 1, 2, 3, 4, 5, 6, 7};
  for (AtomOperator op : {AtomOperator::kMax, AtomOperator::kSquare, AtomOperator::kCondSquare}) {
    CHECK(atom_localization_check(op, t.atom, t.nu, left));
    CHECK(atom_localization_check(op, t.atom, t.nu, everything));
    CHECK(atom_localization_check(op, t.atom, t.nu, {}));
  }

  // {0,1} cuts the level-1 block on which the atom is already alive.
  CHECK_THROWS_AS(atom_localization_check(AtomOperator::kMax, t.atom, t.nu, {0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(atom_localization_check(AtomOperator::kMax, t.atom, t.nu, {11}),
                  std::invalid_argument);

  SUBCASE("random atoms localize on their fired sets") {
    Rng rng(31337);
    const DyadicGrid g(5);
    for (int trial = 0; trial < 10; ++trial) {
      const DyadicMartingale f = random_martingale(g, MartingaleLaw::kGaussian, rng);
      const AtomicDecomposition d = s_atomic_decompose(f, phi);
      for (const AtomTriple& triple : d.triples) {
        std::vector<std::size_t> fired;
        for (std::size_t leaf = 0; leaf < g.leaf_count(); ++leaf) {
          if (!triple.nu.never_fires(leaf)) fired.push_back(leaf);
        }
        for (AtomOperator op :
             {AtomOperator::kMax, AtomOperator::kSquare, AtomOperator::kCondSquare}) {
          CHECK(atom_localization_check(op, triple.atom, triple.nu, fired));
        }
      }
    }
  }
}

TEST_CASE("decomposition JSON round trip") {
  Rng rng(424242);
  const DyadicGrid g(4);
  const DyadicMartingale m = random_martingale(g, MartingaleLaw::kGaussian, rng);
  const MusielakFunction phi = parse_phi("loggrow:alpha=1.5");
  const AtomicDecomposition dec = pq_atomic_decompose(m, phi, DecomposeKind::kEnvelopeSquare, 0.5);
  REQUIRE(!dec.triples.empty());

  const std::string path1 = "atoms_roundtrip_1.json";
  const std::string path2 = "atoms_roundtrip_2.json";
  write_decomposition_json(dec, g, path1);

  DyadicGrid grid_back;
  const AtomicDecomposition back = read_decomposition_json(path1, &grid_back);
  CHECK(grid_back == g);
  CHECK(back.kind == dec.kind);
  CHECK(back.r == dec.r);
  CHECK(back.phi.spec() == dec.phi.spec());
  REQUIRE(back.triples.size() == dec.triples.size());
  for (std::size_t i = 0; i < dec.triples.size(); ++i) {
    CHECK(back.triples[i].k == dec.triples[i].k);
    CHECK(back.triples[i].mu == dec.triples[i].mu);
    for (std::size_t leaf = 0; leaf < g.leaf_count(); ++leaf) {
      CHECK(back.triples[i].nu.tau[leaf] == dec.triples[i].nu.tau[leaf]);
      CHECK(back.triples[i].atom.final()[leaf] == dec.triples[i].atom.final()[leaf]);
    }
  }

  write_decomposition_json(back, g, path2);
  std::ifstream f1(path1), f2(path2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(!s1.str().empty());
  std::remove(path1.c_str());
  std::remove(path2.c_str());
}
