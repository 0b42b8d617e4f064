// Walsh-system checks: sign-pattern oracles, transform round trips against the
// naive inner-product oracle, kernel identities, the three partial-sum
// pathways, Fejér means with their exact tail, and the maximal function
// against brute force.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "dmlab/musielak.hpp"
#include "dmlab/random.hpp"
#include "dmlab/walsh.hpp"

using namespace dmlab;

namespace {

double dot(const SampledFunction& a, const SampledFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size());
}

std::vector<double> naive_coeffs(const SampledFunction& f) {
  std::vector<double> c(f.size());
  for (std::size_t m = 0; m < f.size(); ++m) c[m] = dot(f, walsh_function(m, f.grid));
  return c;
}

double sup_diff(const SampledFunction& a, const SampledFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a[i] - b[i]));
  return s;
}

}  // namespace

TEST_CASE("rademacher and walsh sign patterns") {
  DyadicGrid g(2);
  auto r0 = rademacher(0, g);
  auto r1 = rademacher(1, g);
  CHECK(r0.values == std::vector<double>{1.0, 1.0, -1.0, -1.0});
  CHECK(r1.values == std::vector<double>{1.0, -1.0, 1.0, -1.0});
  CHECK_THROWS(rademacher(2, g));

  for (int n = 0; n < 5; ++n) {
    double mean = 0.0;
    for (double v : rademacher(n, DyadicGrid(5)).values) mean += v;
    CHECK(mean == 0.0);
  }

  auto w0 = walsh_function(0, g);
  for (double v : w0.values) CHECK(v == 1.0);
  auto w3 = walsh_function(3, g);
  CHECK(w3.values == std::vector<double>{1.0, -1.0, -1.0, 1.0});
  CHECK_THROWS(walsh_function(4, g));
}

TEST_CASE("walsh family is orthonormal") {
  DyadicGrid g(6);
  std::vector<SampledFunction> w;
  for (std::size_t n = 0; n < g.leaf_count(); ++n) w.push_back(walsh_function(n, g));
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = a; b < w.size(); ++b) {
      double inner = dot(w[a], w[b]);
      CHECK(inner == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("fast transform: oracles, round trip, naive agreement") {
  SampledFunction f(DyadicGrid(2), {1.0, 3.0, 5.0, 7.0});
  auto spec = analyze(f);
  CHECK(spec.coeffs == std::vector<double>{4.0, -2.0, -1.0, 0.0});
  double energy = 0.0;
  for (double c : spec.coeffs) energy += c * c;
  CHECK(energy == doctest::Approx(21.0));

  auto w3 = walsh_function(3, DyadicGrid(3));
  auto s3 = analyze(w3);
  for (std::size_t m = 0; m < s3.coeffs.size(); ++m)
    CHECK(s3.coeffs[m] == doctest::Approx(m == 3 ? 1.0 : 0.0).epsilon(1e-13));

  auto zero = analyze(SampledFunction::constant(DyadicGrid(4), 0.0));
  for (double c : zero.coeffs) CHECK(c == 0.0);

  Rng rng(7);
  for (int res : {4, 8}) {
    auto rf = random_function(DyadicGrid(res), MartingaleLaw::kGaussian, rng);
    auto sp = analyze(rf);
    CHECK(sup_diff(synthesize(sp), rf) <= 1e-12);
    auto naive = naive_coeffs(rf);
    for (std::size_t m = 0; m < naive.size(); ++m)
      CHECK(sp.coeffs[m] == doctest::Approx(naive[m]).epsilon(1e-10));
  }
}

TEST_CASE("dirichlet kernels: oracles, closed form, unit mean") {
  DyadicGrid g(2);
  CHECK(dirichlet_kernel(1, g).values.values == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  CHECK(dirichlet_kernel(2, g).values.values == std::vector<double>{2.0, 2.0, 0.0, 0.0});
  CHECK(dirichlet_kernel(3, g).values.values == std::vector<double>{3.0, 1.0, 1.0, -1.0});
  CHECK_THROWS(dirichlet_kernel(0, g));
  CHECK_THROWS(dirichlet_kernel(5, g));

  DyadicGrid g5(5);
  for (int k = 0; k <= 5; ++k) {
    auto d = dirichlet_kernel(1 << k, g5).values;
    for (std::size_t i = 0; i < d.size(); ++i)
      CHECK(d[i] == (i < (g5.leaf_count() >> k) ? std::exp2(k) : 0.0));
  }
  for (int n = 1; n <= 32; ++n) {
    double mean = 0.0;
    for (double v : dirichlet_kernel(n, g5).values.values) mean += v;
    CHECK(mean / 32.0 == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("fejer kernels: oracles, translation identity, pointwise bound") {
  DyadicGrid g(2);
  CHECK(fejer_kernel(1, g).values.values == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  CHECK(fejer_kernel(2, g).values.values == std::vector<double>{1.5, 1.5, 0.5, 0.5});

  // Power-of-two orders run the exact half-sum cross-check internally.
  DyadicGrid g6(6);
  for (int m = 0; m <= 6; ++m) CHECK_NOTHROW(fejer_kernel(1 << m, g6));

  for (int n = 1; n <= 64; ++n) {
    double mean = 0.0;
    for (double v : fejer_kernel(n, g6).values.values) mean += v;
    CHECK(mean / 64.0 == doctest::Approx(1.0).epsilon(1e-13));
    auto bound = fejer_kernel_bound(n, g6);
    auto k = fejer_kernel(n, g6).values;
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(std::fabs(k[i]) <= bound[i] + 1e-12);
  }
}

TEST_CASE("partial sums: martingale levels, convolution path, density") {
  SampledFunction f(DyadicGrid(2), {1.0, 3.0, 5.0, 7.0});
  auto s2 = partial_sum(f, 2);
  CHECK(s2.values == std::vector<double>{2.0, 2.0, 6.0, 6.0});
  auto s1 = partial_sum(f, 1);
  for (double v : s1.values) CHECK(v == doctest::Approx(4.0));
  CHECK(partial_sum(f, 4).values == f.values);
  CHECK(partial_sum(f, 100).values == f.values);

  Rng rng(17);
  DyadicGrid g(5);
  auto rf = random_function(g, MartingaleLaw::kGaussian, rng);
  auto m = martingale_of(rf, false);
  for (int n = 0; n <= 5; ++n)
    CHECK(sup_diff(partial_sum(rf, std::int64_t{1} << n), m.level(n)) <= 1e-12);
  for (int n = 1; n <= 32; ++n)
    CHECK(sup_diff(partial_sum(rf, n), partial_sum_convolution(rf, n)) <= 1e-10);

  // Distances to the dyadic partial sums shrink monotonically to zero.
  for (const auto& phi : {power_phi(2.0), parse_phi("loggrow:alpha=1.5")}) {
    double prev = -1.0;
    for (int n = 5; n >= 0; --n) {
      auto diff = rf;
      auto sn = partial_sum(rf, std::int64_t{1} << n);
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= sn[i];
      double err = luxemburg_norm(phi, diff);
      if (n == 5) CHECK(err == 0.0);
      CHECK(err >= prev - 1e-12);
      prev = err;
    }
  }
}

TEST_CASE("transform pathway reproduces every partial sum") {
  SampledFunction f(DyadicGrid(2), {1.0, 3.0, 5.0, 7.0});
  auto w2 = walsh_function(2, f.grid);
  auto fw = f;
  for (std::size_t i = 0; i < 4; ++i) fw[i] *= w2[i];
  auto t = transform_T0(fw, 2);
  CHECK(t.values == std::vector<double>{2.0, -2.0, 6.0, -6.0});
  CHECK(partial_sum_via_T0(f, 2).values == std::vector<double>{2.0, 2.0, 6.0, 6.0});

  Rng rng(27);
  DyadicGrid g(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto rf = random_function(g, MartingaleLaw::kHeavy, rng);
    for (std::int64_t n = 1; n <= 32; ++n)
      CHECK(sup_diff(partial_sum_via_T0(rf, n), partial_sum(rf, n)) <= 1e-12);
  }
  CHECK_THROWS(partial_sum_via_T0(f, 5));
}

TEST_CASE("fejer means: oracle, kernel path, exact tail") {
  SampledFunction f(DyadicGrid(2), {1.0, 3.0, 5.0, 7.0});
  CHECK(fejer_mean(f, 2).values == std::vector<double>{3.0, 3.0, 5.0, 5.0});

  auto c = SampledFunction::constant(DyadicGrid(3), -2.0);
  for (std::int64_t n : {1, 3, 7, 100})
    for (double v : fejer_mean(c, n).values) CHECK(v == doctest::Approx(-2.0));

  Rng rng(37);
  DyadicGrid g(5);
  auto rf = random_function(g, MartingaleLaw::kGaussian, rng);
  for (int n = 1; n <= 32; ++n) {
    CHECK(sup_diff(fejer_mean(rf, n), fejer_mean_convolution(rf, n)) <= 1e-10);
    // Direct average of partial sums.
    SampledFunction avg(g, std::vector<double>(rf.size(), 0.0));
    for (int k = 1; k <= n; ++k) {
      auto sk = partial_sum(rf, k);
      for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += sk[i];
    }
    for (double& v : avg.values) v /= n;
    CHECK(sup_diff(fejer_mean(rf, n), avg) <= 1e-11);
  }

  // Out-of-band orders: sigma_n = f + (A - 2^N f)/n exactly, so n * ||sigma_n - f||
  // is constant in n.
  auto s64 = fejer_mean(rf, 64);
  auto s640 = fejer_mean(rf, 640);
  double e64 = sup_diff(s64, rf), e640 = sup_diff(s640, rf);
  CHECK(64.0 * e64 == doctest::Approx(640.0 * e640).epsilon(1e-10));
}

TEST_CASE("maximal fejer equals brute force with the analytic tail") {
  Rng rng(47);
  DyadicGrid g(5);
  const std::int64_t brute_top = std::int64_t{1} << 11;  // 2^{N+6}
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_function(g, trial % 2 ? MartingaleLaw::kHeavy : MartingaleLaw::kSparse, rng);
    SampledFunction brute(g, std::vector<double>(f.size(), 0.0));
    for (std::int64_t n = 1; n <= brute_top + 1; ++n) {
      auto s = fejer_mean(f, n);
      for (std::size_t i = 0; i < brute.size(); ++i)
        brute[i] = std::max(brute[i], std::fabs(s[i]));
    }
    for (std::size_t i = 0; i < brute.size(); ++i)
      brute[i] = std::max(brute[i], std::fabs(f[i]));
    CHECK(sup_diff(maximal_fejer(f), brute) <= 1e-10);

    SampledFunction bruted(g, std::vector<double>(f.size(), 0.0));
    for (std::int64_t n = 1; n <= brute_top + 1; n *= 2) {
      auto s = fejer_mean(f, n);
      for (std::size_t i = 0; i < bruted.size(); ++i)
        bruted[i] = std::max(bruted[i], std::fabs(s[i]));
    }
    for (std::size_t i = 0; i < bruted.size(); ++i)
      bruted[i] = std::max(bruted[i], std::fabs(f[i]));
    CHECK(sup_diff(maximal_fejer_dyadic(f), bruted) <= 1e-10);
  }

  auto c = SampledFunction::constant(g, 1.5);
  for (double v : maximal_fejer(c).values) CHECK(v == doctest::Approx(1.5));
  Rng rng2(57);
  auto f2 = random_function(g, MartingaleLaw::kGaussian, rng2);
  auto mf2 = maximal_fejer(f2);
  for (std::size_t i = 0; i < f2.size(); ++i) CHECK(mf2[i] >= std::fabs(f2[i]) - 1e-15);
}

TEST_CASE("spectrum json round trip") {
  Rng rng(67);
  auto f = random_function(DyadicGrid(4), MartingaleLaw::kGaussian, rng);
  auto spec = analyze(f);
  write_spectrum_json(spec, "spec_rt.json");
  auto back = read_spectrum_json("spec_rt.json");
  CHECK(back.grid.resolution == 4);
  CHECK(back.coeffs == spec.coeffs);
  std::remove("spec_rt.json");

  std::FILE* out = std::fopen("spec_bad.json", "w");
  std::fputs("{\"resolution\":1,\"ordering\":\"sequency\",\"coeffs\":[1,0]}", out);
  std::fclose(out);
  CHECK_THROWS(read_spectrum_json("spec_bad.json"));
  std::remove("spec_bad.json");
}
