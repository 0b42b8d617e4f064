#include "dmlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace dmlab {

namespace {

int resolve_upto(const DyadicMartingale& m, int upto) {
  if (upto < 0) return m.top_level();
  if (upto > m.top_level()) throw std::invalid_argument("level exceeds the martingale resolution");
  return upto;
}

/// Compact partial sums of the squared variation. kSquare keeps level-n data
/// on 2^n blocks; kConditional keeps it on 2^{n-1} blocks (one level early).
std::vector<std::vector<double>> squared_partials(const DyadicMartingale& m,
                                                  VariationKind kind) {
  const int N = m.top_level();
  std::vector<std::vector<double>> acc(static_cast<std::size_t>(N) + 1);
  acc[0] = {0.0};
  for (int n = 1; n <= N; ++n) {
    auto d = m.difference_blocks(n);
    const auto& prev = acc[static_cast<std::size_t>(n - 1)];
    auto& cur = acc[static_cast<std::size_t>(n)];
    if (kind == VariationKind::kSquare) {
      cur.resize(d.size());
      for (std::size_t b = 0; b < d.size(); ++b) cur[b] = prev[(n == 1) ? 0 : b >> 1] + d[b] * d[b];
    } else {
      cur.resize(d.size() / 2);
      for (std::size_t p = 0; p < cur.size(); ++p) {
        double mean_sq = 0.5 * (d[2 * p] * d[2 * p] + d[2 * p + 1] * d[2 * p + 1]);
        cur[p] = prev[(n == 1) ? 0 : p >> 1] + mean_sq;
      }
    }
  }
  return acc;
}

void check_nonneg(const std::vector<SampledFunction>& gs) {
  for (const auto& g : gs)
    for (double v : g.values)
      if (v < 0.0) throw std::invalid_argument("summands must be nonnegative");
}

void check_batch(const std::vector<SampledFunction>& gs) {
  if (gs.empty()) throw std::invalid_argument("empty function batch");
  for (const auto& g : gs)
    if (g.grid.resolution != gs.front().grid.resolution)
      throw std::invalid_argument("batch entries live on different grids");
}

/// Per-block sums of w and f*w at one level, from leaf prefix sums.
struct BlockSums {
  std::vector<double> wpre, fpre;  // prefix sums over leaves, scaled by 2^-N

  BlockSums(const SampledFunction& f, const SampledFunction& w) {
    const std::size_t L = f.size();
    const double dx = f.grid.leaf_measure();
    wpre.assign(L + 1, 0.0);
    fpre.assign(L + 1, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
      wpre[i + 1] = wpre[i] + w[i] * dx;
      fpre[i + 1] = fpre[i] + f[i] * w[i] * dx;
    }
  }

  double measure(int level, std::size_t block, int N) const {
    std::size_t lo = block << (N - level), hi = (block + 1) << (N - level);
    return wpre[hi] - wpre[lo];
  }
  double integral(int level, std::size_t block, int N) const {
    std::size_t lo = block << (N - level), hi = (block + 1) << (N - level);
    return fpre[hi] - fpre[lo];
  }
};

void check_uv_args(const SampledFunction& f, const SampledFunction& w, double r, int n) {
  if (n < 0 || n > f.grid.resolution)
    throw std::invalid_argument("block level outside the grid");
  if (!(r > 0.0)) throw std::invalid_argument("exponent r must be positive");
  if (w.grid.resolution != f.grid.resolution)
    throw std::invalid_argument("weight and function grids differ");
  for (double v : w.values)
    if (!(v > 0.0)) throw std::invalid_argument("weight must be strictly positive");
}

}  // namespace

SampledFunction doob_maximal(const DyadicMartingale& m, int upto) {
  const int N = m.top_level();
  const int top = resolve_upto(m, upto);
  SampledFunction out(m.grid(), std::vector<double>(m.grid().leaf_count()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::fabs(m.at(0, i));
  for (int n = 1; n <= top; ++n) {
    const auto& lv = m.level_blocks(n);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::max(out[i], std::fabs(lv[i >> (N - n)]));
  }
  return out;
}

SampledFunction variation(const DyadicMartingale& m, VariationKind kind, int upto) {
  const int N = m.top_level();
  const int top = resolve_upto(m, upto);
  auto acc = squared_partials(m, kind);
  const auto& sq = acc[static_cast<std::size_t>(top)];
  // Block level of the stored data: kConditional lives one level early.
  int lvl = (top == 0) ? 0 : (kind == VariationKind::kSquare ? top : top - 1);
  SampledFunction out(m.grid(), std::vector<double>(m.grid().leaf_count()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(sq[i >> (N - lvl)]);
  return out;
}

AdaptedProcess variation_process(const DyadicMartingale& m, VariationKind kind) {
  const int N = m.top_level();
  auto acc = squared_partials(m, kind);
  std::vector<std::vector<double>> entries(static_cast<std::size_t>(N) + 1);
  entries[0] = {0.0};
  for (int n = 1; n <= N; ++n) {
    const auto& sq = acc[static_cast<std::size_t>(n)];
    auto& e = entries[static_cast<std::size_t>(n)];
    e.resize(std::size_t{1} << n);
    if (kind == VariationKind::kSquare) {
      for (std::size_t b = 0; b < e.size(); ++b) e[b] = std::sqrt(sq[b]);
    } else {
      for (std::size_t b = 0; b < e.size(); ++b) e[b] = std::sqrt(sq[b >> 1]);
    }
  }
  return AdaptedProcess(m.grid(), std::move(entries));
}

HardyNormReport hardy_norms(const DyadicMartingale& m, const MusielakFunction& phi) {
  const int N = m.top_level();
  HardyNormReport rep;
  rep.maximal = luxemburg_norm(phi, doob_maximal(m));
  rep.square = luxemburg_norm(phi, variation(m, VariationKind::kSquare));
  rep.cond_square = luxemburg_norm(phi, variation(m, VariationKind::kConditional));

  std::vector<std::vector<double>> abs_levels(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    abs_levels[static_cast<std::size_t>(n)] = m.level_blocks(n);
    for (double& v : abs_levels[static_cast<std::size_t>(n)]) v = std::fabs(v);
  }
  auto env_m = predictable_envelope(AdaptedProcess(m.grid(), std::move(abs_levels)));
  rep.envelope_max = luxemburg_norm(phi, env_m.entry(N));

  auto env_s = predictable_envelope(variation_process(m, VariationKind::kSquare));
  rep.envelope_square = luxemburg_norm(phi, env_s.entry(N));

  SampledFunction gsum(m.grid(), std::vector<double>(m.grid().leaf_count(), 0.0));
  for (int n = 1; n <= N; ++n) {
    auto d = m.difference_blocks(n);
    for (std::size_t i = 0; i < gsum.size(); ++i) gsum[i] += std::fabs(d[i >> (N - n)]);
  }
  rep.diff_sum = luxemburg_norm(phi, gsum);
  return rep;
}

DyadicMartingale martingale_transform(const DyadicMartingale& m, const AdaptedProcess& v) {
  const int N = m.top_level();
  if (v.grid().resolution != N)
    throw std::invalid_argument("multiplier process lives on a different grid");
  for (int n = 0; n < N; ++n)
    for (double x : v.entry_blocks(n))
      if (!(std::fabs(x) <= 1.0))
        throw std::invalid_argument("multipliers must satisfy |v| <= 1");

  std::vector<std::vector<double>> levels(static_cast<std::size_t>(N) + 1);
  levels[0] = {0.0};
  for (int n = 1; n <= N; ++n) {
    auto d = m.difference_blocks(n);
    const auto& prev = levels[static_cast<std::size_t>(n - 1)];
    const auto& mult = v.entry_blocks(n - 1);
    auto& cur = levels[static_cast<std::size_t>(n)];
    cur.resize(d.size());
    for (std::size_t b = 0; b < d.size(); ++b)
      cur[b] = prev[(n == 1) ? 0 : b >> 1] + mult[(n == 1) ? 0 : b >> 1] * d[b];
  }
  return DyadicMartingale(m.grid(), std::move(levels));
}

std::pair<SampledFunction, SampledFunction> dual_doob_sum(
    const std::vector<SampledFunction>& gs, int shift) {
  check_batch(gs);
  check_nonneg(gs);
  const int N = gs.front().grid.resolution;
  if (gs.size() > static_cast<std::size_t>(N))
    throw std::invalid_argument("more summands than filtration levels");
  SampledFunction lhs(gs.front().grid, std::vector<double>(gs.front().size(), 0.0));
  SampledFunction rhs = lhs;
  for (std::size_t j = 0; j < gs.size(); ++j) {
    int k = std::clamp(static_cast<int>(j) + 1 + shift, 0, N);
    auto e = cond_expect(gs[j], k);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      lhs[i] += e[i];
      rhs[i] += gs[j][i];
    }
  }
  return {std::move(lhs), std::move(rhs)};
}

std::pair<SampledFunction, SampledFunction> stein_sum(
    const std::vector<SampledFunction>& gs, double r) {
  if (!(r > 1.0)) throw std::invalid_argument("the summed exponent must exceed one");
  check_batch(gs);
  check_nonneg(gs);
  const int N = gs.front().grid.resolution;
  if (gs.size() > static_cast<std::size_t>(N))
    throw std::invalid_argument("more summands than filtration levels");
  SampledFunction lhs(gs.front().grid, std::vector<double>(gs.front().size(), 0.0));
  SampledFunction rhs = lhs;
  for (std::size_t j = 0; j < gs.size(); ++j) {
    auto e = cond_expect(gs[j], static_cast<int>(j) + 1);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      lhs[i] += std::pow(e[i], r);
      rhs[i] += std::pow(gs[j][i], r);
    }
  }
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    lhs[i] = std::pow(lhs[i], 1.0 / r);
    rhs[i] = std::pow(rhs[i], 1.0 / r);
  }
  return {std::move(lhs), std::move(rhs)};
}

std::pair<SampledFunction, SampledFunction> vector_maximal(
    const std::vector<SampledFunction>& fs, double r) {
  if (!(r > 1.0)) throw std::invalid_argument("the summed exponent must exceed one");
  check_batch(fs);
  SampledFunction lhs(fs.front().grid, std::vector<double>(fs.front().size(), 0.0));
  SampledFunction rhs = lhs;
  for (const auto& f : fs) {
    auto mf = doob_maximal(martingale_of(f, /*center=*/false));
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      lhs[i] += std::pow(mf[i], r);
      rhs[i] += std::pow(std::fabs(f[i]), r);
    }
  }
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    lhs[i] = std::pow(lhs[i], 1.0 / r);
    rhs[i] = std::pow(rhs[i], 1.0 / r);
  }
  return {std::move(lhs), std::move(rhs)};
}

double weak_type_value(const DyadicMartingale& m, const MusielakFunction& phi) {
  auto mf = doob_maximal(m);
  // Sort leaves by M(f) descending; the super-level set {M >= v} grows as v
  // drops, so each distinct value sees an incrementally extended leaf set.
  std::vector<std::size_t> order(mf.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return mf[a] > mf[b]; });

  double best = 0.0;
  std::vector<std::size_t> set;
  std::size_t pos = 0;
  while (pos < order.size()) {
    double v = mf[order[pos]];
    while (pos < order.size() && mf[order[pos]] == v) set.push_back(order[pos++]);
    if (v <= 0.0) break;
    best = std::max(best, v * indicator_norm(phi, mf.grid, set));
  }
  return best;
}

SampledFunction U_maximal(const SampledFunction& f, const SampledFunction& weight,
                          double r, int n) {
  check_uv_args(f, weight, r, n);
  const int N = f.grid.resolution;
  BlockSums sums(f, weight);
  std::vector<double> blocks(std::size_t{1} << n, 0.0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      std::size_t tb = b ^ (std::size_t{1} << (n - j - 1));
      total += std::exp2(static_cast<double>(j - n) * r) *
               std::fabs(sums.integral(n, tb, N)) / sums.measure(n, tb, N);
    }
    blocks[b] = total;
  }
  return SampledFunction(f.grid, expand_blocks(blocks, n, N));
}

SampledFunction U_maximal(const SampledFunction& f, double r, int n) {
  return U_maximal(f, SampledFunction::constant(f.grid, 1.0), r, n);
}

SampledFunction V_maximal(const SampledFunction& f, const SampledFunction& weight,
                          double r, int n) {
  check_uv_args(f, weight, r, n);
  const int N = f.grid.resolution;
  BlockSums sums(f, weight);
  std::vector<double> blocks(std::size_t{1} << n, 0.0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      std::size_t tb = b ^ (std::size_t{1} << (n - j - 1));
      for (int i = j; i < n; ++i) {
        std::size_t anc = tb >> (n - i);
        total += std::exp2(static_cast<double>(j - n) * r) *
                 std::exp2(static_cast<double>(i - n) * r) *
                 std::exp2(static_cast<double>(n - i)) *
                 std::fabs(sums.integral(i, anc, N)) / sums.measure(i, anc, N);
      }
    }
    blocks[b] = total;
  }
  return SampledFunction(f.grid, expand_blocks(blocks, n, N));
}

SampledFunction V_maximal(const SampledFunction& f, double r, int n) {
  return V_maximal(f, SampledFunction::constant(f.grid, 1.0), r, n);
}

}  // namespace dmlab
