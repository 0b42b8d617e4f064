// Dyadic grid core: block averaging, martingales, stopping times, envelopes, I/O.
#include "dmlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dmlab {

int DyadicGrid::max_resolution() {
  if (const char* env = std::getenv("DMLAB_MAX_RESOLUTION")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v <= 30) return static_cast<int>(v);
  }
  return 24;
}

DyadicGrid::DyadicGrid(int n) : resolution(n) {
  if (n < 0) throw std::invalid_argument("grid resolution must be nonnegative");
  if (n > max_resolution())
    throw std::invalid_argument("grid resolution " + std::to_string(n) +
                                " exceeds cap " + std::to_string(max_resolution()));
}

SampledFunction::SampledFunction(DyadicGrid g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.leaf_count())
    throw std::invalid_argument("sampled function needs one value per leaf");
}

SampledFunction SampledFunction::constant(DyadicGrid g, double c) {
  return SampledFunction(g, std::vector<double>(g.leaf_count(), c));
}

std::vector<double> block_averages(const std::vector<double>& leaves, int leaf_level, int n) {
  if (n < 0 || n > leaf_level) throw std::invalid_argument("block level out of range");
  std::size_t width = std::size_t{1} << (leaf_level - n);
  std::vector<double> out(std::size_t{1} << n);
  for (std::size_t b = 0; b < out.size(); ++b) {
    double s = 0.0;
    for (std::size_t i = b * width; i < (b + 1) * width; ++i) s += leaves[i];
    out[b] = s / static_cast<double>(width);
  }
  return out;
}

std::vector<double> expand_blocks(const std::vector<double>& blocks, int n, int leaf_level) {
  if (n < 0 || n > leaf_level) throw std::invalid_argument("block level out of range");
  std::size_t width = std::size_t{1} << (leaf_level - n);
  std::vector<double> out(std::size_t{1} << leaf_level);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(b * width),
              out.begin() + static_cast<std::ptrdiff_t>((b + 1) * width), blocks[b]);
  return out;
}

SampledFunction cond_expect(const SampledFunction& f, int n) {
  int top = f.grid.resolution;
  return SampledFunction(f.grid, expand_blocks(block_averages(f.values, top, n), n, top));
}

DyadicMartingale::DyadicMartingale(DyadicGrid g, std::vector<std::vector<double>> levels)
    : grid_(g), levels_(std::move(levels)) {
  if (levels_.size() != static_cast<std::size_t>(grid_.resolution) + 1)
    throw std::invalid_argument("martingale needs levels 0..N");
  for (int n = 0; n <= grid_.resolution; ++n)
    if (levels_[static_cast<std::size_t>(n)].size() != (std::size_t{1} << n))
      throw std::invalid_argument("martingale level " + std::to_string(n) +
                                  " must hold 2^n block values");
}

SampledFunction DyadicMartingale::level(int n) const {
  return SampledFunction(grid_, expand_blocks(levels_[static_cast<std::size_t>(n)], n,
                                              grid_.resolution));
}

SampledFunction DyadicMartingale::difference(int n) const {
  return SampledFunction(grid_, expand_blocks(difference_blocks(n), n, grid_.resolution));
}

std::vector<double> DyadicMartingale::difference_blocks(int n) const {
  if (n < 1 || n > grid_.resolution)
    throw std::invalid_argument("difference index must lie in 1..N");
  const auto& cur = levels_[static_cast<std::size_t>(n)];
  const auto& prev = levels_[static_cast<std::size_t>(n - 1)];
  std::vector<double> d(cur.size());
  for (std::size_t b = 0; b < cur.size(); ++b) d[b] = cur[b] - prev[b >> 1];
  return d;
}

double DyadicMartingale::tower_defect() const {
  double worst = 0.0;
  for (int n = 0; n < grid_.resolution; ++n) {
    const auto& par = levels_[static_cast<std::size_t>(n)];
    const auto& ch = levels_[static_cast<std::size_t>(n) + 1];
    for (std::size_t b = 0; b < par.size(); ++b)
      worst = std::max(worst, std::abs(0.5 * (ch[2 * b] + ch[2 * b + 1]) - par[b]));
  }
  return worst;
}

DyadicMartingale martingale_of(const SampledFunction& f, bool center) {
  int top = f.grid.resolution;
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(top) + 1);
  levels[static_cast<std::size_t>(top)] = f.values;
  for (int n = top; n > 0; --n) {
    const auto& ch = levels[static_cast<std::size_t>(n)];
    std::vector<double> par(ch.size() / 2);
    for (std::size_t b = 0; b < par.size(); ++b) par[b] = 0.5 * (ch[2 * b] + ch[2 * b + 1]);
    levels[static_cast<std::size_t>(n) - 1] = std::move(par);
  }
  if (center) {
    double mean = levels[0][0];
    for (auto& lv : levels)
      for (double& v : lv) v -= mean;
  }
  return DyadicMartingale(f.grid, std::move(levels));
}

namespace {
DyadicMartingale combine(const DyadicMartingale& a, const DyadicMartingale& b,
                         double cb) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("martingale arithmetic needs matching grids");
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(a.top_level()) + 1);
  for (int n = 0; n <= a.top_level(); ++n) {
    const auto& la = a.level_blocks(n);
    const auto& lb = b.level_blocks(n);
    std::vector<double> out(la.size());
    for (std::size_t i = 0; i < la.size(); ++i) out[i] = la[i] + cb * lb[i];
    levels[static_cast<std::size_t>(n)] = std::move(out);
  }
  return DyadicMartingale(a.grid(), std::move(levels));
}
}  // namespace

DyadicMartingale add(const DyadicMartingale& a, const DyadicMartingale& b) {
  return combine(a, b, 1.0);
}
DyadicMartingale subtract(const DyadicMartingale& a, const DyadicMartingale& b) {
  return combine(a, b, -1.0);
}
DyadicMartingale scale(const DyadicMartingale& m, double c) {
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(m.top_level()) + 1);
  for (int n = 0; n <= m.top_level(); ++n) {
    auto lv = m.level_blocks(n);
    for (double& v : lv) v *= c;
    levels[static_cast<std::size_t>(n)] = std::move(lv);
  }
  return DyadicMartingale(m.grid(), std::move(levels));
}

AdaptedProcess::AdaptedProcess(DyadicGrid g, std::vector<std::vector<double>> entries)
    : grid_(g), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(grid_.resolution) + 1)
    throw std::invalid_argument("adapted process needs entries 0..N");
  for (int n = 0; n <= grid_.resolution; ++n)
    if (entries_[static_cast<std::size_t>(n)].size() != (std::size_t{1} << n))
      throw std::invalid_argument("adapted entry " + std::to_string(n) +
                                  " must hold 2^n block values");
}

AdaptedProcess AdaptedProcess::from_levels(const std::vector<SampledFunction>& entries,
                                           double tol) {
  if (entries.empty()) throw std::invalid_argument("adapted process needs entries 0..N");
  DyadicGrid g = entries[0].grid;
  if (entries.size() != static_cast<std::size_t>(g.resolution) + 1)
    throw std::invalid_argument("adapted process needs entries 0..N");
  std::vector<std::vector<double>> compact(entries.size());
  for (int n = 0; n <= g.resolution; ++n) {
    const auto& e = entries[static_cast<std::size_t>(n)];
    if (!(e.grid == g)) throw std::invalid_argument("adapted entries on mixed grids");
    std::size_t width = std::size_t{1} << (g.resolution - n);
    std::vector<double> blocks(std::size_t{1} << n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      double v = e.values[b * width];
      for (std::size_t i = b * width; i < (b + 1) * width; ++i)
        if (std::abs(e.values[i] - v) > tol)
          throw std::invalid_argument("entry " + std::to_string(n) +
                                      " is not block measurable at its level");
      blocks[b] = v;
    }
    compact[static_cast<std::size_t>(n)] = std::move(blocks);
  }
  return AdaptedProcess(g, std::move(compact));
}

SampledFunction AdaptedProcess::entry(int n) const {
  return SampledFunction(grid_, expand_blocks(entries_[static_cast<std::size_t>(n)], n,
                                              grid_.resolution));
}

StoppingTimeMap::StoppingTimeMap(DyadicGrid g, std::vector<int32_t> t)
    : grid(g), tau(std::move(t)) {
  if (tau.size() != grid.leaf_count())
    throw std::invalid_argument("stopping time needs one entry per leaf");
}

SampledFunction StoppingTimeMap::fires_indicator() const {
  std::vector<double> ind(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) ind[i] = never_fires(i) ? 0.0 : 1.0;
  return SampledFunction(grid, std::move(ind));
}

bool validate_stopping_time(const StoppingTimeMap& nu, std::string* why) {
  int top = nu.grid.resolution;
  for (std::size_t i = 0; i < nu.tau.size(); ++i) {
    int32_t t = nu.tau[i];
    if (t < 0 || (t > top && t != kNever)) {
      if (why) *why = "leaf " + std::to_string(i) + " has entry outside {0..N, never}";
      return false;
    }
  }
  for (int n = 0; n <= top; ++n) {
    std::size_t width = std::size_t{1} << (top - n);
    for (std::size_t b = 0; b < (std::size_t{1} << n); ++b) {
      bool first = nu.tau[b * width] == n;
      for (std::size_t i = b * width; i < (b + 1) * width; ++i) {
        if ((nu.tau[i] == n) != first) {
          if (why)
            *why = "the set {tau = " + std::to_string(n) +
                   "} splits a level-" + std::to_string(n) + " block";
          return false;
        }
      }
    }
  }
  return true;
}

DyadicMartingale stopped(const DyadicMartingale& m, const StoppingTimeMap& nu) {
  if (!(m.grid() == nu.grid))
    throw std::invalid_argument("stopped martingale needs matching grids");
  int top = m.top_level();
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(top) + 1);
  for (int n = 0; n <= top; ++n) {
    std::size_t width = std::size_t{1} << (top - n);
    std::vector<double> blocks(std::size_t{1} << n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      // If any leaf of the block stops before n, the whole block stopped with it
      // (the fire set at that earlier level is a union of coarser blocks).
      std::size_t leaf = b * width;
      int32_t t = nu.tau[leaf];
      blocks[b] = (t >= n) ? m.level_blocks(n)[b] : m.at(t, leaf);
    }
    levels[static_cast<std::size_t>(n)] = std::move(blocks);
  }
  return DyadicMartingale(m.grid(), std::move(levels));
}

AdaptedProcess predictable_envelope(const AdaptedProcess& x) {
  int top = x.top_level();
  std::vector<std::vector<double>> lam(static_cast<std::size_t>(top) + 1);
  if (top == 0) {
    lam[0] = {0.0};
    return AdaptedProcess(x.grid(), std::move(lam));
  }
  const auto& x1 = x.entry_blocks(1);
  lam[0] = {std::max({0.0, x1[0], x1[1]})};
  for (int n = 1; n < top; ++n) {
    const auto& xn1 = x.entry_blocks(n + 1);
    std::vector<double> cur(std::size_t{1} << n);
    for (std::size_t b = 0; b < cur.size(); ++b)
      cur[b] = std::max({lam[static_cast<std::size_t>(n) - 1][b >> 1], xn1[2 * b],
                         xn1[2 * b + 1]});
    lam[static_cast<std::size_t>(n)] = std::move(cur);
  }
  // No entry steers the final level; it repeats the previous one.
  std::vector<double> last(std::size_t{1} << top);
  for (std::size_t b = 0; b < last.size(); ++b)
    last[b] = lam[static_cast<std::size_t>(top) - 1][b >> 1];
  lam[static_cast<std::size_t>(top)] = std::move(last);
  return AdaptedProcess(x.grid(), std::move(lam));
}

SampledFunction dyadic_translate(const SampledFunction& f, std::size_t offset_leaf) {
  if (offset_leaf >= f.grid.leaf_count())
    throw std::invalid_argument("translation offset outside the grid");
  std::vector<double> out(f.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.values[i ^ offset_leaf];
  return SampledFunction(f.grid, std::move(out));
}

std::vector<std::size_t> translate_set(const std::vector<std::size_t>& a,
                                       std::size_t offset_leaf) {
  std::vector<std::size_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ offset_leaf;
  return out;
}

namespace {
int resolution_for_count(std::size_t count) {
  if (count == 0) throw std::invalid_argument("empty input");
  int n = 0;
  while ((std::size_t{1} << n) < count) ++n;
  if ((std::size_t{1} << n) != count)
    throw std::invalid_argument("value count " + std::to_string(count) +
                                " is not a power of two");
  return n;
}
}  // namespace

SampledFunction read_function_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    double v = std::stod(line, &pos);
    vals.push_back(v);
  }
  // Sequence the size read before the move; argument order is unspecified.
  int res = resolution_for_count(vals.size());
  return SampledFunction(DyadicGrid(res), std::move(vals));
}

void write_function_csv(const SampledFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[64];
  for (double v : f.values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

SampledFunction read_function_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  int res = j.at("resolution").get<int>();
  std::vector<double> vals = j.at("values").get<std::vector<double>>();
  DyadicGrid g(res);
  if (vals.size() != g.leaf_count())
    throw std::invalid_argument("json carries " + std::to_string(vals.size()) +
                                " values for resolution " + std::to_string(res));
  return SampledFunction(g, std::move(vals));
}

void write_function_json(const SampledFunction& f, const std::string& path) {
  nlohmann::json j;
  j["resolution"] = f.grid.resolution;
  j["values"] = f.values;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dmlab
