// Dyadic grid on [0,1): leaf arrays, block conditional expectations, martingales,
// adapted processes, stopping times, and the bitwise-xor group action.
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace dmlab {

/// Sentinel for "stopping time never fires". Any stored value greater than the
/// grid resolution reads as infinity, so min() and comparisons work unchanged.
inline constexpr int32_t kNever = std::numeric_limits<int32_t>::max();

/// Regular dyadic grid at resolution N: 2^N half-open leaves [i*2^-N, (i+1)*2^-N).
struct DyadicGrid {
  int resolution = 0;

  DyadicGrid() = default;
  explicit DyadicGrid(int n);

  std::size_t leaf_count() const { return std::size_t{1} << resolution; }
  double leaf_measure() const { return 1.0 / static_cast<double>(leaf_count()); }
  double leaf_midpoint(std::size_t leaf) const {
    return (static_cast<double>(leaf) + 0.5) * leaf_measure();
  }

  /// Hard cap on the resolution: 24 by default, overridable through the
  /// DMLAB_MAX_RESOLUTION environment variable.
  static int max_resolution();

  friend bool operator==(const DyadicGrid&, const DyadicGrid&) = default;
};

/// Leaf-constant function: one value per leaf, indexed left to right.
struct SampledFunction {
  DyadicGrid grid;
  std::vector<double> values;

  SampledFunction() = default;
  SampledFunction(DyadicGrid g, std::vector<double> v);
  static SampledFunction constant(DyadicGrid g, double c);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Average a leaf array (2^leaf_level entries) down to 2^n block values, n <= leaf_level.
std::vector<double> block_averages(const std::vector<double>& leaves, int leaf_level, int n);

/// Expand 2^n block values to 2^leaf_level leaves by repetition.
std::vector<double> expand_blocks(const std::vector<double>& blocks, int n, int leaf_level);

/// Conditional expectation onto the level-n blocks, returned on the leaves.
SampledFunction cond_expect(const SampledFunction& f, int n);

/// Martingale adapted to the dyadic filtration, stored compactly:
/// level n holds exactly 2^n block values, so level n is measurable with
/// respect to the level-n blocks by construction.
class DyadicMartingale {
 public:
  DyadicMartingale() = default;
  DyadicMartingale(DyadicGrid g, std::vector<std::vector<double>> levels);

  const DyadicGrid& grid() const { return grid_; }
  int top_level() const { return grid_.resolution; }

  /// Value of f_n on the block containing the given leaf.
  double at(int n, std::size_t leaf) const {
    return levels_[static_cast<std::size_t>(n)][leaf >> (grid_.resolution - n)];
  }
  const std::vector<double>& level_blocks(int n) const {
    return levels_[static_cast<std::size_t>(n)];
  }
  SampledFunction level(int n) const;
  SampledFunction final() const { return level(top_level()); }

  /// Martingale difference d_n = f_n - f_{n-1} on the leaves (1 <= n <= N).
  SampledFunction difference(int n) const;
  /// Same, but as 2^n compact block values.
  std::vector<double> difference_blocks(int n) const;

  /// Largest deviation from the tower property |avg(children) - parent|.
  double tower_defect() const;

 private:
  DyadicGrid grid_;
  std::vector<std::vector<double>> levels_;
};

/// Build the martingale f_n = E_n(f). With center=true the mean is subtracted
/// first so that f_0 = 0.
DyadicMartingale martingale_of(const SampledFunction& f, bool center);

DyadicMartingale add(const DyadicMartingale& a, const DyadicMartingale& b);
DyadicMartingale subtract(const DyadicMartingale& a, const DyadicMartingale& b);
DyadicMartingale scale(const DyadicMartingale& m, double c);

/// Process (x_0, ..., x_N) with x_n measurable with respect to the level-n
/// blocks; stored compactly like a martingale (entry n holds 2^n values).
class AdaptedProcess {
 public:
  AdaptedProcess() = default;
  AdaptedProcess(DyadicGrid g, std::vector<std::vector<double>> entries);

  /// Build from leaf-expanded entries, checking block measurability of each.
  static AdaptedProcess from_levels(const std::vector<SampledFunction>& entries,
                                    double tol = 0.0);

  const DyadicGrid& grid() const { return grid_; }
  int top_level() const { return grid_.resolution; }
  double at(int n, std::size_t leaf) const {
    return entries_[static_cast<std::size_t>(n)][leaf >> (grid_.resolution - n)];
  }
  const std::vector<double>& entry_blocks(int n) const {
    return entries_[static_cast<std::size_t>(n)];
  }
  SampledFunction entry(int n) const;

 private:
  DyadicGrid grid_;
  std::vector<std::vector<double>> entries_;
};

/// Stopping time as a per-leaf map into {0, ..., N} plus kNever.
struct StoppingTimeMap {
  DyadicGrid grid;
  std::vector<int32_t> tau;

  StoppingTimeMap() = default;
  StoppingTimeMap(DyadicGrid g, std::vector<int32_t> t);

  bool never_fires(std::size_t leaf) const { return tau[leaf] > grid.resolution; }
  /// Indicator of the set where the stopping time fires.
  SampledFunction fires_indicator() const;
};

/// A stopping time must decide "fire at n" on whole level-n blocks. Returns
/// false (with a reason, if requested) when some {tau = n} splits a block or a
/// finite entry lies outside {0, ..., N}.
bool validate_stopping_time(const StoppingTimeMap& nu, std::string* why = nullptr);

/// Stopped martingale f_n^nu = f_{min(n, nu)}.
DyadicMartingale stopped(const DyadicMartingale& m, const StoppingTimeMap& nu);

/// Minimal nonnegative nondecreasing adapted sequence lambda with
/// lambda_{n-1} >= x_n for 1 <= n <= N (and lambda_N = lambda_{N-1}).
/// Each entry is the smallest block-measurable majorant compatible with
/// the previous one, so any admissible dominating sequence is >= lambda.
AdaptedProcess predictable_envelope(const AdaptedProcess& x);

/// Group law of [0,1) under bitwise xor of leaf indices.
inline std::size_t dyadic_add(std::size_t i, std::size_t j) { return i ^ j; }

/// Pullback under translation: result[i] = f[i xor offset_leaf].
SampledFunction dyadic_translate(const SampledFunction& f, std::size_t offset_leaf);

/// Image of a leaf-index set under translation by offset_leaf.
std::vector<std::size_t> translate_set(const std::vector<std::size_t>& a,
                                       std::size_t offset_leaf);

// ---- plain-text I/O ----

/// CSV: one value per line; the line count must be a power of two.
SampledFunction read_function_csv(const std::string& path);
void write_function_csv(const SampledFunction& f, const std::string& path);

/// JSON: {"resolution": N, "values": [...]} with exactly 2^N values.
SampledFunction read_function_json(const std::string& path);
void write_function_json(const SampledFunction& f, const std::string& path);

}  // namespace dmlab
