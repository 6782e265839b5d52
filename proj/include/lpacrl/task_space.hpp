#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpacrl/rng.hpp"

namespace lpacrl {

/// One axis of a discrete task grid: either a set of categorical options or a
/// bounded continuous range partitioned into equal-width bins.
struct Dimension {
  enum class Kind { categorical, continuous };

  std::string name;
  Kind kind = Kind::categorical;

  // categorical
  std::vector<std::string> options;

  // continuous
  double lo = 0.0;
  double hi = 0.0;
  int bins = 0;
  // When set, the binned value describes a magnitude and the sign of the
  // concrete draw is sampled uniformly. Both signs belong to the same task
  // instance.
  bool symmetric_sign = false;

  static Dimension categorical(std::string name, std::vector<std::string> options);
  static Dimension continuous(std::string name, double lo, double hi, int bins,
                              bool symmetric_sign = false);

  int cardinality() const;
  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

/// Sub-interval of a continuous dimension. Half-open [lo, hi) except the last
/// bin of a dimension, which is closed so the union covers the full range.
struct BinInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_hi = false;

  bool contains(double x) const {
    return x >= lo && (closed_hi ? x <= hi : x < hi);
  }
};

/// Concrete per-dimension assignment for one sampled episode.
struct ParamValue {
  int coord = 0;       // option id or bin id
  double value = 0.0;  // concrete continuous value (sign applied); option id for categorical
};

struct TaskParams {
  std::int64_t index = 0;
  std::vector<ParamValue> values;
};

/// Immutable discrete task grid over an ordered list of dimensions.
///
/// Indices are row-major over the dimension list with the last dimension
/// varying fastest; index <-> coordinate mapping is a bijection on [0, size).
/// Safe to share across threads after construction.
class TaskSpace {
 public:
  /// Empty space; usable only as a placeholder until assigned from build().
  TaskSpace() = default;

  /// Builds a space, validating every dimension. Throws std::invalid_argument
  /// on an empty dimension list or any invalid dimension.
  static TaskSpace build(std::vector<Dimension> dims);

  std::int64_t size() const { return size_; }
  const std::vector<Dimension>& dimensions() const { return dims_; }

  std::int64_t index_of(std::span<const int> coords) const;
  std::vector<int> coords_of(std::int64_t index) const;

  BinInterval bin_interval(std::size_t dim, int bin) const;

  /// Uniform concrete draw inside the instance's cell: continuous values are
  /// uniform within their bin sub-interval (sign flipped with probability 1/2
  /// on symmetric dimensions), categorical values are the assigned option.
  TaskParams draw_params(std::int64_t index, Rng& rng) const;

  /// Position of the named dimension, or -1.
  int find_dimension(std::string_view name) const;
  /// Position of the first continuous dimension, or -1.
  int first_continuous_dimension() const;

 private:
  std::vector<Dimension> dims_;
  std::int64_t size_ = 0;
};

}  // namespace lpacrl
