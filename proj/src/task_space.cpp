#include "lpacrl/task_space.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace lpacrl {

Dimension Dimension::categorical(std::string name, std::vector<std::string> options) {
  Dimension d;
  d.name = std::move(name);
  d.kind = Kind::categorical;
  d.options = std::move(options);
  return d;
}

Dimension Dimension::continuous(std::string name, double lo, double hi, int bins,
                                bool symmetric_sign) {
  Dimension d;
  d.name = std::move(name);
  d.kind = Kind::continuous;
  d.lo = lo;
  d.hi = hi;
  d.bins = bins;
  d.symmetric_sign = symmetric_sign;
  return d;
}

int Dimension::cardinality() const {
  return kind == Kind::categorical ? static_cast<int>(options.size()) : bins;
}

void Dimension::validate() const {
  if (name.empty()) throw std::invalid_argument("dimension has no name");
  if (kind == Kind::categorical) {
    if (options.empty())
      throw std::invalid_argument("categorical dimension '" + name + "' has no options");
    std::set<std::string> distinct(options.begin(), options.end());
    if (distinct.size() != options.size())
      throw std::invalid_argument("categorical dimension '" + name + "' has duplicate labels");
  } else {
    if (bins < 1)
      throw std::invalid_argument("continuous dimension '" + name + "' needs bins >= 1");
    if (!(lo < hi))
      throw std::invalid_argument("continuous dimension '" + name + "' needs lo < hi");
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("continuous dimension '" + name + "' has non-finite bounds");
  }
}

TaskSpace TaskSpace::build(std::vector<Dimension> dims) {
  if (dims.empty()) throw std::invalid_argument("task space needs at least one dimension");
  std::int64_t size = 1;
  for (const auto& d : dims) {
    d.validate();
    size *= d.cardinality();
  }
  TaskSpace space;
  space.dims_ = std::move(dims);
  space.size_ = size;
  return space;
}

std::int64_t TaskSpace::index_of(std::span<const int> coords) const {
  if (coords.size() != dims_.size())
    throw std::out_of_range("coordinate count does not match dimension count");
  std::int64_t index = 0;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const int n = dims_[d].cardinality();
    if (coords[d] < 0 || coords[d] >= n)
      throw std::out_of_range("coordinate out of range in dimension '" + dims_[d].name + "'");
    index = index * n + coords[d];
  }
  return index;
}

std::vector<int> TaskSpace::coords_of(std::int64_t index) const {
  if (index < 0 || index >= size_) throw std::out_of_range("task index out of range");
  std::vector<int> coords(dims_.size());
  for (std::size_t d = dims_.size(); d-- > 0;) {
    const int n = dims_[d].cardinality();
    coords[d] = static_cast<int>(index % n);
    index /= n;
  }
  return coords;
}

BinInterval TaskSpace::bin_interval(std::size_t dim, int bin) const {
  if (dim >= dims_.size()) throw std::out_of_range("dimension out of range");
  const Dimension& d = dims_[dim];
  if (d.kind != Dimension::Kind::continuous)
    throw std::invalid_argument("dimension '" + d.name + "' is not continuous");
  if (bin < 0 || bin >= d.bins) throw std::out_of_range("bin out of range");
  const double width = (d.hi - d.lo) / d.bins;
  BinInterval iv;
  iv.lo = d.lo + bin * width;
  iv.hi = (bin == d.bins - 1) ? d.hi : d.lo + (bin + 1) * width;
  iv.closed_hi = (bin == d.bins - 1);
  return iv;
}

TaskParams TaskSpace::draw_params(std::int64_t index, Rng& rng) const {
  const std::vector<int> coords = coords_of(index);
  TaskParams params;
  params.index = index;
  params.values.resize(dims_.size());
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    ParamValue& v = params.values[d];
    v.coord = coords[d];
    if (dims_[d].kind == Dimension::Kind::categorical) {
      v.value = static_cast<double>(coords[d]);
    } else {
      const BinInterval iv = bin_interval(d, coords[d]);
      v.value = rng.uniform(iv.lo, iv.hi);
      if (dims_[d].symmetric_sign) v.value *= rng.sign();
    }
  }
  return params;
}

int TaskSpace::find_dimension(std::string_view name) const {
  for (std::size_t d = 0; d < dims_.size(); ++d)
    if (dims_[d].name == name) return static_cast<int>(d);
  return -1;
}

int TaskSpace::first_continuous_dimension() const {
  for (std::size_t d = 0; d < dims_.size(); ++d)
    if (dims_[d].kind == Dimension::Kind::continuous) return static_cast<int>(d);
  return -1;
}

}  // namespace lpacrl
