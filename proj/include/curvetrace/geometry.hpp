#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace curvetrace {

/// Number of grid points floor((hi - lo) / step + 1) along one axis. A
/// relative slack of 1e-9 absorbs decimal steps that are not exact in binary.
std::size_t grid_count(double lo, double hi, double step);

/// Cartesian grid of starting points, stored row-major.
struct Mesh {
  std::vector<std::size_t> npoints;
  std::size_t dim = 0;
  std::vector<double> coords;

  std::size_t rows() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> row(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }
};

/// Grid over [lower, upper] with pitch `stepx`; rows are in lexicographic
/// index order with the last dimension varying fastest.
Mesh rmesh(std::span<const double> lower, std::span<const double> upper, double stepx);

/// Where a stored point came from. `kind` is owned by the caller.
struct Provenance {
  int branch = -1;
  double slice = std::numeric_limits<double>::quiet_NaN();
  int kind = 0;
};

/// Set of points in which no two entries are within `tolerance` of each other
/// in the infinity norm.
///
/// Lookups go through a uniform hash grid over the first min(dim, 3)
/// coordinates; the remaining coordinates are checked exactly on the
/// candidates.
class PointRegistry {
 public:
  /// `cell_size` defaults to `tolerance`; registries that are mostly queried
  /// with a larger radius should pass that radius instead.
  PointRegistry(std::size_t dim, double tolerance, double cell_size = 0.0);

  /// Stores p unless a stored point lies within tolerance(). Non-finite
  /// points are never stored.
  bool append_unique(std::span<const double> p, Provenance provenance = {});

  /// True iff a stored q has ||p - q||_inf <= radius.
  bool contains_within(std::span<const double> p, double radius) const;

  std::size_t dim() const { return dim_; }
  double tolerance() const { return tolerance_; }
  std::size_t size() const { return provenance_.size(); }
  bool empty() const { return provenance_.empty(); }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  const Provenance& provenance(std::size_t i) const { return provenance_[i]; }

  /// One point per row: x1..xn,branch,slice,kind.
  void write_csv(std::ostream& out, std::span<const std::string> names) const;

 private:
  using Key = std::array<std::int64_t, 3>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  Key key_of(std::span<const double> p) const;
  template <typename Visit>
  bool any_candidate(std::span<const double> p, double radius, Visit&& visit) const;

  std::size_t dim_;
  std::size_t hashed_dims_;
  double tolerance_;
  double cell_;
  std::vector<double> coords_;
  std::vector<Provenance> provenance_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> cells_;
};

/// Whether p lies within `tol` of a point already visited.
bool belongs(std::span<const double> p, const PointRegistry& curve_parts, double tol);

}  // namespace curvetrace
