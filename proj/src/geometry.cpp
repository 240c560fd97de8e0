#include "curvetrace/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace curvetrace {

std::size_t grid_count(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(lo <= hi)) throw std::invalid_argument("grid bounds must satisfy lower <= upper");
  const double ratio = (hi - lo) / step;
  return static_cast<std::size_t>(std::floor(ratio + 1.0 + 1e-9 * std::max(1.0, ratio)));
}

Mesh rmesh(std::span<const double> lower, std::span<const double> upper, double stepx) {
  if (lower.size() != upper.size()) throw std::invalid_argument("rmesh: bound size mismatch");
  Mesh mesh;
  mesh.dim = lower.size();
  std::size_t total = 1;
  for (std::size_t j = 0; j < mesh.dim; ++j) {
    mesh.npoints.push_back(grid_count(lower[j], upper[j], stepx));
    total *= mesh.npoints.back();
  }
  if (mesh.dim == 0) return mesh;
  mesh.coords.resize(total * mesh.dim);
  std::vector<std::size_t> idx(mesh.dim, 0);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t j = 0; j < mesh.dim; ++j)
      mesh.coords[r * mesh.dim + j] =
          std::min(upper[j], lower[j] + static_cast<double>(idx[j]) * stepx);
    for (std::size_t j = mesh.dim; j-- > 0;) {
      if (++idx[j] < mesh.npoints[j]) break;
      idx[j] = 0;
    }
  }
  return mesh;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kMaxCellIndex = 4.0e15;
constexpr std::size_t kMaxNeighbourCells = 4096;

double linf(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

bool all_finite(std::span<const double> p) {
  return std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

std::size_t PointRegistry::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t v : k) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

PointRegistry::PointRegistry(std::size_t dim, double tolerance, double cell_size)
    : dim_(dim),
      hashed_dims_(std::min<std::size_t>(dim, 3)),
      tolerance_(tolerance),
      cell_(cell_size > 0.0 ? cell_size : tolerance) {
  if (dim == 0) throw std::invalid_argument("PointRegistry: dimension must be positive");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("PointRegistry: tolerance must be >= 0");
  if (!(cell_ > 0.0)) cell_ = 1.0;
}

PointRegistry::Key PointRegistry::key_of(std::span<const double> p) const {
  Key key{0, 0, 0};
  for (std::size_t j = 0; j < hashed_dims_; ++j) {
    const double c = std::clamp(std::floor(p[j] / cell_), -kMaxCellIndex, kMaxCellIndex);
    key[j] = static_cast<std::int64_t>(c);
  }
  return key;
}

template <typename Visit>
bool PointRegistry::any_candidate(std::span<const double> p, double radius, Visit&& visit) const {
  const double reach = std::ceil(radius / cell_);
  const double span = 2.0 * reach + 1.0;
  const double neighbourhood = std::pow(span, static_cast<double>(hashed_dims_));
  if (!std::isfinite(neighbourhood) || neighbourhood > static_cast<double>(kMaxNeighbourCells)) {
    for (std::size_t i = 0; i < size(); ++i)
      if (visit(i)) return true;
    return false;
  }
  const auto r = static_cast<std::int64_t>(reach);
  const Key centre = key_of(p);
  Key k = centre;
  std::array<std::int64_t, 3> off{};
  for (std::size_t j = 0; j < hashed_dims_; ++j) off[j] = -r;
  for (;;) {
    for (std::size_t j = 0; j < hashed_dims_; ++j) k[j] = centre[j] + off[j];
    if (const auto it = cells_.find(k); it != cells_.end())
      for (std::size_t i : it->second)
        if (visit(i)) return true;
    std::size_t j = 0;
    for (; j < hashed_dims_; ++j) {
      if (++off[j] <= r) break;
      off[j] = -r;
    }
    if (j == hashed_dims_) return false;
  }
}

bool PointRegistry::contains_within(std::span<const double> p, double radius) const {
  if (p.size() != dim_) throw std::invalid_argument("PointRegistry: dimension mismatch");
  if (empty() || !all_finite(p)) return false;
  return any_candidate(p, radius, [&](std::size_t i) { return linf(point(i), p) <= radius; });
}

bool PointRegistry::append_unique(std::span<const double> p, Provenance provenance) {
  if (p.size() != dim_) throw std::invalid_argument("PointRegistry: dimension mismatch");
  if (!all_finite(p)) return false;
  if (contains_within(p, tolerance_)) return false;
  const std::size_t id = size();
  coords_.insert(coords_.end(), p.begin(), p.end());
  provenance_.push_back(provenance);
  cells_[key_of(p)].push_back(id);
  return true;
}

void PointRegistry::write_csv(std::ostream& out, std::span<const std::string> names) const {
  for (std::size_t j = 0; j < dim_; ++j)
    out << (j < names.size() ? names[j] : "x" + std::to_string(j + 1)) << ',';
  out << "branch,slice,kind\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < size(); ++i) {
    for (double v : point(i)) out << v << ',';
    out << provenance_[i].branch << ',' << provenance_[i].slice << ',' << provenance_[i].kind
        << '\n';
  }
  out.precision(old_precision);
}

bool belongs(std::span<const double> p, const PointRegistry& curve_parts, double tol) {
  return curve_parts.contains_within(p, tol);
}

}  // namespace curvetrace
