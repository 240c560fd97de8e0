#include "curvetrace/system.hpp"

#include <cmath>
#include <stdexcept>

#include "curvetrace/numerics.hpp"

namespace curvetrace {

SystemDefinition::SystemDefinition(std::vector<std::string> names,
                                   std::vector<Expression> equations, std::vector<double> lower,
                                   std::vector<double> upper)
    : names_(std::move(names)),
      equations_(std::move(equations)),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {
  validate();
  const std::size_t size = n();
  jacobian_.reserve(size * size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) jacobian_.push_back(differentiate(equations_[i], j));
}

SystemDefinition SystemDefinition::from_parts(std::vector<std::string> names,
                                              std::vector<Expression> equations,
                                              std::vector<double> lower,
                                              std::vector<double> upper,
                                              std::vector<Expression> jacobian) {
  SystemDefinition sys;
  sys.names_ = std::move(names);
  sys.equations_ = std::move(equations);
  sys.lower_ = std::move(lower);
  sys.upper_ = std::move(upper);
  sys.jacobian_ = std::move(jacobian);
  sys.validate();
  if (sys.jacobian_.size() != sys.n() * sys.n())
    throw std::invalid_argument("system: jacobian must be n x n");
  return sys;
}

void SystemDefinition::validate() const {
  const std::size_t size = equations_.size();
  if (size == 0) throw std::invalid_argument("system: no equations");
  if (names_.size() != size)
    throw std::invalid_argument("system: " + std::to_string(names_.size()) + " variables for " +
                                std::to_string(size) + " equations");
  if (lower_.size() != size || upper_.size() != size)
    throw std::invalid_argument("system: bounds must have one entry per variable");
  for (std::size_t j = 0; j < size; ++j)
    if (!(lower_[j] <= upper_[j]) || !std::isfinite(lower_[j]) || !std::isfinite(upper_[j]))
      throw std::invalid_argument("system: invalid bounds for " + names_[j]);
  for (const Expression& e : equations_)
    if (e.variable_extent() > size)
      throw std::invalid_argument("system: equation references an unknown variable");
}

SystemDefinition SystemDefinition::with_box(std::vector<double> lower,
                                            std::vector<double> upper) const {
  return from_parts(names_, equations_, std::move(lower), std::move(upper), jacobian_);
}

std::vector<double> SystemDefinition::residual(std::span<const double> x) const {
  std::vector<double> f;
  f.reserve(n());
  for (const Expression& e : equations_) f.push_back(e.evaluate(x));
  return f;
}

double SystemDefinition::residual_norm(std::span<const double> x) const {
  return max_norm(residual(x));
}

bool SystemDefinition::in_box(std::span<const double> x, double slack) const {
  for (std::size_t j = 0; j < n(); ++j)
    if (!(x[j] >= lower_[j] - slack && x[j] <= upper_[j] + slack)) return false;
  return true;
}

}  // namespace curvetrace
