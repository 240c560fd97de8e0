#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "curvetrace/driver.hpp"

namespace curvetrace::testing {

inline double inf_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

inline std::vector<std::vector<double>> points_of(const SolveReport& r) {
  std::vector<std::vector<double>> out;
  for (const SolutionRecord& s : r.solutions) out.push_back(s.x);
  return out;
}

struct Matching {
  std::size_t matched = 0;
  std::vector<std::vector<double>> unmatched_left;
  std::vector<std::vector<double>> unmatched_right;
  bool bijective() const { return unmatched_left.empty() && unmatched_right.empty(); }
};

// One-to-one pairing within tol: each point on one side is used at most
// once, nearest candidate first.
inline Matching match_sets(const std::vector<std::vector<double>>& left,
                           const std::vector<std::vector<double>>& right, double tol) {
  Matching m;
  std::vector<bool> used(right.size(), false);
  for (const auto& p : left) {
    std::size_t best = right.size();
    double best_d = tol;
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (used[j]) continue;
      const double d = inf_distance(p, right[j]);
      if (d <= best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == right.size()) {
      m.unmatched_left.push_back(p);
    } else {
      used[best] = true;
      ++m.matched;
    }
  }
  for (std::size_t j = 0; j < right.size(); ++j)
    if (!used[j]) m.unmatched_right.push_back(right[j]);
  return m;
}

// Greedy merge: a point joins the first kept point within tol. Needed where
// roots are multiple and Newton stalls at many nearby points.
inline std::vector<std::vector<double>> cluster(const std::vector<std::vector<double>>& pts,
                                                double tol) {
  std::vector<std::vector<double>> kept;
  for (const auto& p : pts) {
    bool near = false;
    for (const auto& q : kept) near = near || inf_distance(p, q) <= tol;
    if (!near) kept.push_back(p);
  }
  return kept;
}

// Roots of sin(x1^2 + 2 x2^2) = 0, tan(x1^2 - 2 x2^2) = 0 in [-2,2]^2:
// x1^2 = (k+m) pi/2 and x2^2 = (k-m) pi/4 for integers k >= 0, m.
inline std::vector<std::vector<double>> sin_tan_roots(double half_width) {
  std::vector<std::vector<double>> out;
  const double pi = std::acos(-1.0);
  for (int s = 0; s * pi / 2.0 <= half_width * half_width; ++s) {
    for (int d = 0; d * pi / 4.0 <= half_width * half_width; ++d) {
      if ((s + d) % 2 != 0) continue;
      const double a = std::sqrt(s * pi / 2.0);
      const double b = std::sqrt(d * pi / 4.0);
      for (double sa : {1.0, -1.0}) {
        if (a == 0.0 && sa < 0) continue;
        for (double sb : {1.0, -1.0}) {
          if (b == 0.0 && sb < 0) continue;
          out.push_back({sa * a, sb * b});
        }
      }
    }
  }
  return out;
}

}  // namespace curvetrace::testing
