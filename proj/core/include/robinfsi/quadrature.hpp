#pragma once

#include <vector>

#include "robinfsi/vec.hpp"

namespace robinfsi {

/// Quadrature on the reference triangle (0,0)-(1,0)-(0,1); weights sum to 1/2.
struct TriRule {
  int degree = 0;  // exactness degree
  std::vector<Vec2> points;
  std::vector<double> weights;
};

/// Quadrature on the reference edge [0,1]; weights sum to 1.
struct EdgeRule {
  int degree = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

/// Smallest committed rule whose exactness degree is >= min_degree.
/// Available triangle degrees: 1, 2, 4, 5, 6. Edge degrees: 1, 3, 5, 7.
const TriRule& tri_rule(int min_degree);
const EdgeRule& edge_rule(int min_degree);

}  // namespace robinfsi
