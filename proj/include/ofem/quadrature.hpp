#pragma once

#include "ofem/common.hpp"

#include <vector>

namespace ofem
{
/// Quadrature on the reference triangle {x1, x2 >= 0, x1 + x2 <= 1}.
/// Weights sum to 1/2.
struct TriangleRule
{
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

/// Quadrature on [0, 1]. Weights sum to 1.
struct IntervalRule
{
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

/// Symmetric positive interior rule exact to at least `degree`.
/// Supported: degree <= 14. Throws UnsupportedDegree otherwise.
const TriangleRule &triangle_quadrature(int degree);

/// n-point Gauss-Legendre rule on [0, 1] (exact to degree 2n - 1).
IntervalRule interval_quadrature(int n);

} // namespace ofem
