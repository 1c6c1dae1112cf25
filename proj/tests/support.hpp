#pragma once

#include "ofem/fem.hpp"

#include <memory>
#include <random>

namespace ofem::test
{
inline std::shared_ptr<const CurvedMesh> disk_mesh(int level)
{
  return std::make_shared<const CurvedMesh>(
      mesh_at_level(BoundaryCurve::unit_circle(), 6, level));
}

inline std::shared_ptr<const CurvedMesh> ellipse_mesh(int level)
{
  return std::make_shared<const CurvedMesh>(
      mesh_at_level(BoundaryCurve::ellipse(2.0, 1.0), 8, level));
}

/// Uniform [-1, 1] coefficients.
inline Eigen::VectorXd random_member(const DofMap &space, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd u(space.n_dofs());
  for (int i = 0; i < space.n_dofs(); ++i)
    u(i) = d(rng);
  return u;
}

/// Global polynomial with its jet.
inline Jet quadratic_jet(const Vec2 &x)
{
  // q = x1 x2 + 0.3 x1^2 - 0.7 x2 + 0.2
  Jet j;
  j.value = x.x() * x.y() + 0.3 * x.x() * x.x() - 0.7 * x.y() + 0.2;
  j.grad = Vec2(x.y() + 0.6 * x.x(), x.x() - 0.7);
  j.hess << 0.6, 1.0, 1.0, 0.0;
  return j;
}

/// Full cubic x1^3 - 2 x1^2 x2 + 0.5 x2^3 + x1 x2 - x2 + 1.
inline FieldJet cubic_jet()
{
  return [](const Vec2 &x) {
    const double a = x.x(), b = x.y();
    Jet j;
    j.value = a * a * a - 2 * a * a * b + 0.5 * b * b * b + a * b - b + 1;
    j.grad = Vec2(3 * a * a - 4 * a * b + b, -2 * a * a + 1.5 * b * b + a - 1);
    j.hess << 6 * a - 4 * b, -4 * a + 1, -4 * a + 1, 3 * b;
    return j;
  };
}
} // namespace ofem::test
