#pragma once

#include "ofem/common.hpp"

#include <array>

namespace ofem
{
/// Local dof layout shared by the reference and physical cubic Hermite
/// element: for vertex a = 0, 1, 2 the dofs 3a, 3a+1, 3a+2 are the value and
/// the two partial derivatives; dof 9 is the value at the centroid.
namespace hermite
{
constexpr int n_dofs = 10;
constexpr int centroid_dof = 9;
constexpr int value_dof(int vertex) { return 3 * vertex; }
constexpr int grad_dof(int vertex, int component)
{
  return 3 * vertex + 1 + component;
}

/// Reference vertices (0,0), (1,0), (0,1).
Vec2 reference_vertex(int a);
inline Vec2 reference_centroid() { return Vec2(1.0 / 3.0, 1.0 / 3.0); }
} // namespace hermite

using BasisJets = std::array<Jet, hermite::n_dofs>;
using LocalVector = Eigen::Matrix<double, hermite::n_dofs, 1>;
using LocalMatrix = Eigen::Matrix<double, hermite::n_dofs, hermite::n_dofs>;

/// P3 Hermite element on the reference triangle, defined by duality against
/// the ten reference dof functionals.
class ReferenceHermite
{
public:
  static const ReferenceHermite &instance();

  /// Value, gradient and Hessian of all ten basis functions at `p`.
  BasisJets eval(const Vec2 &p) const;

  /// Applies the ten dof functionals to the field whose jets are supplied at
  /// the three vertices and the centroid.
  static LocalVector dofs_of(const std::array<Jet, 3> &vertex_jets,
                             double centroid_value);

  /// Monomial coefficient matrix: phi_k = sum_j coeff(j, k) m_j with the
  /// monomials 1, x, y, x^2, xy, y^2, x^3, x^2 y, x y^2, y^3.
  const LocalMatrix &monomial_coefficients() const { return coeff_; }

private:
  ReferenceHermite();
  LocalMatrix coeff_;
};

/// Jets of the ten monomials of total degree <= 3 at `p`.
BasisJets monomial_jets(const Vec2 &p);

} // namespace ofem
