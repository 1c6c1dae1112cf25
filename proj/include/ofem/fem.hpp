#pragma once

#include "ofem/hermite.hpp"
#include "ofem/mesh.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace ofem
{
/// Maps a reference jet of v-hat to the physical jet of v = v-hat o F_K^{-1}.
/// Throws SingularJacobian if |det DF_K| < 1e-14.
Jet pushforward(const MapJet &map, const Jet &reference);

/// Physical value, gradient and Hessian of sum_i coeffs(i) phi-hat_i o F^{-1}
/// at F(xhat).
Jet physical_eval(const ElementMap &map, const LocalVector &coeffs,
                  const Vec2 &xhat);

/// C_K: physical dofs (vertex values, physical gradients, centroid value) to
/// reference-basis coefficients.
LocalMatrix dof_transform(const ElementMap &map);

/// Smooth field evaluated as a jet at a physical point.
using FieldJet = std::function<Jet(const Vec2 &)>;

enum class DofKind
{
  value,
  derivative
};

struct DofInfo
{
  DofKind kind;
  /// Vertex id for vertex dofs, -1 for the shared oblique constant and for
  /// centroid dofs (see `element`).
  int vertex = -1;
  /// Owning triangle of a centroid dof, otherwise -1.
  int element = -1;
  /// Triangles whose closure contains the node.
  std::vector<int> star;
};

/// Global C0 cubic Hermite space on a curved mesh, optionally constrained so
/// that grad v . l takes one shared value c at all boundary vertices.
///
/// Numbering: vertex dofs in vertex order (interior or unconstrained vertex:
/// value, d1, d2; constrained boundary vertex: value, t), then the shared
/// constant c (constrained only), then one centroid value per triangle.
class DofMap
{
public:
  using ElementTransform = Eigen::Matrix<double, hermite::n_dofs, Eigen::Dynamic>;

  DofMap(std::shared_ptr<const CurvedMesh> mesh, ObliqueField field,
         bool constrained);

  const CurvedMesh &mesh() const { return *mesh_; }
  std::shared_ptr<const CurvedMesh> mesh_ptr() const { return mesh_; }
  const ObliqueField &field() const { return field_; }
  bool constrained() const { return constrained_; }
  int n_dofs() const { return static_cast<int>(dofs_.size()); }
  const DofInfo &dof(int i) const { return dofs_[i]; }

  /// Index of the shared oblique constant, -1 if unconstrained.
  int c_dof() const { return c_dof_; }
  int value_dof(int vertex) const { return vertex_first_[vertex]; }
  /// Gradient dof j in {0, 1}; unavailable at constrained boundary vertices.
  int gradient_dof(int vertex, int j) const;
  /// Coefficient of l-perp at a constrained boundary vertex, else -1.
  int tangential_dof(int vertex) const;
  int centroid_dof(int triangle) const { return centroid_first_ + triangle; }

  /// Field sample at a boundary vertex (l, dl/ds, theta_dot).
  const ObliqueSample &vertex_field(int vertex) const;

  const ElementMap &map(int k) const { return maps_[k]; }
  const std::vector<int> &element_dofs(int k) const { return element_dofs_[k]; }
  /// M_K: reference coefficients = M_K * U restricted to element_dofs(k).
  const ElementTransform &element_transform(int k) const
  {
    return transforms_[k];
  }

  LocalVector reference_coefficients(int k, const Eigen::VectorXd &u) const;
  /// Physical jet of the member u at F_K(xhat).
  Jet eval(int k, const Eigen::VectorXd &u, const Vec2 &xhat) const;

  /// Physical jets at F_K(xhat) of the global basis functions listed in
  /// element_dofs(k), plus the map jet at xhat.
  void element_basis(int k, const Vec2 &xhat, std::vector<Jet> &out,
                     MapJet &map_jet) const;

private:
  std::shared_ptr<const CurvedMesh> mesh_;
  ObliqueField field_;
  bool constrained_;
  std::vector<DofInfo> dofs_;
  std::vector<int> vertex_first_;
  std::vector<ObliqueSample> vertex_field_;
  int c_dof_ = -1;
  int centroid_first_ = 0;
  std::vector<ElementMap> maps_;
  std::vector<std::vector<int>> element_dofs_;
  std::vector<ElementTransform> transforms_;
};

DofMap build_space(std::shared_ptr<const CurvedMesh> mesh, ObliqueField field,
                   bool constrained);

/// Hermite interpolation: vertex values and gradients, centroid values at
/// F_K(centroid-hat). For a constrained space the shared constant is `c` if
/// given, otherwise the mean of grad u . l over the boundary vertices, and
/// each t_i = grad u(a_i) . l-perp(a_i).
Eigen::VectorXd interpolate(const DofMap &space, const FieldJet &u,
                            std::optional<double> c = std::nullopt);

/// Physical centroid of triangle k, F_K(1/3, 1/3).
Vec2 centroid_point(const DofMap &space, int k);

/// Both sides of the Poincare-type bound on a curved element with curved
/// edge F: ||u||^2_K <= 2 (1 + c_K)^2 (h_K ||u||^2_F + h_K^2 |u|^2_{H1(K)}).
struct PoincareTerms
{
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs <= rhs; }
};

PoincareTerms poincare_terms(const ElementMap &map, const BoundaryCurve &curve,
                             const FieldJet &u, int degree = 14, int edge_points = 12);

} // namespace ofem
