#pragma once

#include "ofem/geometry.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ofem
{
/// Position, Jacobian and component Hessians of an element map at a point.
struct MapJet
{
  Vec2 x;
  Mat2 jac;
  /// hess[a] is the Hessian of the a-th component of F_K.
  std::array<Mat2, 2> hess;
};

/// F_K = B_K xhat + b_K + Phi_K on the reference triangle (0,0), (1,0), (0,1).
///
/// Local vertex 0 is opposite the (optional) curved edge; the curved edge
/// runs from local vertex 1 = x(t_a) to local vertex 2 = x(t_b). With
/// barycentrics l1 = 1 - x1 - x2, l2 = x1, l3 = x2 the blending is
///
///   Phi_K = l2 l3 g(s),  s = (1 + l3 - l2) / 2,  g(s) = d(s) / (s (1 - s)),
///   d(s)  = x(t_a + s (t_b - t_a)) - (1 - s) P2 - s P3.
///
/// Phi_K vanishes on both straight edges and reproduces the curve on the
/// curved edge. g is held as a polynomial in u = s - 1/2 obtained from the
/// Taylor series of x about the edge midpoint.
class ElementMap
{
public:
  explicit ElementMap(const std::array<Vec2, 3> &vertices);
  ElementMap(const std::array<Vec2, 3> &vertices, const BoundaryCurve &curve,
             double ta, double tb);

  bool curved() const { return !blend_.empty(); }
  const std::array<Vec2, 3> &vertices() const { return vertices_; }
  const Mat2 &affine_matrix() const { return b_mat_; }
  const Vec2 &offset() const { return vertices_[0]; }
  double t_a() const { return ta_; }
  double t_b() const { return tb_; }

  Vec2 map(const Vec2 &xhat) const;
  MapJet eval(const Vec2 &xhat) const;
  /// D Phi_K at xhat (zero for straight elements).
  Mat2 blend_jacobian(const Vec2 &xhat) const;
  /// max over component c and multi-index |alpha| = order of
  /// |d^alpha (F_K)_c| at xhat, for order >= 2.
  double blend_derivative_max(const Vec2 &xhat, int order) const;

  /// Diameter of the straight triangle.
  double h() const { return h_; }
  /// Diameter of the inscribed circle of the straight triangle.
  double rho() const { return rho_; }
  /// Sampled sup of ||D Phi_K B_K^{-1}||_2.
  double c_k() const { return c_k_; }

private:
  void blend_jets(const Vec2 &xhat, int max_order,
                  std::array<Vec2, 5> &g_derivs) const;
  void finish_setup();

  std::array<Vec2, 3> vertices_;
  Mat2 b_mat_;
  Mat2 b_inv_;
  double ta_ = 0.0;
  double tb_ = 0.0;
  std::vector<Vec2> blend_; // coefficients of g in powers of u
  double h_ = 0.0;
  double rho_ = 0.0;
  double c_k_ = 0.0;
};

/// Sampled sup of ||D Phi_K B_K^{-1}|| over the 66-point order-10 lattice.
double estimate_cK(const ElementMap &map);

/// The 66 points of the order-10 principal lattice of the reference triangle.
const std::vector<Vec2> &ck_sample_points();

struct MeshVertex
{
  Vec2 x;
  /// Curve parameter, present exactly for boundary vertices.
  std::optional<double> t;
};

struct MeshTriangle
{
  /// Anticlockwise vertex ids. If curved, the curved edge is (v[1], v[2]).
  std::array<int, 3> v;
  /// Parameter interval [t_a, t_b] of the curved edge, if any.
  std::optional<std::array<double, 2>> curved;
};

struct MeshEdge
{
  /// Interior edges: ascending ids (tangent from lower to higher id).
  /// Boundary edges: anticlockwise, v[0] = x(t_a), v[1] = x(t_b).
  std::array<int, 2> v{-1, -1};
  std::array<int, 2> tri{-1, -1};
  bool boundary = false;
  double ta = 0.0;
  double tb = 0.0;
};

/// Exact conforming triangulation of the region bounded by a curve.
class CurvedMesh
{
public:
  CurvedMesh(BoundaryCurve curve, std::vector<MeshVertex> vertices,
             std::vector<MeshTriangle> triangles, int level = 0);

  const BoundaryCurve &curve() const { return curve_; }
  int level() const { return level_; }
  const std::vector<MeshVertex> &vertices() const { return vertices_; }
  const std::vector<MeshTriangle> &triangles() const { return triangles_; }
  const std::vector<MeshEdge> &edges() const { return edges_; }
  std::size_t n_vertices() const { return vertices_.size(); }
  std::size_t n_triangles() const { return triangles_.size(); }
  std::size_t n_edges() const { return edges_.size(); }
  std::size_t n_boundary_vertices() const;
  bool is_boundary_vertex(int v) const { return vertices_[v].t.has_value(); }

  /// Edge id opposite local vertex i of triangle k.
  int triangle_edge(int k, int i) const { return tri_edges_[k][i]; }
  /// Triangles whose closure contains vertex v, ascending.
  const std::vector<int> &vertex_star(int v) const { return vertex_star_[v]; }
  /// Local index of vertex v in triangle k, or -1.
  int local_index(int k, int v) const;

  /// Element map of triangle k (no c_K check).
  ElementMap map(int k) const;

private:
  void build_topology();

  BoundaryCurve curve_;
  std::vector<MeshVertex> vertices_;
  std::vector<MeshTriangle> triangles_;
  std::vector<MeshEdge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::vector<int>> vertex_star_;
  int level_;
};

/// Fan mesh: centroid of the boundary sample plus n_boundary boundary
/// vertices at uniform parameters. Throws InvalidCoarseMesh if some c_K >= 1.
CurvedMesh coarse_mesh(const BoundaryCurve &curve, int n_boundary);

/// Red refinement; boundary midpoints at the parameter midpoint.
/// Throws CKViolation if a refined element has c_K >= 1.
CurvedMesh refine(const CurvedMesh &mesh);

/// coarse_mesh followed by `level` refinements.
CurvedMesh mesh_at_level(const BoundaryCurve &curve, int n_boundary, int level);

/// Element map of triangle k. Throws CKViolation if c_K >= 1.
ElementMap element_map(const CurvedMesh &mesh, int k);

struct MeshDiagnostics
{
  std::vector<std::string> violations;
  double sigma = 0.0; // max h_K / rho_K
  double max_ck = 0.0;
  double max_h = 0.0;
  double min_h = 0.0;
  /// Sampled c_i(K) = |F_K|_{W^i_inf} ||B_K||^{-i}, i = 2, 3, 4 (max over K).
  std::array<double, 3> regularity{0.0, 0.0, 0.0};

  bool ok() const { return violations.empty(); }
};

MeshDiagnostics validate(const CurvedMesh &mesh);

/// Plain-text dump: `v x y [t]`, `t i j k [curved_edge]`,
/// `e i j interior|boundary [ta tb]`, 17 significant digits.
void write_mesh(std::ostream &os, const CurvedMesh &mesh);

} // namespace ofem
