#include "ofem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace ofem
{
namespace
{
double factorial(int n)
{
  double f = 1.0;
  for (int i = 2; i <= n; ++i)
    f *= i;
  return f;
}

// Coefficients of g(u), u = s - 1/2, for the chord defect of x on [ta, tb].
//
// With c_k = x^(k)(tm) dt^k / k!, d(u) = sum_{k>=2} c_k p_k(u) where
// p_k(u) = u^k - 2^-k (k even) or u^k - u 2^(1-k) (k odd). Each p_k equals
// (u^2 - 1/4) q_k(u), and s (1 - s) = 1/4 - u^2, so g = -sum c_k q_k.
std::vector<Vec2> chord_defect_polynomial(const BoundaryCurve &curve, double ta,
                                          double tb)
{
  const double tm = 0.5 * (ta + tb);
  const double dt = tb - ta;
  const double scale = std::max(curve.semi_axis_a(), curve.semi_axis_b());
  std::vector<Vec2> ck;
  ck.push_back(Vec2::Zero());
  ck.push_back(Vec2::Zero());
  for (int k = 2; k < 80; ++k)
  {
    const double mag = std::pow(dt, k) / factorial(k);
    ck.push_back(curve.derivative(tm, k) * mag);
    if (k > 4 && std::abs(mag) * scale < 1e-22)
      break;
  }
  const int kmax = static_cast<int>(ck.size()) - 1;
  std::vector<Vec2> g(std::max(1, kmax - 1), Vec2::Zero());
  for (int k = 2; k <= kmax; ++k)
  {
    const int m = k / 2;
    const int odd = k % 2;
    for (int j = 0; j < m; ++j)
    {
      const double w = std::pow(0.25, m - 1 - j);
      g[2 * j + odd] -= w * ck[k];
    }
  }
  return g;
}

// m-th derivative of the vector polynomial sum p_n u^n.
Vec2 poly_derivative(const std::vector<Vec2> &p, double u, int m)
{
  Vec2 acc = Vec2::Zero();
  for (int n = static_cast<int>(p.size()) - 1; n >= m; --n)
  {
    double f = 1.0;
    for (int i = 0; i < m; ++i)
      f *= (n - i);
    acc = acc * u + f * p[n];
  }
  return acc;
}

double spectral_norm(const Mat2 &m)
{
  Eigen::JacobiSVD<Mat2> svd(m);
  return svd.singularValues()(0);
}
} // namespace

const std::vector<Vec2> &ck_sample_points()
{
  static const std::vector<Vec2> pts = [] {
    std::vector<Vec2> p;
    for (int i = 0; i <= 10; ++i)
      for (int j = 0; i + j <= 10; ++j)
        p.emplace_back(i / 10.0, j / 10.0);
    return p;
  }();
  return pts;
}

ElementMap::ElementMap(const std::array<Vec2, 3> &vertices)
    : vertices_(vertices)
{
  finish_setup();
}

ElementMap::ElementMap(const std::array<Vec2, 3> &vertices,
                       const BoundaryCurve &curve, double ta, double tb)
    : vertices_(vertices), ta_(ta), tb_(tb)
{
  blend_ = chord_defect_polynomial(curve, ta, tb);
  finish_setup();
}

void ElementMap::finish_setup()
{
  b_mat_.col(0) = vertices_[1] - vertices_[0];
  b_mat_.col(1) = vertices_[2] - vertices_[0];
  const double det = b_mat_.determinant();
  b_inv_ = std::abs(det) > 0.0 ? Mat2(b_mat_.inverse()) : Mat2::Zero();
  const double e0 = (vertices_[1] - vertices_[2]).norm();
  const double e1 = (vertices_[2] - vertices_[0]).norm();
  const double e2 = (vertices_[0] - vertices_[1]).norm();
  h_ = std::max({e0, e1, e2});
  rho_ = 2.0 * std::abs(det) / (e0 + e1 + e2);
  c_k_ = estimate_cK(*this);
}

// g and its u-derivatives up to max_order at the point's u.
void ElementMap::blend_jets(const Vec2 &xhat, int max_order,
                           std::array<Vec2, 5> &g_derivs) const
{
  const double u = 0.5 * (xhat.y() - xhat.x());
  for (int m = 0; m <= max_order; ++m)
    g_derivs[m] = poly_derivative(blend_, u, m);
}

Vec2 ElementMap::map(const Vec2 &xhat) const
{
  Vec2 x = vertices_[0] + b_mat_ * xhat;
  if (curved())
  {
    std::array<Vec2, 5> g;
    blend_jets(xhat, 0, g);
    x += xhat.x() * xhat.y() * g[0];
  }
  return x;
}

Mat2 ElementMap::blend_jacobian(const Vec2 &xhat) const
{
  if (!curved())
    return Mat2::Zero();
  std::array<Vec2, 5> g;
  blend_jets(xhat, 1, g);
  const double p = xhat.x() * xhat.y();
  const Vec2 dp(xhat.y(), xhat.x());
  const Vec2 du(-0.5, 0.5);
  Mat2 d;
  for (int j = 0; j < 2; ++j)
    d.col(j) = dp(j) * g[0] + p * du(j) * g[1];
  return d;
}

MapJet ElementMap::eval(const Vec2 &xhat) const
{
  MapJet jet;
  jet.x = vertices_[0] + b_mat_ * xhat;
  jet.jac = b_mat_;
  jet.hess = {Mat2::Zero(), Mat2::Zero()};
  if (!curved())
    return jet;

  std::array<Vec2, 5> g;
  blend_jets(xhat, 2, g);
  // Phi = p G(u), p = x1 x2, u = (x2 - x1)/2.
  const double p = xhat.x() * xhat.y();
  const Vec2 dp(xhat.y(), xhat.x());
  Mat2 ddp;
  ddp << 0.0, 1.0, 1.0, 0.0;
  const Vec2 du(-0.5, 0.5);

  jet.x += p * g[0];
  for (int j = 0; j < 2; ++j)
    jet.jac.col(j) += dp(j) * g[0] + p * du(j) * g[1];
  for (int c = 0; c < 2; ++c)
  {
    Mat2 h;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        h(j, k) = ddp(j, k) * g[0](c) + (dp(j) * du(k) + dp(k) * du(j)) * g[1](c) +
                  p * du(j) * du(k) * g[2](c);
    jet.hess[c] = h;
  }
  return jet;
}

double ElementMap::blend_derivative_max(const Vec2 &xhat, int order) const
{
  if (!curved() || order < 2)
    return 0.0;
  std::array<Vec2, 5> g;
  blend_jets(xhat, std::min(order, 4), g);
  const double x1 = xhat.x();
  const double x2 = xhat.y();
  const double p = x1 * x2;
  double best = 0.0;
  // alpha = (a1, a2), a1 + a2 = order; d^alpha G = G^(order) (-1/2)^a1 (1/2)^a2.
  auto dG = [&](int a1, int a2) -> Vec2 {
    if (a1 < 0 || a2 < 0)
      return Vec2::Zero();
    const int m = a1 + a2;
    if (m > 4)
      return Vec2::Zero();
    return g[m] * std::pow(-0.5, a1) * std::pow(0.5, a2);
  };
  for (int a1 = 0; a1 <= order; ++a1)
  {
    const int a2 = order - a1;
    // Leibniz with d1 p = x2, d2 p = x1, d12 p = 1.
    const Vec2 v = p * dG(a1, a2) + a1 * x2 * dG(a1 - 1, a2) +
                   a2 * x1 * dG(a1, a2 - 1) +
                   double(a1 * a2) * dG(a1 - 1, a2 - 1);
    best = std::max(best, v.cwiseAbs().maxCoeff());
  }
  return best;
}

double estimate_cK(const ElementMap &map)
{
  if (!map.curved())
    return 0.0;
  Mat2 binv = map.affine_matrix().inverse();
  double best = 0.0;
  for (const Vec2 &p : ck_sample_points())
    best = std::max(best, spectral_norm(map.blend_jacobian(p) * binv));
  return best;
}

CurvedMesh::CurvedMesh(BoundaryCurve curve, std::vector<MeshVertex> vertices,
                       std::vector<MeshTriangle> triangles, int level)
    : curve_(curve), vertices_(std::move(vertices)),
      triangles_(std::move(triangles)), level_(level)
{
  build_topology();
}

void CurvedMesh::build_topology()
{
  std::map<std::pair<int, int>, int> lookup;
  tri_edges_.assign(triangles_.size(), {-1, -1, -1});
  vertex_star_.assign(vertices_.size(), {});
  for (int k = 0; k < static_cast<int>(triangles_.size()); ++k)
  {
    const MeshTriangle &tri = triangles_[k];
    for (int i = 0; i < 3; ++i)
    {
      vertex_star_[tri.v[i]].push_back(k);
      const int a = tri.v[(i + 1) % 3];
      const int b = tri.v[(i + 2) % 3];
      const auto key = std::minmax(a, b);
      auto it = lookup.find({key.first, key.second});
      int id;
      if (it == lookup.end())
      {
        id = static_cast<int>(edges_.size());
        lookup.emplace(std::pair{key.first, key.second}, id);
        MeshEdge e;
        e.v = {key.first, key.second};
        e.tri = {k, -1};
        edges_.push_back(e);
      }
      else
      {
        id = it->second;
        if (edges_[id].tri[1] == -1)
          edges_[id].tri[1] = k;
        else
          edges_[id].tri[1] = -2; // more than two triangles; flagged by validate
      }
      tri_edges_[k][i] = id;
      if (i == 0 && tri.curved)
      {
        MeshEdge &e = edges_[id];
        e.boundary = true;
        e.v = {a, b};
        e.ta = (*tri.curved)[0];
        e.tb = (*tri.curved)[1];
      }
    }
  }
  for (auto &star : vertex_star_)
    std::sort(star.begin(), star.end());
}

std::size_t CurvedMesh::n_boundary_vertices() const
{
  return std::count_if(vertices_.begin(), vertices_.end(),
                       [](const MeshVertex &v) { return v.t.has_value(); });
}

int CurvedMesh::local_index(int k, int v) const
{
  for (int i = 0; i < 3; ++i)
    if (triangles_[k].v[i] == v)
      return i;
  return -1;
}

ElementMap CurvedMesh::map(int k) const
{
  const MeshTriangle &tri = triangles_[k];
  const std::array<Vec2, 3> p{vertices_[tri.v[0]].x, vertices_[tri.v[1]].x,
                              vertices_[tri.v[2]].x};
  if (tri.curved)
    return ElementMap(p, curve_, (*tri.curved)[0], (*tri.curved)[1]);
  return ElementMap(p);
}

ElementMap element_map(const CurvedMesh &mesh, int k)
{
  ElementMap m = mesh.map(k);
  if (!(m.c_k() < 1.0))
    throw CKViolation("triangle " + std::to_string(k) + " has c_K = " +
                      std::to_string(m.c_k()));
  return m;
}

CurvedMesh coarse_mesh(const BoundaryCurve &curve, int n_boundary)
{
  if (n_boundary < 3)
    throw InvalidCoarseMesh("need at least 3 boundary vertices");
  const double period = curve.period();
  std::vector<MeshVertex> verts;
  Vec2 centre = Vec2::Zero();
  for (int i = 0; i < n_boundary; ++i)
    centre += curve.point(period * i / n_boundary);
  centre /= n_boundary;
  verts.push_back({centre, std::nullopt});
  for (int i = 0; i < n_boundary; ++i)
  {
    const double t = period * i / n_boundary;
    verts.push_back({curve.point(t), t});
  }
  std::vector<MeshTriangle> tris;
  for (int i = 0; i < n_boundary; ++i)
  {
    const double ta = period * i / n_boundary;
    const double tb = i + 1 == n_boundary ? period : period * (i + 1) / n_boundary;
    tris.push_back({{0, i + 1, (i + 1) % n_boundary + 1},
                    std::array<double, 2>{ta, tb}});
  }
  CurvedMesh mesh(curve, std::move(verts), std::move(tris), 0);
  for (int k = 0; k < static_cast<int>(mesh.n_triangles()); ++k)
  {
    const double ck = mesh.map(k).c_k();
    if (!(ck < 1.0))
      throw InvalidCoarseMesh("coarse triangle " + std::to_string(k) +
                              " has c_K = " + std::to_string(ck));
  }
  return mesh;
}

CurvedMesh refine(const CurvedMesh &mesh)
{
  std::vector<MeshVertex> verts = mesh.vertices();
  std::vector<int> midpoint(mesh.n_edges());
  for (std::size_t e = 0; e < mesh.n_edges(); ++e)
  {
    const MeshEdge &edge = mesh.edges()[e];
    midpoint[e] = static_cast<int>(verts.size());
    if (edge.boundary)
    {
      const double t = 0.5 * (edge.ta + edge.tb);
      verts.push_back({mesh.curve().point(t), t});
    }
    else
    {
      verts.push_back(
          {0.5 * (mesh.vertices()[edge.v[0]].x + mesh.vertices()[edge.v[1]].x),
           std::nullopt});
    }
  }

  std::vector<MeshTriangle> tris;
  tris.reserve(4 * mesh.n_triangles());
  for (int k = 0; k < static_cast<int>(mesh.n_triangles()); ++k)
  {
    const MeshTriangle &t = mesh.triangles()[k];
    const int v0 = t.v[0], v1 = t.v[1], v2 = t.v[2];
    const int m0 = midpoint[mesh.triangle_edge(k, 0)];
    const int m1 = midpoint[mesh.triangle_edge(k, 1)];
    const int m2 = midpoint[mesh.triangle_edge(k, 2)];
    tris.push_back({{v0, m2, m1}, std::nullopt});
    tris.push_back({{m0, m1, m2}, std::nullopt});
    if (t.curved)
    {
      const double ta = (*t.curved)[0];
      const double tb = (*t.curved)[1];
      const double tm = 0.5 * (ta + tb);
      tris.push_back({{m2, v1, m0}, std::array<double, 2>{ta, tm}});
      tris.push_back({{m1, m0, v2}, std::array<double, 2>{tm, tb}});
    }
    else
    {
      tris.push_back({{v1, m0, m2}, std::nullopt});
      tris.push_back({{v2, m1, m0}, std::nullopt});
    }
  }
  CurvedMesh fine(mesh.curve(), std::move(verts), std::move(tris),
                  mesh.level() + 1);
  for (int k = 0; k < static_cast<int>(fine.n_triangles()); ++k)
    if (fine.triangles()[k].curved)
      element_map(fine, k);
  return fine;
}

CurvedMesh mesh_at_level(const BoundaryCurve &curve, int n_boundary, int level)
{
  CurvedMesh mesh = coarse_mesh(curve, n_boundary);
  for (int l = 0; l < level; ++l)
    mesh = refine(mesh);
  return mesh;
}

MeshDiagnostics validate(const CurvedMesh &mesh)
{
  MeshDiagnostics d;
  d.min_h = std::numeric_limits<double>::infinity();
  auto fail = [&d](std::string msg) { d.violations.push_back(std::move(msg)); };

  for (std::size_t e = 0; e < mesh.n_edges(); ++e)
  {
    const MeshEdge &edge = mesh.edges()[e];
    const std::string name = "edge " + std::to_string(e);
    if (edge.tri[1] == -2)
      fail(name + " shared by more than two triangles");
    else if (edge.boundary && edge.tri[1] != -1)
      fail(name + " is curved but shared by two triangles");
    else if (!edge.boundary && edge.tri[1] == -1)
      fail(name + " has one triangle but no boundary parametrization");
    if (edge.boundary &&
        (!mesh.is_boundary_vertex(edge.v[0]) || !mesh.is_boundary_vertex(edge.v[1])))
      fail(name + " is curved but an endpoint is not on the boundary");
  }

  // Boundary edges must tile [0, T) anticlockwise.
  std::vector<std::array<double, 2>> intervals;
  for (const MeshEdge &e : mesh.edges())
    if (e.boundary)
      intervals.push_back({e.ta, e.tb});
  std::sort(intervals.begin(), intervals.end());
  const double period = mesh.curve().period();
  if (intervals.empty())
    fail("no boundary edges");
  else
  {
    if (std::abs(intervals.front()[0]) > 1e-14)
      fail("boundary parametrization does not start at 0");
    if (std::abs(intervals.back()[1] - period) > 1e-12)
      fail("boundary parametrization does not end at T");
    for (std::size_t i = 0; i < intervals.size(); ++i)
    {
      if (!(intervals[i][1] > intervals[i][0]))
        fail("boundary edge with non-increasing parameters");
      if (i + 1 < intervals.size() &&
          std::abs(intervals[i][1] - intervals[i + 1][0]) > 1e-14)
        fail("gap in boundary parametrization at t = " +
             std::to_string(intervals[i][1]));
    }
  }

  for (int k = 0; k < static_cast<int>(mesh.n_triangles()); ++k)
  {
    const ElementMap m = mesh.map(k);
    const std::string name = "triangle " + std::to_string(k);
    if (!(m.affine_matrix().determinant() > 0.0))
      fail(name + " is not anticlockwise");
    if (!(m.c_k() < 1.0))
      fail(name + " has c_K = " + std::to_string(m.c_k()));
    d.max_ck = std::max(d.max_ck, m.c_k());
    d.max_h = std::max(d.max_h, m.h());
    d.min_h = std::min(d.min_h, m.h());
    if (m.rho() > 0.0)
      d.sigma = std::max(d.sigma, m.h() / m.rho());
    if (m.curved())
    {
      const Eigen::JacobiSVD<Mat2> svd(m.affine_matrix());
      const double bnorm = svd.singularValues()(0);
      for (int i = 2; i <= 4; ++i)
      {
        double wi = 0.0;
        for (const Vec2 &p : ck_sample_points())
          wi = std::max(wi, m.blend_derivative_max(p, i));
        d.regularity[i - 2] = std::max(d.regularity[i - 2], wi / std::pow(bnorm, i));
      }
    }
  }
  return d;
}

void write_mesh(std::ostream &os, const CurvedMesh &mesh)
{
  char buf[256];
  for (const MeshVertex &v : mesh.vertices())
  {
    if (v.t)
      std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x.x(), v.x.y(), *v.t);
    else
      std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", v.x.x(), v.x.y());
    os << buf;
  }
  for (const MeshTriangle &t : mesh.triangles())
  {
    if (t.curved)
      std::snprintf(buf, sizeof buf, "t %d %d %d 0\n", t.v[0], t.v[1], t.v[2]);
    else
      std::snprintf(buf, sizeof buf, "t %d %d %d\n", t.v[0], t.v[1], t.v[2]);
    os << buf;
  }
  for (const MeshEdge &e : mesh.edges())
  {
    if (e.boundary)
      std::snprintf(buf, sizeof buf, "e %d %d boundary %.17g %.17g\n", e.v[0],
                    e.v[1], e.ta, e.tb);
    else
      std::snprintf(buf, sizeof buf, "e %d %d interior\n", e.v[0], e.v[1]);
    os << buf;
  }
}

} // namespace ofem
