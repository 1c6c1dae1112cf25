#include "ofem/fem.hpp"

#include "ofem/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace ofem
{
Jet pushforward(const MapJet &map, const Jet &reference)
{
  const double det = map.jac.determinant();
  if (!(std::abs(det) >= 1e-14))
    throw SingularJacobian("|det DF_K| = " + std::to_string(std::abs(det)));
  const Mat2 jinv = map.jac.inverse();
  Jet out;
  out.value = reference.value;
  out.grad = jinv.transpose() * reference.grad;
  const Mat2 h = reference.hess - out.grad(0) * map.hess[0] - out.grad(1) * map.hess[1];
  out.hess = jinv.transpose() * h * jinv;
  return out;
}

Jet physical_eval(const ElementMap &map, const LocalVector &coeffs, const Vec2 &xhat)
{
  const BasisJets phi = ReferenceHermite::instance().eval(xhat);
  Jet ref;
  for (int i = 0; i < hermite::n_dofs; ++i)
    ref += coeffs(i) * phi[i];
  return pushforward(map.eval(xhat), ref);
}

LocalMatrix dof_transform(const ElementMap &map)
{
  LocalMatrix c = LocalMatrix::Identity();
  for (int a = 0; a < 3; ++a)
  {
    const Mat2 j = map.eval(hermite::reference_vertex(a)).jac;
    if (!(std::abs(j.determinant()) >= 1e-14))
      throw SingularJacobian("singular DF_K at a vertex");
    c.block<2, 2>(hermite::grad_dof(a, 0), hermite::grad_dof(a, 0)) = j.transpose();
  }
  return c;
}

DofMap::DofMap(std::shared_ptr<const CurvedMesh> mesh, ObliqueField field,
               bool constrained)
    : mesh_(std::move(mesh)), field_(field), constrained_(constrained)
{
  const CurvedMesh &m = *mesh_;
  const int nv = static_cast<int>(m.n_vertices());
  const int nt = static_cast<int>(m.n_triangles());

  vertex_first_.resize(nv);
  vertex_field_.resize(nv);
  std::vector<int> boundary_star;
  for (int v = 0; v < nv; ++v)
  {
    vertex_first_[v] = n_dofs();
    const auto &star = m.vertex_star(v);
    const bool framed = constrained_ && m.is_boundary_vertex(v);
    dofs_.push_back({DofKind::value, v, -1, star});
    dofs_.push_back({DofKind::derivative, v, -1, star});
    if (!framed)
      dofs_.push_back({DofKind::derivative, v, -1, star});
    if (m.is_boundary_vertex(v))
    {
      vertex_field_[v] = field_.at(m.curve(), *m.vertices()[v].t);
      boundary_star.insert(boundary_star.end(), star.begin(), star.end());
    }
  }
  if (constrained_)
  {
    std::sort(boundary_star.begin(), boundary_star.end());
    boundary_star.erase(std::unique(boundary_star.begin(), boundary_star.end()),
                        boundary_star.end());
    c_dof_ = n_dofs();
    dofs_.push_back({DofKind::derivative, -1, -1, boundary_star});
  }
  centroid_first_ = n_dofs();
  for (int k = 0; k < nt; ++k)
    dofs_.push_back({DofKind::value, -1, k, {k}});

  maps_.reserve(nt);
  element_dofs_.resize(nt);
  transforms_.resize(nt);
  for (int k = 0; k < nt; ++k)
  {
    maps_.push_back(m.map(k));
    const MeshTriangle &tri = m.triangles()[k];

    // T_K: physical local dofs in terms of global dofs.
    std::vector<std::pair<int, Eigen::Matrix<double, hermite::n_dofs, 1>>> cols;
    auto column = [&cols](int g) -> Eigen::Matrix<double, hermite::n_dofs, 1> & {
      for (auto &c : cols)
        if (c.first == g)
          return c.second;
      cols.emplace_back(g, Eigen::Matrix<double, hermite::n_dofs, 1>::Zero());
      return cols.back().second;
    };
    for (int a = 0; a < 3; ++a)
    {
      const int v = tri.v[a];
      column(value_dof(v))(hermite::value_dof(a)) = 1.0;
      const int t = tangential_dof(v);
      if (t >= 0)
      {
        const Vec2 &l = vertex_field_[v].l;
        const Vec2 lp = perp(l);
        for (int j = 0; j < 2; ++j)
        {
          column(c_dof_)(hermite::grad_dof(a, j)) = l(j);
          column(t)(hermite::grad_dof(a, j)) = lp(j);
        }
      }
      else
      {
        for (int j = 0; j < 2; ++j)
          column(gradient_dof(v, j))(hermite::grad_dof(a, j)) = 1.0;
      }
    }
    column(centroid_dof(k))(hermite::centroid_dof) = 1.0;
    std::sort(cols.begin(), cols.end(),
              [](const auto &x, const auto &y) { return x.first < y.first; });

    const LocalMatrix ck = dof_transform(maps_[k]);
    ElementTransform tk(hermite::n_dofs, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
    {
      element_dofs_[k].push_back(cols[j].first);
      tk.col(static_cast<Eigen::Index>(j)) = cols[j].second;
    }
    transforms_[k] = ck * tk;
  }
}

int DofMap::gradient_dof(int vertex, int j) const
{
  if (tangential_dof(vertex) >= 0)
    return -1;
  return vertex_first_[vertex] + 1 + j;
}

int DofMap::tangential_dof(int vertex) const
{
  if (constrained_ && mesh_->is_boundary_vertex(vertex))
    return vertex_first_[vertex] + 1;
  return -1;
}

const ObliqueSample &DofMap::vertex_field(int vertex) const
{
  return vertex_field_[vertex];
}

LocalVector DofMap::reference_coefficients(int k, const Eigen::VectorXd &u) const
{
  const auto &ids = element_dofs_[k];
  Eigen::VectorXd local(ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j)
    local(static_cast<Eigen::Index>(j)) = u(ids[j]);
  return transforms_[k] * local;
}

Jet DofMap::eval(int k, const Eigen::VectorXd &u, const Vec2 &xhat) const
{
  return physical_eval(maps_[k], reference_coefficients(k, u), xhat);
}

void DofMap::element_basis(int k, const Vec2 &xhat, std::vector<Jet> &out,
                           MapJet &map_jet) const
{
  map_jet = maps_[k].eval(xhat);
  const BasisJets phi = ReferenceHermite::instance().eval(xhat);
  std::array<Jet, hermite::n_dofs> phys;
  for (int i = 0; i < hermite::n_dofs; ++i)
    phys[i] = pushforward(map_jet, phi[i]);
  const ElementTransform &mk = transforms_[k];
  out.assign(static_cast<std::size_t>(mk.cols()), Jet{});
  for (Eigen::Index j = 0; j < mk.cols(); ++j)
    for (int i = 0; i < hermite::n_dofs; ++i)
    {
      const double w = mk(i, j);
      if (w != 0.0)
        out[j] += w * phys[i];
    }
}

DofMap build_space(std::shared_ptr<const CurvedMesh> mesh, ObliqueField field,
                   bool constrained)
{
  return DofMap(std::move(mesh), field, constrained);
}

Vec2 centroid_point(const DofMap &space, int k)
{
  return space.map(k).map(hermite::reference_centroid());
}

Eigen::VectorXd interpolate(const DofMap &space, const FieldJet &u,
                            std::optional<double> c)
{
  const CurvedMesh &m = space.mesh();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_dofs());
  double c_sum = 0.0;
  int c_count = 0;
  for (int v = 0; v < static_cast<int>(m.n_vertices()); ++v)
  {
    const Jet j = u(m.vertices()[v].x);
    out(space.value_dof(v)) = j.value;
    const int t = space.tangential_dof(v);
    if (t >= 0)
    {
      const Vec2 &l = space.vertex_field(v).l;
      out(t) = j.grad.dot(perp(l));
      c_sum += j.grad.dot(l);
      ++c_count;
    }
    else
    {
      out(space.gradient_dof(v, 0)) = j.grad(0);
      out(space.gradient_dof(v, 1)) = j.grad(1);
    }
  }
  if (space.c_dof() >= 0)
    out(space.c_dof()) = c ? *c : (c_count ? c_sum / c_count : 0.0);
  for (int k = 0; k < static_cast<int>(m.n_triangles()); ++k)
    out(space.centroid_dof(k)) = u(centroid_point(space, k)).value;
  return out;
}

PoincareTerms poincare_terms(const ElementMap &map, const BoundaryCurve &curve,
                             const FieldJet &u, int degree, int edge_points)
{
  const TriangleRule &q = triangle_quadrature(degree);
  double l2 = 0.0, h1 = 0.0;
  for (std::size_t p = 0; p < q.size(); ++p)
  {
    const MapJet mj = map.eval(q.points[p]);
    const double w = q.weights[p] * std::abs(mj.jac.determinant());
    const Jet j = u(mj.x);
    l2 += w * j.value * j.value;
    h1 += w * j.grad.squaredNorm();
  }
  double edge = 0.0;
  if (map.curved())
  {
    const IntervalRule eq = interval_quadrature(edge_points);
    const double dt = map.t_b() - map.t_a();
    for (std::size_t p = 0; p < eq.size(); ++p)
    {
      const double t = map.t_a() + eq.points[p] * dt;
      const double v = u(curve.point(t)).value;
      edge += eq.weights[p] * curve.speed(t) * dt * v * v;
    }
  }
  const double h = map.h();
  const double k = 1.0 + map.c_k();
  return {l2, 2.0 * k * k * (h * edge + h * h * h1)};
}

} // namespace ofem
