#include "ofem/solver.hpp"

#include "ofem/quadrature.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ofem
{
namespace
{
using Lu = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

void factorize(Lu &lu, const SparseMatrix &m)
{
  lu.analyzePattern(m);
  lu.factorize(m);
  if (lu.info() != Eigen::Success)
    throw SingularSystem("sparse LU failed: " + lu.lastErrorMessage());
}

// Dof values of the reference polynomial with coefficients `c` at vertex a:
// value and physical gradient.
Jet vertex_jet(const ElementMap &map, const LocalVector &c, int a)
{
  Jet j;
  j.value = c(hermite::value_dof(a));
  const Vec2 gref(c(hermite::grad_dof(a, 0)), c(hermite::grad_dof(a, 1)));
  const Mat2 jac = map.eval(hermite::reference_vertex(a)).jac;
  j.grad = jac.transpose().inverse() * gref;
  return j;
}

Eigen::VectorXd averaged_projection(const DofMap &space,
                                    const std::function<double(const Vec2 &)> &u,
                                    std::optional<double> c_u)
{
  const CurvedMesh &mesh = space.mesh();
  const int nt = static_cast<int>(mesh.n_triangles());
  std::vector<LocalVector> q(nt);
  for (int k = 0; k < nt; ++k)
    q[k] = l2_project(space.map(k), u);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_dofs());
  double c_sum = 0.0;
  int c_count = 0;
  for (int v = 0; v < static_cast<int>(mesh.n_vertices()); ++v)
  {
    const auto &star = mesh.vertex_star(v);
    double value = 0.0;
    Vec2 grad = Vec2::Zero();
    for (int k : star)
    {
      const Jet j = vertex_jet(space.map(k), q[k], mesh.local_index(k, v));
      value += j.value;
      grad += j.grad;
    }
    value /= static_cast<double>(star.size());
    grad /= static_cast<double>(star.size());
    out(space.value_dof(v)) = value;
    const int t = space.tangential_dof(v);
    if (t >= 0)
    {
      const Vec2 &l = space.vertex_field(v).l;
      out(t) = grad.dot(perp(l));
      c_sum += grad.dot(l);
      ++c_count;
    }
    else
    {
      out(space.gradient_dof(v, 0)) = grad(0);
      out(space.gradient_dof(v, 1)) = grad(1);
    }
  }
  if (space.c_dof() >= 0)
    out(space.c_dof()) = c_u ? *c_u : (c_count ? c_sum / c_count : 0.0);
  for (int k = 0; k < nt; ++k)
    out(space.centroid_dof(k)) = q[k](hermite::centroid_dof);
  return out;
}
} // namespace

double boundary_constraint_defect(const DofMap &space, const Eigen::VectorXd &u,
                                  double c)
{
  const CurvedMesh &mesh = space.mesh();
  double worst = 0.0;
  for (int v = 0; v < static_cast<int>(mesh.n_vertices()); ++v)
  {
    if (!mesh.is_boundary_vertex(v))
      continue;
    const Vec2 &l = space.vertex_field(v).l;
    for (int k : mesh.vertex_star(v))
    {
      const Jet j = space.eval(k, u, hermite::reference_vertex(mesh.local_index(k, v)));
      worst = std::max(worst, std::abs(j.grad.dot(l) - c));
    }
  }
  return worst;
}

Solution solve(const AssembledSystem &system, const DofMap *space)
{
  Lu lu;
  factorize(lu, system.matrix);
  Eigen::VectorXd x = lu.solve(system.rhs);
  if (lu.info() != Eigen::Success)
    throw SingularSystem("sparse LU solve failed");
  // Two steps of iterative refinement against the assembled matrix.
  for (int it = 0; it < 2; ++it)
  {
    const Eigen::VectorXd r = system.rhs - system.matrix * x;
    x += lu.solve(r);
  }
  Solution s;
  const double bnorm = system.rhs.norm();
  const double rnorm = (system.matrix * x - system.rhs).norm();
  s.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (!std::isfinite(s.residual) || s.residual > 1e-10)
    throw SingularSystem("relative residual " + std::to_string(s.residual));
  s.fill = static_cast<long>(lu.nnzL() + lu.nnzU());
  s.u = x.head(system.n_dofs);
  s.multiplier = x(system.n_dofs);
  s.c_h = system.c_dof >= 0 ? s.u(system.c_dof) : 0.0;

  const double mean = system.mean.dot(s.u);
  if (std::abs(mean) > 1e-9 * system.mean.norm() * s.u.norm() && std::abs(mean) > 1e-300)
    throw SingularSystem("zero-mean condition violated: " + std::to_string(mean));
  if (space && space->constrained())
  {
    const double defect = boundary_constraint_defect(*space, s.u, s.c_h);
    if (defect > 1e-10 * std::max(1.0, std::abs(s.c_h)))
      throw SingularSystem("boundary constraint violated by " + std::to_string(defect));
  }
  return s;
}

ErrorNorms error_norms(const DofMap &space, const Eigen::VectorXd &u_h,
                       const FieldJet &exact, int degree)
{
  const TriangleRule &q = triangle_quadrature(degree);
  const int nt = static_cast<int>(space.mesh().n_triangles());
  struct Sample
  {
    double w;
    Jet e; // exact minus discrete
  };
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(nt) * q.size());
  double area = 0.0, mean_diff = 0.0;
  for (int k = 0; k < nt; ++k)
  {
    const LocalVector c = space.reference_coefficients(k, u_h);
    const ElementMap &map = space.map(k);
    for (std::size_t p = 0; p < q.size(); ++p)
    {
      const MapJet mj = map.eval(q.points[p]);
      const double w = q.weights[p] * std::abs(mj.jac.determinant());
      const Jet diff = exact(mj.x) - physical_eval(map, c, q.points[p]);
      samples.push_back({w, diff});
      area += w;
      mean_diff += w * diff.value;
    }
  }
  mean_diff /= area;
  ErrorNorms n;
  for (const Sample &s : samples)
  {
    const double v = s.e.value - mean_diff;
    n.l2 += s.w * v * v;
    n.h1 += s.w * s.e.grad.squaredNorm();
    n.h2 += s.w * s.e.hess.squaredNorm();
  }
  n.l2 = std::sqrt(n.l2);
  n.h1 = std::sqrt(n.h1);
  n.h2 = std::sqrt(n.h2);
  return n;
}

ErrorNorms error_norms(const Solution &solution, const ProblemSpec &problem,
                       const DofMap &space)
{
  if (!problem.exact)
    throw MissingExactSolution("problem has no exact solution");
  return error_norms(space, solution.u, problem.exact->u);
}

void ConvergenceReport::write_csv(std::ostream &os) const
{
  os << "h,l2,l2_order,h1,h1_order,h2,h2_order,c_h\n";
  char buf[256];
  for (const ConvergenceRow &r : rows)
  {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.h,
                  r.l2, r.l2_order, r.h1, r.h1_order, r.h2, r.h2_order, r.c_h);
    os << buf;
  }
}

std::vector<double> eoc(const std::vector<double> &h, const std::vector<double> &e)
{
  std::vector<double> order(e.size(), 0.0);
  for (std::size_t i = 1; i < e.size(); ++i)
    order[i] = std::log(e[i - 1] / e[i]) / std::log(h[i - 1] / h[i]);
  return order;
}

void compute_orders(ConvergenceReport &report)
{
  std::vector<double> h, l2, h1, h2;
  for (const auto &r : report.rows)
  {
    h.push_back(r.h);
    l2.push_back(r.l2);
    h1.push_back(r.h1);
    h2.push_back(r.h2);
  }
  const auto o0 = eoc(h, l2), o1 = eoc(h, h1), o2 = eoc(h, h2);
  for (std::size_t i = 0; i < report.rows.size(); ++i)
  {
    report.rows[i].l2_order = o0[i];
    report.rows[i].h1_order = o1[i];
    report.rows[i].h2_order = o2[i];
  }
}

LocalVector l2_project(const ElementMap &map, const std::function<double(const Vec2 &)> &u,
                       int degree)
{
  const TriangleRule &q = triangle_quadrature(degree);
  const ReferenceHermite &ref = ReferenceHermite::instance();
  LocalMatrix mass = LocalMatrix::Zero();
  LocalVector load = LocalVector::Zero();
  for (std::size_t p = 0; p < q.size(); ++p)
  {
    const BasisJets phi = ref.eval(q.points[p]);
    LocalVector v;
    for (int i = 0; i < hermite::n_dofs; ++i)
      v(i) = phi[i].value;
    mass += q.weights[p] * v * v.transpose();
    load += q.weights[p] * u(map.map(q.points[p])) * v;
  }
  return mass.ldlt().solve(load);
}

Eigen::VectorXd quasi_interp(const DofMap &space,
                             const std::function<double(const Vec2 &)> &u)
{
  return averaged_projection(space, u, std::nullopt);
}

Eigen::VectorXd quasi_interp_oblique(const DofMap &space,
                                     const std::function<double(const Vec2 &)> &u,
                                     double c_u)
{
  if (!space.constrained())
    throw ConfigError("oblique quasi-interpolation needs a constrained space");
  Eigen::VectorXd w = averaged_projection(space, u, c_u);
  const Eigen::VectorXd m = assemble_mean_vector(space);
  const Eigen::VectorXd one = constant_member(space, 1.0);
  w -= (m.dot(w) / m.dot(one)) * one;
  return w;
}

Eigen::VectorXd constant_member(const DofMap &space, double value)
{
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_dofs());
  for (int i = 0; i < space.n_dofs(); ++i)
    if (space.dof(i).kind == DofKind::value)
      out(i) = value;
  return out;
}

SparseMatrix assemble_norm_matrix(const DofMap &space, double chi0, int degree,
                                  int edge_points)
{
  const CurvedMesh &mesh = space.mesh();
  const TriangleRule &q = triangle_quadrature(degree);
  const IntervalRule eq = interval_quadrature(edge_points);
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<Jet> phi;
  MapJet mj;
  auto add_local = [&trip](const std::vector<int> &ids, const Eigen::MatrixXd &local) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j)
        trip.emplace_back(ids[i], ids[j], local(i, j));
  };
  for (int k = 0; k < static_cast<int>(mesh.n_triangles()); ++k)
  {
    const auto &ids = space.element_dofs(k);
    const int n = static_cast<int>(ids.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t p = 0; p < q.size(); ++p)
    {
      space.element_basis(k, q.points[p], phi, mj);
      const double w = q.weights[p] * std::abs(mj.jac.determinant());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          local(i, j) += w * phi[i].hess.cwiseProduct(phi[j].hess).sum();
    }
    add_local(ids, local);
  }
  for (const MeshEdge &e : mesh.edges())
  {
    if (!e.boundary)
      continue;
    const int k = e.tri[0];
    const auto &ids = space.element_dofs(k);
    const int n = static_cast<int>(ids.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t p = 0; p < eq.size(); ++p)
    {
      const double s = eq.points[p];
      const double t = e.ta + s * (e.tb - e.ta);
      space.element_basis(k, Vec2(1.0 - s, s), phi, mj);
      const double w = chi0 * eq.weights[p] * mesh.curve().speed(t) * (e.tb - e.ta);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          local(i, j) += w * phi[i].grad.dot(phi[j].grad);
    }
    add_local(ids, local);
  }
  SparseMatrix m(space.n_dofs(), space.n_dofs());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

double consistency_dual_norm(const AssembledSystem &system, const DofMap &space,
                             const Eigen::VectorXd &w)
{
  const int n = system.n_dofs;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n + 1);
  x.head(n) = w;
  const Eigen::VectorXd r = (system.matrix * x).head(n) - system.rhs.head(n);

  const SparseMatrix gram =
      assemble_norm_matrix(space, chi0(space.mesh().curve(), space.field()));
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < gram.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(gram, c); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n; ++i)
    if (system.mean(i) != 0.0)
    {
      trip.emplace_back(n, i, system.mean(i));
      trip.emplace_back(i, n, system.mean(i));
    }
  SparseMatrix bordered(n + 1, n + 1);
  bordered.setFromTriplets(trip.begin(), trip.end());
  Lu lu;
  factorize(lu, bordered);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = r;
  const Eigen::VectorXd z = lu.solve(rhs);
  return std::sqrt(std::max(0.0, r.dot(z.head(n))));
}

} // namespace ofem
