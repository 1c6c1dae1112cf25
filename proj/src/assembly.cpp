#include "ofem/assembly.hpp"

#include "ofem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace ofem
{
namespace
{
using Triplets = std::vector<Eigen::Triplet<double>>;

double frobenius_sq(const Mat2 &m) { return m.squaredNorm(); }

double contract(const Mat2 &a, const Mat2 &b) { return a.cwiseProduct(b).sum(); }

// Geometry of a straight interior edge seen from its two triangles.
struct InteriorEdge
{
  std::array<int, 2> tri;
  std::array<Vec2, 2> ref_start; // reference position of the lower-id vertex
  std::array<Vec2, 2> ref_end;
  std::array<Vec2, 2> normal; // outward from each triangle
  Vec2 tangent;
  double length;
  int lower; // 0 or 1: which side supplies d2v/dt2
};

InteriorEdge interior_edge(const CurvedMesh &mesh, const MeshEdge &e)
{
  InteriorEdge g;
  const Vec2 p = mesh.vertices()[e.v[0]].x;
  const Vec2 q = mesh.vertices()[e.v[1]].x;
  g.length = (q - p).norm();
  g.tangent = (q - p) / g.length;
  const Vec2 nrm(g.tangent.y(), -g.tangent.x());
  g.tri = e.tri;
  for (int s = 0; s < 2; ++s)
  {
    const int k = e.tri[s];
    g.ref_start[s] = hermite::reference_vertex(mesh.local_index(k, e.v[0]));
    g.ref_end[s] = hermite::reference_vertex(mesh.local_index(k, e.v[1]));
    int opp = 0;
    for (int i = 0; i < 3; ++i)
      if (mesh.triangles()[k].v[i] != e.v[0] && mesh.triangles()[k].v[i] != e.v[1])
        opp = mesh.triangles()[k].v[i];
    const double side = nrm.dot(mesh.vertices()[opp].x - p);
    g.normal[s] = side < 0.0 ? nrm : Vec2(-nrm);
  }
  g.lower = e.tri[0] < e.tri[1] ? 0 : 1;
  return g;
}

// Arc-length data at a boundary edge quadrature point.
struct BoundaryPoint
{
  Vec2 xhat;
  Vec2 tau;
  ObliqueSample field;
  double chi;
  double ds; // arc-length weight per unit reference length
};

BoundaryPoint boundary_point(const CurvedMesh &mesh, const ObliqueField &field,
                             const MeshEdge &e, double s)
{
  const BoundaryCurve &curve = mesh.curve();
  const double t = e.ta + s * (e.tb - e.ta);
  BoundaryPoint b;
  b.xhat = Vec2(1.0 - s, s);
  const CurvePoint cp = curve.eval(t);
  b.tau = cp.dx.normalized();
  b.field = field.at(curve, t);
  b.chi = curve.curvature(t);
  b.ds = cp.dx.norm() * (e.tb - e.ta);
  return b;
}

// (dw/dl)' = (D^2 w tau) . l + grad w . dl/ds.
double oblique_rate(const Jet &w, const BoundaryPoint &b)
{
  return (w.hess * b.tau).dot(b.field.l) + w.grad.dot(b.field.dl_ds);
}

double laplacian(const Jet &j) { return j.hess.trace(); }

SparseMatrix from_triplets(int n, const Triplets &t)
{
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Vec2 random_domain_point(const BoundaryCurve &curve, std::mt19937_64 &rng)
{
  const double a = curve.semi_axis_a();
  const double b = curve.semi_axis_b();
  std::uniform_real_distribution<double> ux(-a, a), uy(-b, b);
  for (;;)
  {
    const Vec2 p(ux(rng), uy(rng));
    if ((p.x() / a) * (p.x() / a) + (p.y() / b) * (p.y() / b) <= 1.0)
      return p;
  }
}
} // namespace

double ProblemSpec::gamma(const Vec2 &x) const
{
  const Mat2 m = a(x);
  return m.trace() / frobenius_sq(m);
}

double stabilization_factor(double epsilon, double epsilon_tilde)
{
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw ConfigError("Cordes parameter must lie in (0, 1]");
  if (!(epsilon_tilde >= 0.0 && epsilon_tilde <= 1.0))
    throw BadEpsilonTilde("epsilon-tilde must lie in [0, 1]");
  const double s = std::sqrt(1.0 - epsilon_tilde);
  if (epsilon_tilde != epsilon)
  {
    const bool ok = s > 0.0 ? s + (1.0 - epsilon) / s < 2.0 : epsilon == 1.0;
    if (!ok)
      throw BadEpsilonTilde("epsilon-tilde " + std::to_string(epsilon_tilde) +
                            " is not admissible for epsilon " +
                            std::to_string(epsilon));
  }
  return 0.5 * (2.0 - s);
}

SpotCheck spot_check(const ProblemSpec &problem, std::uint64_t seed,
                     int n_elliptic, int n_cordes)
{
  SpotCheck r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < n_elliptic; ++i)
  {
    const Vec2 x = random_domain_point(problem.curve, rng);
    const double th = angle(rng);
    const Vec2 xi(std::cos(th), std::sin(th));
    if (!(xi.dot(problem.a(x) * xi) > 0.0))
      r.elliptic = false;
  }
  const double bound = 1.0 / (1.0 + problem.epsilon);
  for (int i = 0; i < n_cordes; ++i)
  {
    const Vec2 x = random_domain_point(problem.curve, rng);
    const Mat2 m = problem.a(x);
    const double ratio = frobenius_sq(m) / (m.trace() * m.trace());
    r.max_cordes_ratio = std::max(r.max_cordes_ratio, ratio);
    if (ratio > bound * (1.0 + 1e-14))
      r.cordes = false;
    if (!(problem.gamma(x) > 0.0))
      r.gamma_positive = false;
  }
  return r;
}

SparseMatrix assemble_volume(const DofMap &space, const ProblemSpec &problem)
{
  const TriangleRule &q = triangle_quadrature(problem.volume_degree);
  Triplets trip;
  std::vector<Jet> phi;
  MapJet mj;
  for (int k = 0; k < static_cast<int>(space.mesh().n_triangles()); ++k)
  {
    const auto &ids = space.element_dofs(k);
    const int n = static_cast<int>(ids.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t p = 0; p < q.size(); ++p)
    {
      space.element_basis(k, q.points[p], phi, mj);
      const double w = q.weights[p] * std::abs(mj.jac.determinant());
      const Mat2 ga = problem.gamma(mj.x) * problem.a(mj.x);
      for (int j = 0; j < n; ++j)
      {
        const double trial = w * contract(ga, phi[j].hess);
        for (int i = 0; i < n; ++i)
          local(i, j) += trial * laplacian(phi[i]);
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        trip.emplace_back(ids[i], ids[j], local(i, j));
  }
  return from_triplets(space.n_dofs(), trip);
}

SparseMatrix assemble_stabilization(const DofMap &space, int edge_points)
{
  const CurvedMesh &mesh = space.mesh();
  const IntervalRule q = interval_quadrature(edge_points);
  Triplets trip;
  std::array<std::vector<Jet>, 2> phi;
  MapJet mj;
  for (const MeshEdge &e : mesh.edges())
  {
    if (e.boundary)
    {
      const int k = e.tri[0];
      const auto &ids = space.element_dofs(k);
      const int n = static_cast<int>(ids.size());
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
      for (std::size_t p = 0; p < q.size(); ++p)
      {
        const BoundaryPoint b = boundary_point(mesh, space.field(), e, q.points[p]);
        space.element_basis(k, b.xhat, phi[0], mj);
        const double w = 2.0 * q.weights[p] * b.ds;
        const Vec2 lp = perp(b.field.l);
        for (int j = 0; j < n; ++j)
        {
          const double trial = w * oblique_rate(phi[0][j], b);
          for (int i = 0; i < n; ++i)
            local(i, j) += trial * phi[0][i].grad.dot(lp);
        }
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          trip.emplace_back(ids[i], ids[j], local(i, j));
      continue;
    }

    const InteriorEdge g = interior_edge(mesh, e);
    const auto &test_ids = space.element_dofs(g.tri[g.lower]);
    for (std::size_t p = 0; p < q.size(); ++p)
    {
      const double s = q.points[p];
      const double w = -2.0 * q.weights[p] * g.length;
      for (int side = 0; side < 2; ++side)
        space.element_basis(g.tri[side], (1.0 - s) * g.ref_start[side] + s * g.ref_end[side],
                            phi[side], mj);
      const std::vector<Jet> &test = phi[g.lower];
      for (int side = 0; side < 2; ++side)
      {
        const auto &trial_ids = space.element_dofs(g.tri[side]);
        for (std::size_t j = 0; j < trial_ids.size(); ++j)
        {
          const double dn = w * phi[side][j].grad.dot(g.normal[side]);
          if (dn == 0.0)
            continue;
          for (std::size_t i = 0; i < test_ids.size(); ++i)
            trip.emplace_back(test_ids[i], trial_ids[j],
                              dn * g.tangent.dot(test[i].hess * g.tangent));
        }
      }
    }
  }
  return from_triplets(space.n_dofs(), trip);
}

Eigen::VectorXd assemble_rhs(const DofMap &space, const ProblemSpec &problem)
{
  const TriangleRule &q = triangle_quadrature(problem.volume_degree);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.n_dofs());
  std::vector<Jet> phi;
  MapJet mj;
  for (int k = 0; k < static_cast<int>(space.mesh().n_triangles()); ++k)
  {
    const auto &ids = space.element_dofs(k);
    for (std::size_t p = 0; p < q.size(); ++p)
    {
      space.element_basis(k, q.points[p], phi, mj);
      const double w = q.weights[p] * std::abs(mj.jac.determinant()) *
                       problem.gamma(mj.x) * problem.f(mj.x);
      for (std::size_t i = 0; i < ids.size(); ++i)
        rhs(ids[i]) += w * laplacian(phi[i]);
    }
  }
  return rhs;
}

Eigen::VectorXd assemble_mean_vector(const DofMap &space, int degree)
{
  const TriangleRule &q = triangle_quadrature(degree);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(space.n_dofs());
  std::vector<Jet> phi;
  MapJet mj;
  for (int k = 0; k < static_cast<int>(space.mesh().n_triangles()); ++k)
  {
    const auto &ids = space.element_dofs(k);
    for (std::size_t p = 0; p < q.size(); ++p)
    {
      space.element_basis(k, q.points[p], phi, mj);
      const double w = q.weights[p] * std::abs(mj.jac.determinant());
      for (std::size_t i = 0; i < ids.size(); ++i)
        m(ids[i]) += w * phi[i].value;
    }
  }
  return m;
}

AssembledSystem assemble_system(const DofMap &space, const ProblemSpec &problem)
{
  AssembledSystem sys;
  sys.stabilization_factor =
      stabilization_factor(problem.epsilon, problem.scheme_epsilon());
  sys.n_dofs = space.n_dofs();
  sys.c_dof = space.c_dof();
  const SparseMatrix b = assemble_volume(space, problem) +
                         sys.stabilization_factor *
                             assemble_stabilization(space, problem.edge_points);
  sys.mean = assemble_mean_vector(space, problem.volume_degree);

  const int n = sys.n_dofs;
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(b.nonZeros()) + 2 * n);
  for (int c = 0; c < b.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(b, c); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                        it.value());
  for (int i = 0; i < n; ++i)
  {
    if (sys.mean(i) == 0.0)
      continue;
    trip.emplace_back(n, i, sys.mean(i));
    trip.emplace_back(i, n, sys.mean(i));
  }
  sys.matrix = from_triplets(n + 1, trip);
  sys.rhs = Eigen::VectorXd::Zero(n + 1);
  sys.rhs.head(n) = assemble_rhs(space, problem);
  return sys;
}

FormTerms form_terms(const DofMap &space, const Eigen::VectorXd &u,
                     const ProblemSpec *problem, int degree, int edge_points)
{
  const CurvedMesh &mesh = space.mesh();
  const TriangleRule &q = triangle_quadrature(degree);
  FormTerms t;
  std::vector<LocalVector> coeffs(mesh.n_triangles());
  for (int k = 0; k < static_cast<int>(mesh.n_triangles()); ++k)
  {
    coeffs[k] = space.reference_coefficients(k, u);
    const ElementMap &map = space.map(k);
    for (std::size_t p = 0; p < q.size(); ++p)
    {
      const MapJet mj = map.eval(q.points[p]);
      const Jet v = physical_eval(map, coeffs[k], q.points[p]);
      const double w = q.weights[p] * std::abs(mj.jac.determinant());
      const double lap = laplacian(v);
      t.laplace_sq += w * lap * lap;
      t.hessian_sq += w * frobenius_sq(v.hess);
      if (problem)
        t.volume_form +=
            w * problem->gamma(mj.x) * contract(problem->a(mj.x), v.hess) * lap;
    }
  }

  const IntervalRule eq = interval_quadrature(edge_points);
  for (const MeshEdge &e : mesh.edges())
  {
    if (e.boundary)
    {
      const int k = e.tri[0];
      for (std::size_t p = 0; p < eq.size(); ++p)
      {
        const BoundaryPoint b = boundary_point(mesh, space.field(), e, eq.points[p]);
        const Jet v = physical_eval(space.map(k), coeffs[k], b.xhat);
        const double w = eq.weights[p] * b.ds;
        const double g2 = v.grad.squaredNorm();
        t.boundary_grad_sq += w * g2;
        t.boundary_mt += w * g2 * (b.field.theta_dot - b.chi);
        t.boundary_cross += w * v.grad.dot(perp(b.field.l)) * oblique_rate(v, b);
      }
      continue;
    }
    const InteriorEdge g = interior_edge(mesh, e);
    for (std::size_t p = 0; p < eq.size(); ++p)
    {
      const double s = eq.points[p];
      std::array<Jet, 2> v;
      for (int side = 0; side < 2; ++side)
        v[side] = physical_eval(space.map(g.tri[side]), coeffs[g.tri[side]],
                                (1.0 - s) * g.ref_start[side] + s * g.ref_end[side]);
      const double jump = v[0].grad.dot(g.normal[0]) + v[1].grad.dot(g.normal[1]);
      const double dtt = g.tangent.dot(v[g.lower].hess * g.tangent);
      t.jump += eq.weights[p] * g.length * jump * dtt;
    }
  }
  return t;
}

double mt_identity_residual(const DofMap &space, const Eigen::VectorXd &u)
{
  const FormTerms t = form_terms(space, u);
  const double lhs = t.laplace_sq;
  const double rhs =
      t.hessian_sq + 2.0 * t.jump + t.boundary_mt - 2.0 * t.boundary_cross;
  const double scale = t.hessian_sq + 2.0 * std::abs(t.jump) + std::abs(t.boundary_mt) +
                       2.0 * std::abs(t.boundary_cross);
  // Second derivatives at roundoff level (constants): nothing to compare.
  const double floor = 1e-24 * std::max(u.squaredNorm(), 1e-300);
  if (std::max(lhs, scale) <= floor)
    return 0.0;
  return std::abs(lhs - rhs) / std::max(lhs, scale);
}

Energy energy(const DofMap &space, const ProblemSpec &problem,
              const Eigen::VectorXd &u)
{
  const FormTerms t = form_terms(space, u, &problem, problem.volume_degree,
                                 problem.edge_points);
  const double factor = stabilization_factor(problem.epsilon, problem.scheme_epsilon());
  const double x0 = chi0(space.mesh().curve(), space.field());
  Energy e;
  e.stabilization = -2.0 * t.jump + 2.0 * t.boundary_cross;
  e.bilinear = t.volume_form + factor * e.stabilization;
  e.norm_sq = t.hessian_sq + x0 * t.boundary_grad_sq;
  e.laplace_sq = t.laplace_sq;
  return e;
}

void write_matrix_market(std::ostream &os, const SparseMatrix &m)
{
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  char buf[96];
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it)
    {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n",
                    static_cast<long>(it.row() + 1), static_cast<long>(it.col() + 1),
                    it.value());
      os << buf;
    }
}

} // namespace ofem
