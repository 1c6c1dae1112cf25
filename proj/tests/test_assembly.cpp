#include "ofem/assembly.hpp"
#include "ofem/experiments.hpp"
#include "ofem/quadrature.hpp"
#include "ofem/solver.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace ofem;

namespace
{
constexpr double pi = std::numbers::pi;

ProblemSpec laplace_problem(const BoundaryCurve &curve, const ObliqueField &field)
{
  ProblemSpec p;
  p.curve = curve;
  p.field = field;
  p.a = make_coefficient(CoefficientKind::identity);
  p.f = [](const Vec2 &) { return 0.0; };
  p.epsilon = 1.0;
  return p;
}

// Unit square split into 8 straight triangles (no curved edges).
std::shared_ptr<const CurvedMesh> straight_patch()
{
  std::vector<MeshVertex> v;
  for (int j = 0; j <= 2; ++j)
    for (int i = 0; i <= 2; ++i)
      v.push_back({Vec2(0.5 * i - 0.5, 0.5 * j - 0.5), std::nullopt});
  std::vector<MeshTriangle> t;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
    {
      const int a = 3 * j + i, b = a + 1, c = a + 3, d = a + 4;
      t.push_back({{a, b, d}, std::nullopt});
      t.push_back({{a, d, c}, std::nullopt});
    }
  return std::make_shared<const CurvedMesh>(BoundaryCurve::unit_circle(), v, t);
}

double max_abs(const SparseMatrix &m)
{
  double r = 0.0;
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it)
      r = std::max(r, std::abs(it.value()));
  return r;
}

double quad_form(const SparseMatrix &m, const Eigen::VectorXd &w, const Eigen::VectorXd &v)
{
  return v.dot(m * w);
}
} // namespace

TEST(Problem, SpotChecks)
{
  for (int id = 1; id <= 4; ++id)
  {
    const Experiment x = builtin_experiment(id);
    const SpotCheck s = spot_check(x.problem);
    EXPECT_TRUE(s.ok()) << "experiment " << id;
    if (id == 1)
      EXPECT_NEAR(s.max_cordes_ratio, 0.5, 1e-15);
    else
      EXPECT_NEAR(s.max_cordes_ratio, 0.625, 1e-15);
  }
  ProblemSpec bad = builtin_experiment(2).problem;
  bad.a = [](const Vec2 &) {
    Mat2 a;
    a << 1.0, 0.0, 0.0, 10.0;
    return a;
  };
  EXPECT_FALSE(spot_check(bad).cordes);
}

TEST(Problem, CheckerboardSignAtZero)
{
  const MatrixField a = make_coefficient(CoefficientKind::checkerboard);
  EXPECT_EQ(a(Vec2(0.0, 0.5))(0, 1), 1.0);
  EXPECT_EQ(a(Vec2(-0.3, 0.0))(1, 0), 1.0);
  EXPECT_EQ(a(Vec2(-0.3, 0.2))(1, 0), -1.0);
  EXPECT_NEAR(builtin_experiment(2).problem.gamma(Vec2(0.1, 0.2)), 0.4, 1e-16);
}

TEST(Problem, ExactSolutionsSatisfyBoundaryCondition)
{
  for (int id = 1; id <= 4; ++id)
  {
    const Experiment x = builtin_experiment(id);
    const auto &p = x.problem;
    for (int i = 0; i < 64; ++i)
    {
      const double t = p.curve.period() * i / 64;
      const Vec2 g = p.exact->u(p.curve.point(t)).grad;
      EXPECT_NEAR(g.dot(p.field.direction(p.curve, t)), x.exact_c, 1e-12) << id;
    }
    // Zero mean over the domain by quadrature on a fine mesh.
    const auto mesh = std::make_shared<const CurvedMesh>(mesh_at_level(p.curve, x.n_boundary, 3));
    const TriangleRule &q = triangle_quadrature(14);
    double mean = 0.0;
    for (int k = 0; k < static_cast<int>(mesh->n_triangles()); ++k)
    {
      const ElementMap m = mesh->map(k);
      for (std::size_t j = 0; j < q.size(); ++j)
      {
        const MapJet mj = m.eval(q.points[j]);
        mean += q.weights[j] * std::abs(mj.jac.determinant()) * p.exact->u(mj.x).value;
      }
    }
    EXPECT_NEAR(mean, 0.0, 1e-9) << id;
  }
  EXPECT_NEAR(builtin_experiment(1).exact_c, -12.07700795676662, 1e-12);
  EXPECT_NEAR(builtin_experiment(3).exact_c, 7.688462056318234, 1e-12);
}

TEST(Problem, ExactHessianMatchesDifferences)
{
  const double h = 1e-5;
  for (int id = 1; id <= 4; ++id)
  {
    const FieldJet u = builtin_experiment(id).problem.exact->u;
    for (const Vec2 &x : {Vec2(0.3, -0.2), Vec2(-0.5, 0.4)})
      for (int d = 0; d < 2; ++d)
      {
        const Vec2 e = h * Vec2::Unit(d);
        EXPECT_NEAR(u(x).grad(d), (u(x + e).value - u(x - e).value) / (2 * h), 1e-8);
        const Vec2 dg = (u(x + e).grad - u(x - e).grad) / (2 * h);
        EXPECT_LT((u(x).hess.col(d) - dg).norm(), 1e-7);
      }
  }
}

TEST(StabilizationFactor, Values)
{
  EXPECT_DOUBLE_EQ(stabilization_factor(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(stabilization_factor(0.6, 0.6), (2.0 - std::sqrt(0.4)) / 2.0);
  EXPECT_DOUBLE_EQ(stabilization_factor(0.6, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(stabilization_factor(0.3, 0.0), 0.5);
  EXPECT_THROW(stabilization_factor(0.6, 0.99), BadEpsilonTilde);
  EXPECT_THROW(stabilization_factor(0.6, 1.0), BadEpsilonTilde);
  EXPECT_THROW(stabilization_factor(0.6, -0.1), BadEpsilonTilde);
}

TEST(Volume, LaplaceBlockSymmetric)
{
  const DofMap s = build_space(test::disk_mesh(1), ObliqueField::rotate_normal(pi / 4), true);
  const SparseMatrix b = assemble_volume(s, laplace_problem(s.mesh().curve(), s.field()));
  const SparseMatrix diff = SparseMatrix(b.transpose()) - b;
  EXPECT_LE(max_abs(diff), 1e-12 * max_abs(b));
}

TEST(Volume, ConstantsInKernel)
{
  const Experiment x = builtin_experiment(2);
  const DofMap s = build_space(test::disk_mesh(2), x.problem.field, true);
  const SparseMatrix b = assemble_volume(s, x.problem);
  EXPECT_LE((b * constant_member(s, 1.0)).cwiseAbs().maxCoeff(), 1e-12 * max_abs(b));
}

// Bubble-bubble entry on the reference triangle against a collapsed Gauss
// product rule applied to the monomial expansion.
TEST(Volume, BubbleEntryMatchesOracle)
{
  const auto c = BoundaryCurve::unit_circle();
  const auto mesh = std::make_shared<const CurvedMesh>(
      c, std::vector<MeshVertex>{{Vec2(0, 0), std::nullopt}, {Vec2(1, 0), std::nullopt},
                                 {Vec2(0, 1), std::nullopt}},
      std::vector<MeshTriangle>{{{0, 1, 2}, std::nullopt}});
  const DofMap s = build_space(mesh, ObliqueField::tangential(), false);
  const SparseMatrix b = assemble_volume(s, laplace_problem(c, s.field()));
  const int bubble = s.centroid_dof(0);

  const LocalMatrix &coef = ReferenceHermite::instance().monomial_coefficients();
  auto lap = [&](double x, double y) {
    const BasisJets m = monomial_jets(Vec2(x, y));
    double v = 0.0;
    for (int j = 0; j < 10; ++j)
      v += coef(j, hermite::centroid_dof) * m[j].hess.trace();
    return v;
  };
  const IntervalRule g = interval_quadrature(8);
  double oracle = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
    {
      // (s, t) -> (s, (1 - s) t), Jacobian 1 - s.
      const double x = g.points[i], y = (1 - x) * g.points[j];
      const double l = lap(x, y);
      oracle += g.weights[i] * g.weights[j] * (1 - x) * l * l;
    }
  EXPECT_NEAR(b.coeff(bubble, bubble), oracle, 1e-12 * std::abs(oracle));
}

TEST(Volume, MatchesDirectQuadrature)
{
  const Experiment x = builtin_experiment(3);
  const DofMap s = build_space(test::disk_mesh(1), x.problem.field, true);
  const Eigen::VectorXd v = test::random_member(s, 4);
  const SparseMatrix b = assemble_volume(s, x.problem);
  const FormTerms t = form_terms(s, v, &x.problem);
  EXPECT_NEAR(quad_form(b, v, v), t.volume_form, 1e-10 * std::abs(t.volume_form));
}

TEST(Stabilization, ConstantsGiveZero)
{
  const DofMap s = build_space(test::ellipse_mesh(1), ObliqueField::tangential(), true);
  const SparseMatrix st = assemble_stabilization(s);
  const Eigen::VectorXd one = constant_member(s, 1.0);
  EXPECT_LE((st * one).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((SparseMatrix(st.transpose()) * one).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Stabilization, NotSymmetric)
{
  const DofMap s = build_space(test::disk_mesh(1), ObliqueField::rotate_normal(pi / 4), true);
  const SparseMatrix st = assemble_stabilization(s);
  const Eigen::VectorXd w = test::random_member(s, 1), v = test::random_member(s, 2);
  EXPECT_GT(std::abs(quad_form(st, w, v) - quad_form(st, v, w)), 1e-6);
}

TEST(Stabilization, MatchesDirectQuadrature)
{
  for (const auto &field : {ObliqueField::rotate_normal(pi / 4), ObliqueField::polar_spiral()})
  {
    const DofMap s = build_space(test::disk_mesh(2), field, false);
    const Eigen::VectorXd v = test::random_member(s, 8);
    const FormTerms t = form_terms(s, v);
    const double direct = -2.0 * t.jump + 2.0 * t.boundary_cross;
    EXPECT_NEAR(quad_form(assemble_stabilization(s), v, v), direct, 1e-10 * std::abs(direct));
  }
}

TEST(Rhs, ZeroLoad)
{
  const DofMap s = build_space(test::disk_mesh(1), ObliqueField::tangential(), true);
  ProblemSpec p = laplace_problem(s.mesh().curve(), s.field());
  EXPECT_EQ(assemble_rhs(s, p).norm(), 0.0);
}

TEST(Rhs, CubicOnStraightPatch)
{
  const auto mesh = straight_patch();
  const DofMap s = build_space(mesh, ObliqueField::tangential(), false);
  const FieldJet u = [](const Vec2 &x) {
    Jet j;
    j.value = x.x() * x.x() * x.y() - 0.5 * x.y() * x.y() * x.y() + x.x();
    j.grad = Vec2(2 * x.x() * x.y() + 1, x.x() * x.x() - 1.5 * x.y() * x.y());
    j.hess << 2 * x.y(), 2 * x.x(), 2 * x.x(), -3 * x.y();
    return j;
  };
  ProblemSpec p = laplace_problem(mesh->curve(), s.field());
  p.f = [u](const Vec2 &x) { return u(x).hess.trace(); };
  const Eigen::VectorXd lh = assemble_rhs(s, p);
  const Eigen::VectorXd bu = assemble_volume(s, p) * interpolate(s, u);
  EXPECT_LE((lh - bu).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(lh.dot(constant_member(s, 1.0)), 0.0, 1e-12);
}

TEST(MeanVector, AreaAndSymmetry)
{
  const DofMap disk = build_space(test::disk_mesh(2), ObliqueField::rotate_normal(pi / 4), true);
  const Eigen::VectorXd m = assemble_mean_vector(disk);
  EXPECT_NEAR(m.dot(constant_member(disk, 1.0)), pi, 1e-10);
  const Eigen::VectorXd x1 = interpolate(disk, [](const Vec2 &x) {
    Jet j;
    j.value = x.x();
    j.grad = Vec2(1, 0);
    return j;
  });
  EXPECT_NEAR(m.dot(x1), 0.0, 1e-10);

  const DofMap ell = build_space(test::ellipse_mesh(3), ObliqueField::tangential(), true);
  EXPECT_NEAR(assemble_mean_vector(ell).dot(constant_member(ell, 1.0)), 2 * pi, 1e-8);
}

TEST(System, BorderedStructure)
{
  const Experiment x = builtin_experiment(2);
  const DofMap s = build_space(test::disk_mesh(1), x.problem.field, true);
  const AssembledSystem sys = assemble_system(s, x.problem);
  const int n = s.n_dofs();
  EXPECT_EQ(sys.matrix.rows(), n + 1);
  EXPECT_EQ(sys.matrix.cols(), n + 1);
  EXPECT_EQ(sys.c_dof, s.c_dof());
  EXPECT_DOUBLE_EQ(sys.stabilization_factor, (2.0 - std::sqrt(0.4)) / 2.0);
  EXPECT_EQ(sys.matrix.coeff(n, n), 0.0);
  for (int i = 0; i < n; ++i)
  {
    EXPECT_EQ(sys.matrix.coeff(n, i), sys.mean(i));
    EXPECT_EQ(sys.matrix.coeff(i, n), sys.mean(i));
  }
  const SparseMatrix b = assemble_volume(s, x.problem) +
                         sys.stabilization_factor * assemble_stabilization(s);
  const Eigen::VectorXd v = test::random_member(s, 5);
  Eigen::VectorXd vx = Eigen::VectorXd::Zero(n + 1);
  vx.head(n) = v;
  EXPECT_LE(((sys.matrix * vx).head(n) - b * v).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(System, FactorsForExperiments)
{
  const DofMap s = build_space(test::disk_mesh(0), ObliqueField::rotate_normal(pi / 4), true);
  EXPECT_DOUBLE_EQ(assemble_system(s, builtin_experiment(1).problem).stabilization_factor, 1.0);
  ProblemSpec p = builtin_experiment(3).problem;
  p.epsilon_tilde = 0.0;
  EXPECT_DOUBLE_EQ(assemble_system(s, p).stabilization_factor, 0.5);
  p.epsilon_tilde = 0.95;
  EXPECT_THROW(assemble_system(s, p), BadEpsilonTilde);
}

TEST(MirandaTalenti, Constant)
{
  const DofMap s = build_space(test::disk_mesh(1), ObliqueField::rotate_normal(pi / 4), false);
  EXPECT_EQ(mt_identity_residual(s, constant_member(s, 3.0)), 0.0);
}

TEST(MirandaTalenti, InterpolatedSquare)
{
  const DofMap s = build_space(test::disk_mesh(2), ObliqueField::rotate_normal(pi / 4), false);
  const Eigen::VectorXd v = interpolate(s, [](const Vec2 &x) {
    Jet j;
    j.value = x.x() * x.x();
    j.grad = Vec2(2 * x.x(), 0);
    j.hess << 2, 0, 0, 0;
    return j;
  });
  EXPECT_LE(mt_identity_residual(s, v), 1e-8);
}

TEST(MirandaTalenti, RandomMembers)
{
  for (const auto &mesh : {test::disk_mesh(2), test::ellipse_mesh(2)})
    for (const auto &field : {ObliqueField::rotate_normal(pi / 4), ObliqueField::tangential(),
                              ObliqueField::polar_spiral()})
    {
      const DofMap s = build_space(mesh, field, false);
      for (int i = 0; i < 20; ++i)
        EXPECT_LE(mt_identity_residual(s, test::random_member(s, 100 + i)), 1e-6)
            << mesh->curve().name() << " " << field.name() << " member " << i;
    }
}

TEST(Energy, Constants)
{
  const Experiment x = builtin_experiment(2);
  const DofMap s = build_space(test::disk_mesh(1), x.problem.field, true);
  const Energy e = energy(s, x.problem, constant_member(s, 2.0));
  EXPECT_NEAR(e.bilinear, 0.0, 1e-20);
  EXPECT_NEAR(e.norm_sq, 0.0, 1e-20);
  EXPECT_NEAR(e.stabilization, 0.0, 1e-20);
  EXPECT_NEAR(e.laplace_sq, 0.0, 1e-20);
}

TEST(Energy, IdentityRestatement)
{
  const Experiment x = builtin_experiment(4);
  const DofMap s = build_space(test::ellipse_mesh(1), x.problem.field, true);
  for (int i = 0; i < 5; ++i)
  {
    const Eigen::VectorXd v = test::random_member(s, 300 + i);
    const Energy e = energy(s, x.problem, v);
    const FormTerms t = form_terms(s, v);
    const double rhs = t.hessian_sq + t.boundary_mt;
    EXPECT_NEAR(e.laplace_sq + e.stabilization, rhs, 1e-8 * rhs);
  }
}

TEST(Energy, Coercivity)
{
  for (int id : {1, 2})
  {
    const Experiment x = builtin_experiment(id);
    const DofMap s = build_space(test::disk_mesh(2), x.problem.field, true);
    const double k = 1.0 - std::sqrt(1.0 - x.problem.epsilon);
    for (int i = 0; i < 20; ++i)
    {
      const Energy e = energy(s, x.problem, test::random_member(s, 500 + i));
      EXPECT_GE((e.bilinear - k * e.norm_sq) / e.norm_sq, -1e-8) << "experiment " << id;
    }
  }
}

TEST(MatrixMarket, Header)
{
  SparseMatrix m(2, 3);
  m.insert(0, 1) = 1.5;
  m.insert(1, 2) = -2.0;
  std::ostringstream os;
  write_matrix_market(os, m);
  EXPECT_EQ(os.str(), "%%MatrixMarket matrix coordinate real general\n2 3 2\n1 2 1.5\n2 3 -2\n");
}
