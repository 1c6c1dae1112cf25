#include "ofem/fem.hpp"
#include "ofem/quadrature.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ofem;

namespace
{
constexpr double pi = std::numbers::pi;

int count_boundary(const CurvedMesh &m)
{
  return static_cast<int>(m.n_boundary_vertices());
}

// Physical dofs of v on element k, evaluated through the space.
LocalVector physical_dofs(const ElementMap &map, const LocalVector &ref_coeffs)
{
  std::array<Jet, 3> vj;
  for (int a = 0; a < 3; ++a)
    vj[a] = physical_eval(map, ref_coeffs, hermite::reference_vertex(a));
  return ReferenceHermite::dofs_of(
      vj, physical_eval(map, ref_coeffs, hermite::reference_centroid()).value);
}
} // namespace

TEST(Pushforward, AffineScaling)
{
  const ElementMap m({Vec2(0, 0), Vec2(2, 0), Vec2(0, 2)});
  Jet ref;
  ref.value = 0.7;
  ref.grad = Vec2(1.0, -3.0);
  ref.hess << 2.0, 0.5, 0.5, -1.0;
  const Jet p = pushforward(m.eval(Vec2(0.3, 0.3)), ref);
  EXPECT_EQ(p.value, 0.7);
  EXPECT_LT((p.grad - 0.5 * ref.grad).norm(), 1e-15);
  EXPECT_LT((p.hess - 0.25 * ref.hess).norm(), 1e-15);
}

TEST(Pushforward, SingularJacobian)
{
  MapJet mj;
  mj.jac << 1.0, 2.0, 0.5, 1.0;
  mj.hess = {Mat2::Zero(), Mat2::Zero()};
  EXPECT_THROW(pushforward(mj, Jet{}), SingularJacobian);
}

TEST(PhysicalEval, LaplacianOfSquare)
{
  // v = x1^2 on the triangle (0,0), (1,0), (0,1) scaled by 1.5.
  const ElementMap m({Vec2(0, 0), Vec2(1.5, 0), Vec2(0, 1.5)});
  LocalVector phys;
  std::array<Jet, 3> vj;
  for (int a = 0; a < 3; ++a)
  {
    const Vec2 x = m.map(hermite::reference_vertex(a));
    vj[a].value = x.x() * x.x();
    vj[a].grad = Vec2(2 * x.x(), 0.0);
  }
  const Vec2 xc = m.map(hermite::reference_centroid());
  phys = ReferenceHermite::dofs_of(vj, xc.x() * xc.x());
  const LocalVector coeffs = dof_transform(m) * phys;
  const TriangleRule &q = triangle_quadrature(10);
  for (const Vec2 &p : q.points)
    EXPECT_NEAR(physical_eval(m, coeffs, p).hess.trace(), 2.0, 1e-13);
}

// v-hat = q o F_K: the pulled-back Hessian must be D^2 q.
TEST(PhysicalEval, HessianPullbackOnCurvedElement)
{
  const auto mesh = test::disk_mesh(0);
  const ElementMap m = mesh->map(0);
  ASSERT_TRUE(m.curved());
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5; ++i)
  {
    double a = u(rng), b = u(rng);
    if (a + b > 1)
      a = 1 - a, b = 1 - b;
    const Vec2 xh(a, b);
    const MapJet mj = m.eval(xh);
    const Jet q = test::quadratic_jet(mj.x);
    Jet ref;
    ref.value = q.value;
    ref.grad = mj.jac.transpose() * q.grad;
    ref.hess = mj.jac.transpose() * q.hess * mj.jac + q.grad(0) * mj.hess[0] +
               q.grad(1) * mj.hess[1];
    const Jet back = pushforward(mj, ref);
    EXPECT_LT((back.hess - q.hess).norm(), 1e-10);
    EXPECT_LT((back.grad - q.grad).norm(), 1e-12);
  }
}

TEST(DofTransform, Identity)
{
  const ElementMap m({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)});
  EXPECT_LT((dof_transform(m) - LocalMatrix::Identity()).norm(), 1e-15);
}

TEST(DofTransform, Scaled)
{
  const ElementMap m({Vec2(0, 0), Vec2(2, 0), Vec2(0, 2)});
  LocalMatrix expect = LocalMatrix::Identity();
  for (int a = 0; a < 3; ++a)
    expect.block<2, 2>(hermite::grad_dof(a, 0), hermite::grad_dof(a, 0)) = 2 * Mat2::Identity();
  EXPECT_LT((dof_transform(m) - expect).norm(), 1e-15);
}

TEST(DofTransform, PhysicalDualityOnCurvedElement)
{
  const auto mesh = test::disk_mesh(0);
  const ElementMap m = mesh->map(2);
  const LocalMatrix c = dof_transform(m);
  LocalMatrix duality;
  for (int j = 0; j < hermite::n_dofs; ++j)
    duality.col(j) = physical_dofs(m, c.col(j));
  EXPECT_LT((duality - LocalMatrix::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DofMap, Dimensions)
{
  const auto field = ObliqueField::rotate_normal(pi / 4);
  const auto m0 = test::disk_mesh(0);
  EXPECT_EQ(build_space(m0, field, false).n_dofs(), 27);
  const DofMap c0 = build_space(m0, field, true);
  EXPECT_EQ(c0.n_dofs(), 22);
  EXPECT_EQ(c0.c_dof(), 3 + 2 * 6);
  const auto m1 = test::disk_mesh(1);
  EXPECT_EQ(build_space(m1, field, true).n_dofs(), 70);
  for (int l = 0; l <= 3; ++l)
    for (const auto &mesh : {test::disk_mesh(l), test::ellipse_mesh(l)})
    {
      const int nv = static_cast<int>(mesh->n_vertices());
      const int nb = count_boundary(*mesh);
      const int nt = static_cast<int>(mesh->n_triangles());
      EXPECT_EQ(build_space(mesh, field, false).n_dofs(), 3 * nv + nt);
      EXPECT_EQ(build_space(mesh, field, true).n_dofs(), 3 * (nv - nb) + 2 * nb + 1 + nt);
    }
}

TEST(DofMap, KindsAndStars)
{
  const auto mesh = test::disk_mesh(1);
  const DofMap s = build_space(mesh, ObliqueField::tangential(), true);
  for (int k = 0; k < static_cast<int>(mesh->n_triangles()); ++k)
  {
    const DofInfo &d = s.dof(s.centroid_dof(k));
    EXPECT_EQ(d.kind, DofKind::value);
    EXPECT_EQ(d.star, std::vector<int>{k});
  }
  EXPECT_EQ(s.dof(s.value_dof(0)).star.size(), 6u);
  EXPECT_EQ(s.dof(s.c_dof()).kind, DofKind::derivative);
  for (int v = 0; v < static_cast<int>(mesh->n_vertices()); ++v)
  {
    EXPECT_EQ(s.dof(s.value_dof(v)).kind, DofKind::value);
    EXPECT_EQ(s.dof(s.value_dof(v)).vertex, v);
    EXPECT_EQ(mesh->is_boundary_vertex(v), s.tangential_dof(v) >= 0);
  }
}

TEST(DofMap, GlobalContinuity)
{
  for (bool constrained : {false, true})
    for (const auto &mesh : {test::disk_mesh(2), test::ellipse_mesh(1)})
    {
      const DofMap s = build_space(mesh, ObliqueField::polar_spiral(), constrained);
      const Eigen::VectorXd u = test::random_member(s, 17);
      for (const MeshEdge &e : mesh->edges())
      {
        if (e.boundary)
          continue;
        for (int i = 0; i <= 7; ++i)
        {
          const double t = (i + 0.5) / 8.0;
          Jet side[2];
          for (int k = 0; k < 2; ++k)
          {
            const int tri = e.tri[k];
            const Vec2 a = hermite::reference_vertex(mesh->local_index(tri, e.v[0]));
            const Vec2 b = hermite::reference_vertex(mesh->local_index(tri, e.v[1]));
            side[k] = s.eval(tri, u, (1 - t) * a + t * b);
          }
          EXPECT_NEAR(side[0].value, side[1].value, 1e-12);
        }
      }
      for (int v = 0; v < static_cast<int>(mesh->n_vertices()); ++v)
      {
        const auto &star = mesh->vertex_star(v);
        const Jet first =
            s.eval(star[0], u, hermite::reference_vertex(mesh->local_index(star[0], v)));
        for (int k : star)
        {
          const Jet j = s.eval(k, u, hermite::reference_vertex(mesh->local_index(k, v)));
          EXPECT_NEAR(j.value, first.value, 1e-12);
          EXPECT_LT((j.grad - first.grad).norm(), 1e-12);
        }
      }
    }
}

TEST(DofMap, ObliqueConstraint)
{
  for (const auto &field : {ObliqueField::rotate_normal(pi / 4), ObliqueField::polar_spiral(),
                            ObliqueField::tangential()})
  {
    const auto mesh = test::ellipse_mesh(2);
    const DofMap s = build_space(mesh, field, true);
    const Eigen::VectorXd u = test::random_member(s, 23);
    const double c = u(s.c_dof());
    for (int v = 0; v < static_cast<int>(mesh->n_vertices()); ++v)
    {
      if (!mesh->is_boundary_vertex(v))
        continue;
      const Vec2 l = field.direction(mesh->curve(), *mesh->vertices()[v].t);
      for (int k : mesh->vertex_star(v))
      {
        const Jet j = s.eval(k, u, hermite::reference_vertex(mesh->local_index(k, v)));
        EXPECT_NEAR(j.grad.dot(l), c, 1e-12);
        EXPECT_NEAR(j.grad.dot(perp(l)), u(s.tangential_dof(v)), 1e-12);
      }
    }
  }
}

TEST(Interpolate, Constant)
{
  const DofMap s = build_space(test::disk_mesh(1), ObliqueField::tangential(), true);
  const Eigen::VectorXd u = interpolate(s, [](const Vec2 &) {
    Jet j;
    j.value = 1.0;
    return j;
  });
  for (int i = 0; i < s.n_dofs(); ++i)
    EXPECT_EQ(u(i), s.dof(i).kind == DofKind::value ? 1.0 : 0.0);
}

TEST(Interpolate, CubicOnStraightElements)
{
  const auto mesh = test::disk_mesh(2);
  const DofMap s = build_space(mesh, ObliqueField::tangential(), false);
  const FieldJet cubic = [](const Vec2 &x) {
    Jet j;
    j.value = x.x() * x.x() * x.x() - 2 * x.x() * x.y() + x.y();
    j.grad = Vec2(3 * x.x() * x.x() - 2 * x.y(), -2 * x.x() + 1);
    j.hess << 6 * x.x(), -2, -2, 0;
    return j;
  };
  const Eigen::VectorXd u = interpolate(s, cubic);
  const TriangleRule &q = triangle_quadrature(10);
  for (int k = 0; k < static_cast<int>(mesh->n_triangles()); ++k)
  {
    if (s.map(k).curved())
      continue;
    for (const Vec2 &p : q.points)
    {
      const Jet v = s.eval(k, u, p);
      const Jet e = cubic(s.map(k).map(p));
      EXPECT_NEAR(v.value, e.value, 1e-13);
      EXPECT_LT((v.hess - e.hess).norm(), 1e-10);
    }
  }
}

// On curved elements the interpolant of x1^3 is not exact; its L-infinity
// error decays like h^4.
TEST(Interpolate, CubicOnCurvedElementsConverges)
{
  std::vector<double> err, h;
  for (int l = 1; l <= 3; ++l)
  {
    const auto mesh = test::disk_mesh(l);
    const DofMap s = build_space(mesh, ObliqueField::tangential(), false);
    const Eigen::VectorXd u = interpolate(s, [](const Vec2 &x) {
      Jet j;
      j.value = x.x() * x.x() * x.x();
      j.grad = Vec2(3 * x.x() * x.x(), 0);
      j.hess << 6 * x.x(), 0, 0, 0;
      return j;
    });
    double e = 0.0;
    const TriangleRule &q = triangle_quadrature(10);
    for (int k = 0; k < static_cast<int>(mesh->n_triangles()); ++k)
      for (const Vec2 &p : q.points)
      {
        const double x = s.map(k).map(p).x();
        e = std::max(e, std::abs(s.eval(k, u, p).value - x * x * x));
      }
    err.push_back(e);
    h.push_back(validate(*mesh).max_h);
  }
  EXPECT_GT(err[0], 1e-8);
  const double slope = std::log(err[1] / err[2]) / std::log(h[1] / h[2]);
  EXPECT_GT(slope, 3.5);
}
