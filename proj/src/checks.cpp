#include "ofem/checks.hpp"

#include "ofem/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace ofem
{
namespace
{
std::string fmt(const char *f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::shared_ptr<const CurvedMesh> builtin_mesh(bool disk, int level)
{
  return std::make_shared<const CurvedMesh>(
      disk ? mesh_at_level(BoundaryCurve::unit_circle(), 6, level)
           : mesh_at_level(BoundaryCurve::ellipse(2.0, 1.0), 8, level));
}

double max_h(const CurvedMesh &mesh)
{
  double h = 0.0;
  for (int k = 0; k < static_cast<int>(mesh.n_triangles()); ++k)
    h = std::max(h, mesh.map(k).h());
  return h;
}
} // namespace

Eigen::VectorXd random_member(const DofMap &space, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd u(space.n_dofs());
  for (int i = 0; i < space.n_dofs(); ++i)
    u(i) = d(rng);
  return u;
}

CheckResult check_mt_identity()
{
  double worst = 0.0;
  int count = 0;
  for (bool disk : {true, false})
  {
    const auto mesh = builtin_mesh(disk, 2);
    for (const auto &field : {ObliqueField::rotate_normal(std::numbers::pi / 4),
                              ObliqueField::tangential(), ObliqueField::polar_spiral()})
    {
      const DofMap s = build_space(mesh, field, false);
      for (int i = 0; i < 20; ++i, ++count)
        worst = std::max(worst, mt_identity_residual(s, random_member(s, 1000 + i)));
    }
  }
  return {"mt-identity",
          worst <= 1e-6,
          {{"members", count}, {"max_residual", worst}},
          fmt("%d members, max relative residual %.2e", count, worst)};
}

CheckResult check_coercivity()
{
  double worst = 1e300;
  for (int id : {1, 2})
  {
    const Experiment x = builtin_experiment(id);
    const DofMap s = build_space(builtin_mesh(true, 2), x.problem.field, true);
    const double k = 1.0 - std::sqrt(1.0 - x.problem.epsilon);
    for (int i = 0; i < 20; ++i)
    {
      const Energy e = energy(s, x.problem, random_member(s, 2000 + i));
      worst = std::min(worst, (e.bilinear - k * e.norm_sq) / e.norm_sq);
    }
  }
  return {"coercivity",
          worst >= -1e-8,
          {{"min_relative_margin", worst}},
          fmt("min (b_h(v,v) - k ||v||_h^2) / ||v||_h^2 = %.3e", worst)};
}

CheckResult check_interpolation(int first_level, int last_level)
{
  const Experiment x = builtin_experiment(1);
  const FieldJet u = x.problem.exact->u;
  const auto values = [u](const Vec2 &p) { return u(p).value; };
  std::vector<double> h, e;
  double defect = 0.0;
  CurvedMesh mesh = mesh_at_level(x.problem.curve, x.n_boundary, first_level);
  for (int level = first_level; level <= last_level; ++level)
  {
    if (level > first_level)
      mesh = refine(mesh);
    const DofMap s =
        build_space(std::make_shared<const CurvedMesh>(mesh), x.problem.field, true);
    const Eigen::VectorXd w = quasi_interp_oblique(s, values, x.exact_c);
    defect = std::max(defect, boundary_constraint_defect(s, w, x.exact_c));
    h.push_back(max_h(mesh));
    e.push_back(error_norms(s, w, u).h2);
  }
  const std::vector<double> o = eoc(h, e);
  CheckResult r;
  r.name = "interpolation";
  r.pass = o.size() >= 2 && o.back() >= 1.7 && o.back() <= 2.3 && defect <= 1e-12;
  std::string orders;
  for (std::size_t i = 1; i < o.size(); ++i)
  {
    orders += fmt(" %.2f", o[i]);
    r.metrics.emplace_back(fmt("h2_order_%d", first_level + static_cast<int>(i)), o[i]);
  }
  r.metrics.emplace_back("boundary_defect", defect);
  r.detail = fmt("H2 EOC levels %d..%d:%s, boundary defect %.1e", first_level, last_level,
                 orders.c_str(), defect);
  return r;
}

CheckResult check_poincare()
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  int checked = 0, violations = 0;
  double worst = 0.0;
  for (int level = 0; level <= 2; ++level)
    for (bool disk : {true, false})
    {
      const auto mesh = builtin_mesh(disk, level);
      for (int k = 0; k < static_cast<int>(mesh->n_triangles()); ++k)
      {
        const ElementMap m = mesh->map(k);
        if (!m.curved())
          continue;
        const Vec2 x0 = m.map(hermite::reference_centroid());
        const double hk = m.h();
        for (int s = 0; s < 20; ++s, ++checked)
        {
          LocalVector coef;
          for (int j = 0; j < hermite::n_dofs; ++j)
            coef(j) = d(rng);
          const FieldJet cubic = [&](const Vec2 &x) {
            const BasisJets mono = monomial_jets((x - x0) / hk);
            Jet j;
            for (int i = 0; i < hermite::n_dofs; ++i)
              j += coef(i) * mono[i];
            j.grad /= hk;
            j.hess /= hk * hk;
            return j;
          };
          const PoincareTerms t = poincare_terms(m, mesh->curve(), cubic);
          worst = std::max(worst, t.lhs / t.rhs);
          violations += !t.holds();
        }
      }
    }
  return {"poincare",
          violations == 0,
          {{"samples", checked}, {"violations", violations}, {"max_ratio", worst}},
          fmt("%d curved-element samples, %d violations, max lhs/rhs %.3f", checked,
              violations, worst)};
}

CheckResult check_mesh()
{
  double fit = 0.0, area_err = 0.0, ck = 0.0;
  int violations = 0;
  const TriangleRule &q = triangle_quadrature(14);
  for (int level = 0; level <= 5; ++level)
    for (bool disk : {true, false})
    {
      const auto mesh = builtin_mesh(disk, level);
      violations += static_cast<int>(validate(*mesh).violations.size());
      double area = 0.0;
      for (int k = 0; k < static_cast<int>(mesh->n_triangles()); ++k)
      {
        const ElementMap m = mesh->map(k);
        ck = std::max(ck, m.c_k());
        if (level >= 3)
          for (std::size_t p = 0; p < q.size(); ++p)
            area += q.weights[p] * std::abs(m.eval(q.points[p]).jac.determinant());
      }
      if (level >= 3)
        area_err = std::max(area_err, std::abs(area - (disk ? 1.0 : 2.0) * std::numbers::pi));
      for (const auto &e : mesh->edges())
      {
        if (!e.boundary)
          continue;
        const ElementMap m = mesh->map(e.tri[0]);
        for (int i = 0; i <= 10; ++i)
        {
          const double s = i / 10.0;
          fit = std::max(fit, (m.map(Vec2(1 - s, s)) -
                               mesh->curve().point(e.ta + s * (e.tb - e.ta)))
                                  .norm());
        }
      }
    }
  return {"mesh",
          fit <= 1e-13 && area_err <= 1e-8 && ck <= 0.9 && violations == 0,
          {{"boundary_fit", fit}, {"area_error", area_err}, {"max_ck", ck},
           {"violations", violations}},
          fmt("levels 0..5: boundary fit %.1e, area error %.1e (levels 3..5), max c_K %.3f, "
              "%d validation violations",
              fit, area_err, ck, violations)};
}

CheckResult run_check(const std::string &name)
{
  if (name == "mt-identity")
    return check_mt_identity();
  if (name == "coercivity")
    return check_coercivity();
  if (name == "interpolation")
    return check_interpolation();
  if (name == "poincare")
    return check_poincare();
  if (name == "mesh")
    return check_mesh();
  throw ConfigError("unknown check '" + name + "'");
}

} // namespace ofem
