#include "ofem/experiments.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace ofem
{
namespace
{
constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

// F, F', F'' at q.
using Profile = std::array<double, 3> (*)(double);

std::array<double, 3> sin_exp(double q)
{
  const double s = std::sin(pi * q);
  const double c = std::cos(pi * q);
  const double eq = std::exp(q);
  return {s * eq - pi * (e + 1.0) / (pi * pi + 1.0), eq * (s + pi * c),
          eq * ((1.0 - pi * pi) * s + 2.0 * pi * c)};
}

std::array<double, 3> sextic(double q)
{
  return {q * q * q / 6.0 - q / 2.0 + 5.0 / 24.0, 0.5 * q * q - 0.5, q};
}

std::array<double, 3> q_exp(double q)
{
  const double eq = std::exp(q);
  return {q * eq - 1.0, eq * (1.0 + q), eq * (2.0 + q)};
}

std::array<double, 3> ellipse_sine(double q)
{
  return {0.25 * std::sin(pi * q) - 0.5 / pi, 0.25 * pi * std::cos(pi * q),
          -0.25 * pi * pi * std::sin(pi * q)};
}

FieldJet radial(Profile profile, Mat2 d)
{
  return [profile, d](const Vec2 &x) {
    const Vec2 dx = d * x;
    const auto f = profile(x.dot(dx));
    Jet j;
    j.value = f[0];
    j.grad = 2.0 * f[1] * dx;
    j.hess = 2.0 * f[1] * d + 4.0 * f[2] * dx * dx.transpose();
    return j;
  };
}
} // namespace

MatrixField make_coefficient(CoefficientKind kind)
{
  if (kind == CoefficientKind::identity)
    return [](const Vec2 &) { return Mat2(Mat2::Identity()); };
  return [](const Vec2 &x) {
    const double s = x.x() * x.y() < 0.0 ? -1.0 : 1.0;
    Mat2 a;
    a << 2.0, s, s, 2.0;
    return a;
  };
}

std::string coefficient_name(CoefficientKind kind)
{
  return kind == CoefficientKind::identity ? "identity" : "checkerboard";
}

FieldJet make_solution(SolutionKind kind)
{
  switch (kind)
  {
  case SolutionKind::sin_exp:
    return radial(sin_exp, Mat2::Identity());
  case SolutionKind::sextic:
    return radial(sextic, Mat2::Identity());
  case SolutionKind::q_exp:
    return radial(q_exp, Mat2::Identity());
  case SolutionKind::ellipse_sine:
    return radial(ellipse_sine, Vec2(0.25, 1.0).asDiagonal());
  }
  throw ConfigError("unknown solution");
}

std::string solution_name(SolutionKind kind)
{
  switch (kind)
  {
  case SolutionKind::sin_exp:
    return "sin-exp";
  case SolutionKind::sextic:
    return "sextic";
  case SolutionKind::q_exp:
    return "q-exp";
  case SolutionKind::ellipse_sine:
    return "ellipse-sine";
  }
  return "?";
}

SolutionKind solution_from_name(const std::string &name)
{
  for (SolutionKind k : {SolutionKind::sin_exp, SolutionKind::sextic,
                         SolutionKind::q_exp, SolutionKind::ellipse_sine})
    if (solution_name(k) == name)
      return k;
  throw ConfigError("unknown solution '" + name + "'");
}

ProblemSpec make_problem(const BoundaryCurve &curve, const ObliqueField &field,
                         CoefficientKind coefficient, SolutionKind solution,
                         double epsilon)
{
  ProblemSpec p;
  p.curve = curve;
  p.field = field;
  p.a = make_coefficient(coefficient);
  p.epsilon = epsilon;
  const FieldJet u = make_solution(solution);
  const MatrixField a = p.a;
  p.f = [a, u](const Vec2 &x) { return a(x).cwiseProduct(u(x).hess).sum(); };
  double c = 0.0;
  const int n = 256;
  for (int i = 0; i < n; ++i)
  {
    const double t = curve.period() * i / n;
    c += u(curve.point(t)).grad.dot(field.direction(curve, t));
  }
  p.exact = ExactSolution{u, c / n};
  return p;
}

Experiment builtin_experiment(int id)
{
  Experiment x;
  x.id = id;
  const BoundaryCurve disk = BoundaryCurve::unit_circle();
  switch (id)
  {
  case 1:
    x.coefficient = CoefficientKind::identity;
    x.solution = SolutionKind::sin_exp;
    x.problem = make_problem(disk, ObliqueField::rotate_normal(pi / 4.0),
                             x.coefficient, x.solution, 1.0);
    x.exact_c = -std::sqrt(2.0) * pi * e;
    break;
  case 2:
    x.coefficient = CoefficientKind::checkerboard;
    x.solution = SolutionKind::sextic;
    x.problem = make_problem(disk, ObliqueField::polar_spiral(), x.coefficient,
                             x.solution, 0.6);
    x.exact_c = 0.0;
    break;
  case 3:
    x.coefficient = CoefficientKind::checkerboard;
    x.solution = SolutionKind::q_exp;
    x.problem = make_problem(disk, ObliqueField::rotate_normal(pi / 4.0),
                             x.coefficient, x.solution, 0.6);
    x.exact_c = 2.0 * std::sqrt(2.0) * e;
    break;
  case 4:
    x.coefficient = CoefficientKind::checkerboard;
    x.solution = SolutionKind::ellipse_sine;
    x.problem = make_problem(BoundaryCurve::ellipse(2.0, 1.0),
                             ObliqueField::tangential(), x.coefficient,
                             x.solution, 0.6);
    x.n_boundary = 8;
    x.exact_c = 0.0;
    break;
  default:
    throw ConfigError("no built-in experiment " + std::to_string(id));
  }
  x.problem.exact->c = x.exact_c;
  return x;
}

ConvergenceReport run_convergence(const ProblemSpec &problem, int n_boundary,
                                  int first_level, int last_level,
                                  const LevelObserver &observer)
{
  if (first_level < 0 || last_level < first_level)
    throw ConfigError("empty level range");
  if (!problem.exact)
    throw MissingExactSolution("convergence run needs the exact solution");
  ConvergenceReport report;
  report.exact_c = problem.exact->c;
  int level = first_level;
  try
  {
    CurvedMesh mesh = mesh_at_level(problem.curve, n_boundary, first_level);
    for (; level <= last_level; ++level)
    {
      if (level > first_level)
        mesh = refine(mesh);
      const auto start = std::chrono::steady_clock::now();
      const auto shared = std::make_shared<const CurvedMesh>(mesh);
      const DofMap space = build_space(shared, problem.field, true);
      const AssembledSystem system = assemble_system(space, problem);
      const Solution solution = solve(system, &space);
      const ErrorNorms e = error_norms(solution, problem, space);

      ConvergenceRow row;
      row.level = level;
      for (int k = 0; k < static_cast<int>(mesh.n_triangles()); ++k)
        row.h = std::max(row.h, space.map(k).h());
      row.n_dofs = space.n_dofs();
      row.l2 = e.l2;
      row.h1 = e.h1;
      row.h2 = e.h2;
      row.c_h = solution.c_h;
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report.rows.push_back(row);
      if (observer)
        observer({mesh, space, system, solution, report.rows.back()});
    }
  }
  catch (const LevelFailure &)
  {
    throw;
  }
  catch (const Error &e)
  {
    throw LevelFailure(level, e.what());
  }
  compute_orders(report);
  return report;
}

} // namespace ofem
