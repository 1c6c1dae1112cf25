#pragma once

#include "ofem/solver.hpp"

#include <functional>
#include <string>

namespace ofem
{
enum class CoefficientKind
{
  identity,
  /// [[2, s], [s, 2]] with s = sign(x1 x2) and sign(0) = +1.
  checkerboard
};

MatrixField make_coefficient(CoefficientKind kind);
std::string coefficient_name(CoefficientKind kind);

/// Manufactured solutions of the form u(x) = F(x^T D x).
enum class SolutionKind
{
  sin_exp,      // sin(pi q) e^q - pi (e + 1) / (pi^2 + 1), D = I
  sextic,       // q^3/6 - q/2 + 5/24, D = I
  q_exp,        // q e^q - 1, D = I
  ellipse_sine  // sin(pi q)/4 - 1/(2 pi), D = diag(1/4, 1)
};

FieldJet make_solution(SolutionKind kind);
std::string solution_name(SolutionKind kind);
SolutionKind solution_from_name(const std::string &name);

/// Problem with f := A : D^2 u and c := mean of grad u . l over 256 boundary
/// samples.
ProblemSpec make_problem(const BoundaryCurve &curve, const ObliqueField &field,
                         CoefficientKind coefficient, SolutionKind solution,
                         double epsilon);

struct Experiment
{
  int id = 0;
  CoefficientKind coefficient = CoefficientKind::identity;
  SolutionKind solution = SolutionKind::sin_exp;
  ProblemSpec problem;
  int n_boundary = 6;
  int first_level = 1;
  int last_level = 5;
  /// Closed-form boundary constant.
  double exact_c = 0.0;
};

/// Built-in experiments 1-4. Throws ConfigError for other ids.
Experiment builtin_experiment(int id);

/// Module error raised while processing one level of a convergence run.
class LevelFailure : public Error
{
public:
  LevelFailure(int level, const std::string &what)
      : Error("level " + std::to_string(level) + ": " + what), level_(level)
  {
  }
  int level() const { return level_; }

private:
  int level_;
};

/// Everything produced for one level, handed to the observer.
struct LevelResult
{
  const CurvedMesh &mesh;
  const DofMap &space;
  const AssembledSystem &system;
  const Solution &solution;
  const ConvergenceRow &row;
};

using LevelObserver = std::function<void(const LevelResult &)>;

/// Meshes, assembles, solves and measures errors on levels first..last of
/// the fan mesh with n_boundary boundary vertices. Needs an exact solution.
/// Throws LevelFailure wrapping any module error.
ConvergenceReport run_convergence(const ProblemSpec &problem, int n_boundary,
                                  int first_level, int last_level,
                                  const LevelObserver &observer = {});

} // namespace ofem
