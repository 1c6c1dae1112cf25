#pragma once

#include "ofem/assembly.hpp"

#include <iosfwd>
#include <vector>

namespace ofem
{
struct Solution
{
  /// Coefficients over the N space dofs.
  Eigen::VectorXd u;
  double c_h = 0.0;
  double multiplier = 0.0;
  /// ||K x - b|| / ||b|| (or ||K x|| when b = 0).
  double residual = 0.0;
  /// Nonzeros of the L and U factors.
  long fill = 0;
};

/// Sparse LU (COLAMD ordering) on the bordered system, followed by checks of
/// the algebraic residual (<= 1e-10), the zero-mean condition and, when
/// `space` is given, grad u_h . l = c_h at all boundary vertices.
/// Throws SingularSystem.
Solution solve(const AssembledSystem &system, const DofMap *space = nullptr);

/// Largest |grad u_h(a_i) . l(a_i) - c| over boundary vertices, gradients
/// evaluated from every element containing a_i.
double boundary_constraint_defect(const DofMap &space, const Eigen::VectorXd &u,
                                  double c);

struct ErrorNorms
{
  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0; // broken
};

/// Errors of the member u_h against the exact jet after shifting both to
/// zero mean.
ErrorNorms error_norms(const DofMap &space, const Eigen::VectorXd &u_h,
                       const FieldJet &exact, int degree = 14);

/// Same, taking the exact solution from the problem.
/// Throws MissingExactSolution.
ErrorNorms error_norms(const Solution &solution, const ProblemSpec &problem,
                       const DofMap &space);

struct ConvergenceRow
{
  int level = 0;
  double h = 0.0;
  int n_dofs = 0;
  double l2 = 0.0, l2_order = 0.0;
  double h1 = 0.0, h1_order = 0.0;
  double h2 = 0.0, h2_order = 0.0;
  double c_h = 0.0;
  double seconds = 0.0;
};

struct ConvergenceReport
{
  std::vector<ConvergenceRow> rows;
  double exact_c = 0.0;

  /// `h,l2,l2_order,h1,h1_order,h2,h2_order,c_h`, 6 significant digits.
  void write_csv(std::ostream &os) const;
};

/// log(e_{i-1}/e_i) / log(h_{i-1}/h_i); the first order is 0.
std::vector<double> eoc(const std::vector<double> &h, const std::vector<double> &e);

/// Fills the order columns of all rows.
void compute_orders(ConvergenceReport &report);

/// Reference coefficients of the L2(K-hat) projection of u o F_K onto P3.
LocalVector l2_project(const ElementMap &map, const std::function<double(const Vec2 &)> &u,
                       int degree = 14);

/// Averaged local projections. On a constrained space the shared constant is
/// the mean of the averaged l-derivatives over the boundary vertices.
Eigen::VectorXd quasi_interp(const DofMap &space,
                             const std::function<double(const Vec2 &)> &u);

/// Constrained quasi-interpolation: boundary gradients c_u l + (averaged
/// l-perp derivative) l-perp, shared constant c_u, then shifted to zero mean.
Eigen::VectorXd quasi_interp_oblique(const DofMap &space,
                                     const std::function<double(const Vec2 &)> &u,
                                     double c_u);

/// Coefficients of the constant function `value`.
Eigen::VectorXd constant_member(const DofMap &space, double value);

/// ||.||_h Gram matrix: sum_K (D^2 phi_j, D^2 phi_i) + chi0 sum_F int grad phi_j . grad phi_i.
SparseMatrix assemble_norm_matrix(const DofMap &space, double chi0, int degree = 10,
                                  int edge_points = 10);

/// max over v of |b_h(w, v) - l_h(v)| / ||v||_h on the constrained space,
/// with v ranging over members orthogonal to the mean vector.
double consistency_dual_norm(const AssembledSystem &system, const DofMap &space,
                             const Eigen::VectorXd &w);

} // namespace ofem
