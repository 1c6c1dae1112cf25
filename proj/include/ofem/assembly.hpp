#pragma once

#include "ofem/fem.hpp"

#include <Eigen/Sparse>

#include <cstdint>
#include <iosfwd>
#include <optional>

namespace ofem
{
using SparseMatrix = Eigen::SparseMatrix<double>;
using MatrixField = std::function<Mat2(const Vec2 &)>;
using ScalarField = std::function<double(const Vec2 &)>;

struct ExactSolution
{
  FieldJet u;
  /// Boundary constant grad u . l.
  double c = 0.0;
};

/// A:D^2 u = f in the domain, l . grad u = c on the boundary, mean of u zero.
struct ProblemSpec
{
  BoundaryCurve curve = BoundaryCurve::unit_circle();
  ObliqueField field = ObliqueField::rotate_normal(0.0);
  MatrixField a;
  ScalarField f;
  /// Cordes parameter in (0, 1].
  double epsilon = 1.0;
  /// Scheme parameter; defaults to epsilon.
  std::optional<double> epsilon_tilde;
  std::optional<ExactSolution> exact;
  int volume_degree = 10;
  int edge_points = 10;

  /// gamma = tr A / |A|^2 (Frobenius).
  double gamma(const Vec2 &x) const;
  double scheme_epsilon() const { return epsilon_tilde.value_or(epsilon); }
};

/// (2 - sqrt(1 - eps_tilde)) / 2 after checking
/// sqrt(1 - eps_tilde) + (1 - eps) / sqrt(1 - eps_tilde) < 2 for eps_tilde != eps.
/// Throws BadEpsilonTilde.
double stabilization_factor(double epsilon, double epsilon_tilde);

struct SpotCheck
{
  bool elliptic = true;
  bool cordes = true;
  bool gamma_positive = true;
  /// max |A|^2 / (tr A)^2 over the samples.
  double max_cordes_ratio = 0.0;
  bool ok() const { return elliptic && cordes && gamma_positive; }
};

/// Uniform ellipticity on `n_elliptic` random (x, xi) pairs, Cordes bound and
/// gamma > 0 on `n_cordes` random points of the domain.
SpotCheck spot_check(const ProblemSpec &problem, std::uint64_t seed = 1,
                     int n_elliptic = 100, int n_cordes = 1000);

/// Sum_K (gamma A : D^2 phi_j, Lap phi_i)_K at (i, j).
SparseMatrix assemble_volume(const DofMap &space, const ProblemSpec &problem);

/// s_h(phi_j, phi_i) at (i, j), with the field of `space`.
SparseMatrix assemble_stabilization(const DofMap &space, int edge_points = 10);

/// Sum_K (gamma f, Lap phi_i)_K.
Eigen::VectorXd assemble_rhs(const DofMap &space, const ProblemSpec &problem);

/// m_i = integral of phi_i over the domain.
Eigen::VectorXd assemble_mean_vector(const DofMap &space, int degree = 10);

struct AssembledSystem
{
  /// (N + 1) x (N + 1): b_h block bordered by the mean vector.
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  Eigen::VectorXd mean;
  int n_dofs = 0;
  int c_dof = -1;
  double stabilization_factor = 1.0;
};

AssembledSystem assemble_system(const DofMap &space, const ProblemSpec &problem);

/// Integrals entering the discrete Miranda-Talenti identity and the energy.
struct FormTerms
{
  double laplace_sq = 0.0;    // sum_K ||Lap v||^2
  double hessian_sq = 0.0;    // sum_K |v|^2_{H^2(K)}
  double jump = 0.0;          // sum_{F int} int [dv/dn] d2v/dt2
  double boundary_mt = 0.0;   // sum_{F bd} int |grad v|^2 (theta_dot - chi)
  double boundary_cross = 0.0; // sum_{F bd} int dv/dl_perp (dv/dl)'
  double boundary_grad_sq = 0.0; // sum_{F bd} int |grad v|^2
  double volume_form = 0.0;   // sum_K (gamma A : D^2 v, Lap v)_K
};

/// Direct quadrature of all FormTerms for the member u. volume_form is only
/// evaluated when `problem` is given.
FormTerms form_terms(const DofMap &space, const Eigen::VectorXd &u,
                     const ProblemSpec *problem = nullptr, int degree = 10,
                     int edge_points = 10);

/// |LHS - RHS| relative to the larger of LHS and the sum of |RHS terms| for the
/// discrete Miranda-Talenti identity; 0 when both vanish to roundoff.
double mt_identity_residual(const DofMap &space, const Eigen::VectorXd &u);

struct Energy
{
  double bilinear = 0.0;   // b_h(v, v)
  double norm_sq = 0.0;    // ||v||_h^2
  double stabilization = 0.0; // s_h(v, v)
  double laplace_sq = 0.0; // sum_K ||Lap v||^2
};

/// Energy quantities with chi0 = min(theta_dot - chi) of the problem's field.
Energy energy(const DofMap &space, const ProblemSpec &problem,
              const Eigen::VectorXd &u);

/// MatrixMarket coordinate real general.
void write_matrix_market(std::ostream &os, const SparseMatrix &m);

} // namespace ofem
