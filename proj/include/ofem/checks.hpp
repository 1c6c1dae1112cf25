#pragma once

#include "ofem/experiments.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ofem
{
/// Outcome of one property suite.
struct CheckResult
{
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::string detail;
};

/// Coefficients uniform in [-1, 1].
Eigen::VectorXd random_member(const DofMap &space, std::uint64_t seed);

/// Discrete Miranda-Talenti identity: 20 random members on level-2 disk and
/// ellipse meshes for each oblique field kind; max residual <= 1e-6.
CheckResult check_mt_identity();

/// Coercivity with constant 1 - sqrt(1 - eps) for the Experiment 1 and 2
/// settings, 20 random constrained members on the level-2 disk.
CheckResult check_coercivity();

/// Pi_h^l of Experiment 1's solution on levels first..last: H2 order at the
/// finest step in [1.7, 2.3] and the boundary constraint within 1e-12.
CheckResult check_interpolation(int first_level = 1, int last_level = 4);

/// Poincare-type inequality on every curved element, levels 0-2, both
/// built-in domains, 20 random cubics each.
CheckResult check_poincare();

/// Boundary fit, area and c_K on the built-in meshes, levels 0-5, plus
/// validate() diagnostics.
CheckResult check_mesh();

/// Runs a check by its CLI name. Throws ConfigError for unknown names.
CheckResult run_check(const std::string &name);

} // namespace ofem
