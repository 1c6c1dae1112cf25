#pragma once

#include "ofem/solver.hpp"

#include <iosfwd>
#include <string>

namespace ofem
{
/// Log-log plot of the L2, H1 and broken H2 errors against h with slope-2
/// reference triangles at the finest step. Output depends only on the
/// report values.
void write_convergence_svg(std::ostream &os, const ConvergenceReport &report,
                           const std::string &title);

} // namespace ofem
