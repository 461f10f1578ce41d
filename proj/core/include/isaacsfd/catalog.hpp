#pragma once

#include <map>
#include <string>
#include <vector>

#include "isaacsfd/problem.hpp"

namespace isaacsfd {

/// Built-in problem instances selected by name. Unknown names or
/// parameter keys raise ConfigError.
///
///   poisson-ball        singleton controls, a = I, constant forcing;
///                       carries the exact solution on built-in domains
///   variable-linear     singleton, rotating anisotropic a(x) in S_delta
///   bellman-2           |A| = 2, |B| = 1
///   isaacs-2x2          |A| = |B| = 2 with genuinely nonconvex sup-inf
///   manufactured-isaacs isaacs-2x2 forced so a chosen v_exact (vanishing
///                       on the boundary) solves the equation exactly
IsaacsProblem make_catalog_problem(const std::string& name,
                                   const std::map<std::string, double>& params,
                                   const Domain& domain);

std::vector<std::string> catalog_names();

}  // namespace isaacsfd
