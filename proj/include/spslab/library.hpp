#pragma once

#include "spslab/problems.hpp"

#include <string>
#include <vector>

namespace spslab {

/// A named desk-scale instance with certified metadata.
struct ProblemInstance {
    std::string name;
    std::string description;
    FiniteSumProblem problem;
    /// The sets behind sq_dist components, in component order (empty otherwise).
    std::vector<ConvexSetPtr> sets;
};

/// All named instances. Each one certifies its case label, lower bounds and
/// (where applicable) the optimum of the full objective.
std::vector<std::string> library_instance_names();
ProblemInstance make_library_instance(const std::string& name);

} // namespace spslab
