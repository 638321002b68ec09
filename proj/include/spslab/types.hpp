#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace spslab {

using Vector = Eigen::VectorXd;
using Index = int;

// A batch is a sorted list of 0-based component indices.
using Batch = std::vector<Index>;

} // namespace spslab
