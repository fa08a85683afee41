#pragma once

#include "agg/grid.hpp"

namespace agg {

/// In-place unnormalized forward DFT over all axes of the grid.
void fft_forward(const Grid& grid, Eigen::ArrayXcd& data);

/// In-place inverse DFT including the 1/n^d factor.
void fft_inverse(const Grid& grid, Eigen::ArrayXcd& data);

}  // namespace agg
