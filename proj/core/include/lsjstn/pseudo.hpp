#pragma once

#include <vector>

#include "lsjstn/matrix.hpp"

namespace lsjstn {

/// A reading frame where unknown rows were synthesized by k-IDW.
/// source_mask[i] is true when row i is a real sensor reading.
struct PseudoFrame {
  Matrix values;
  std::vector<bool> source_mask;
};

/// Fills the unknown rows of a frame with the inverse-distance-weighted mean
/// of the k nearest known sensors: sum x_i d_i^-rho / sum d_i^-rho. Known
/// rows pass through unchanged. A zero distance to a known sensor copies
/// that sensor's reading. Ties at the k-th neighbor break toward the lower
/// node index.
PseudoFrame k_idw(const Matrix& frame, const std::vector<bool>& known_mask, const Matrix& dist,
                  int k, double rho);

}  // namespace lsjstn
