#pragma once

#include <vector>

#include "lsjstn/matrix.hpp"

namespace lsjstn {

/// T consecutive frames of node readings with the known/unknown partition
/// fixed for the window. target frame = frames.back().
struct ReadingWindow {
  std::vector<Matrix> frames;      // T entries, each NxD
  std::vector<bool> known_mask;    // N, true = real sensor available
  std::vector<bool> target_valid;  // N, entries excluded from loss/metrics when false; empty = all valid
  long target_index = -1;          // absolute frame index of the target in the source series
};

}  // namespace lsjstn
