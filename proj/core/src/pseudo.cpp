#include "lsjstn/pseudo.hpp"

#include <algorithm>
#include <cmath>

namespace lsjstn {

PseudoFrame k_idw(const Matrix& frame, const std::vector<bool>& known_mask, const Matrix& dist,
                  int k, double rho) {
  const int n = frame.rows();
  if (static_cast<int>(known_mask.size()) != n)
    throw ShapeError("k_idw: mask size " + std::to_string(known_mask.size()) + ", frame " +
                     shape_str(frame.rows(), frame.cols()));
  if (dist.rows() != n || dist.cols() != n)
    throw ShapeError("k_idw: dist " + shape_str(dist.rows(), dist.cols()) + ", frame " +
                     shape_str(frame.rows(), frame.cols()));
  if (rho <= 0.0) throw ValueError("k_idw: rho must be > 0");
  if (k < 1) throw ValueError("k_idw: k must be >= 1");

  std::vector<int> known;
  for (int i = 0; i < n; ++i)
    if (known_mask[i]) known.push_back(i);
  if (static_cast<int>(known.size()) < k)
    throw ValueError("k_idw: need at least k=" + std::to_string(k) + " known sensors, have " +
                     std::to_string(known.size()));

  PseudoFrame out{frame, known_mask};
  std::vector<int> neighbors(known);
  for (int i = 0; i < n; ++i) {
    if (known_mask[i]) continue;
    // k nearest known sensors, ties by lower node index
    std::partial_sort(neighbors.begin(), neighbors.begin() + k, neighbors.end(),
                      [&](int a, int b) {
                        if (dist(i, a) != dist(i, b)) return dist(i, a) < dist(i, b);
                        return a < b;
                      });
    int colocated = -1;
    for (int m = 0; m < k; ++m)
      if (dist(i, neighbors[m]) == 0.0) {
        colocated = colocated < 0 ? neighbors[m] : std::min(colocated, neighbors[m]);
      }
    if (colocated >= 0) {
      for (int c = 0; c < frame.cols(); ++c) out.values(i, c) = frame(colocated, c);
      continue;
    }
    double wsum = 0.0;
    std::vector<double> acc(frame.cols(), 0.0);
    for (int m = 0; m < k; ++m) {
      const int j = neighbors[m];
      const double w = std::pow(dist(i, j), -rho);
      wsum += w;
      for (int c = 0; c < frame.cols(); ++c) acc[c] += w * frame(j, c);
    }
    for (int c = 0; c < frame.cols(); ++c) out.values(i, c) = acc[c] / wsum;
  }
  return out;
}

}  // namespace lsjstn
