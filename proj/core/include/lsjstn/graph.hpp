#pragma once

#include <array>
#include <vector>

#include "lsjstn/autodiff.hpp"
#include "lsjstn/matrix.hpp"

namespace lsjstn {

/// Immutable sensor graph: coordinates, pairwise distances and the
/// row-stochastic adjacency for each direction. adj_bwd equals adj_fwd
/// when the graph is undirected.
struct SensorGraph {
  int n_nodes = 0;
  std::vector<std::array<double, 2>> coords;  // empty when built from a distance matrix
  Matrix dist;
  Matrix adj_fwd;
  Matrix adj_bwd;
  bool directed = false;

  int n_directions() const { return directed ? 2 : 1; }
  const Matrix& adj(int direction) const { return direction == 0 ? adj_fwd : adj_bwd; }
};

/// Nodes selected out of a parent graph, with the known/unknown partition
/// used for one training instance. The restricted adjacency is re-normalized.
struct SubgraphSample {
  std::vector<int> node_ids;      // indices into the parent graph
  std::vector<bool> known_mask;   // per subgraph node
  SensorGraph graph;
};

/// A_ij = exp(-dist_ij^2 / sigma^2), entries below threshold zeroed,
/// diagonal forced to 1 (self-loops).
Matrix gaussian_kernel_adjacency(const Matrix& dist, double sigma, double threshold);

/// Row-stochastic D^-1 A. An all-zero row becomes a one-hot self-loop row.
Matrix normalize(const Matrix& adj);

/// Standard deviation of the off-diagonal entries of a distance matrix;
/// the default kernel bandwidth.
double offdiag_std(const Matrix& dist);

/// Builds the graph from a distance matrix. sigma <= 0 selects the
/// offdiag_std default. For directed graphs adj_bwd = normalize(kernel^T).
SensorGraph build_graph(Matrix dist, double sigma, double threshold, bool directed);

/// Euclidean distance matrix from 2-D coordinates, then build_graph.
SensorGraph build_graph_from_coords(std::vector<std::array<double, 2>> coords, double sigma,
                                    double threshold, bool directed);

/// Restriction to node_ids: distances sub-sampled, adjacency rows
/// re-normalized over the kept columns.
SensorGraph restrict_graph(const SensorGraph& g, const std::vector<int>& node_ids);

/// Z = ReLU(sum_{l=1..L} A^l X W^l) with A applied cumulatively.
/// weights[l-1] maps the input width to the output width.
ad::Var graph_conv(ad::Tape& tape, ad::Var x, ad::Var adj, const std::vector<ad::Var>& weights,
                   int order);

/// Z = ReLU(sum_l A^l X Wp^l + Ahat^l X Wd^l); gradients flow through
/// adaptive_adj when it is itself a network output.
ad::Var adaptive_graph_conv(ad::Tape& tape, ad::Var x, ad::Var adj, ad::Var adaptive_adj,
                            const std::vector<ad::Var>& weights_p,
                            const std::vector<ad::Var>& weights_d, int order);

/// One adjacency channel of a graph convolution: sum_{l=1..L} A^l X W^l,
/// no activation. The building block shared by the public convolutions and
/// the recurrent gates.
ad::Var graph_conv_channel(ad::Tape& tape, ad::Var x, ad::Var adj,
                           const std::vector<ad::Var>& weights, int order);

}  // namespace lsjstn
