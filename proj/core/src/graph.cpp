#include "lsjstn/graph.hpp"

#include <cmath>
#include <utility>

namespace lsjstn {

Matrix gaussian_kernel_adjacency(const Matrix& dist, double sigma, double threshold) {
  if (sigma <= 0.0) throw ValueError("gaussian_kernel_adjacency: sigma must be > 0");
  if (dist.rows() != dist.cols())
    throw ShapeError("gaussian_kernel_adjacency: dist must be square, got " +
                     shape_str(dist.rows(), dist.cols()));
  const int n = dist.rows();
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = dist(i, j);
      if (d < 0.0) throw ValueError("gaussian_kernel_adjacency: negative distance");
      const double w = std::exp(-(d * d) / (sigma * sigma));
      a(i, j) = w < threshold ? 0.0 : w;
    }
  for (int i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

Matrix normalize(const Matrix& adj) {
  if (adj.rows() != adj.cols())
    throw ShapeError("normalize: adjacency must be square, got " + shape_str(adj.rows(), adj.cols()));
  const int n = adj.rows();
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (adj(i, j) < 0.0) throw ValueError("normalize: negative adjacency entry");
      s += adj(i, j);
    }
    if (s == 0.0) {
      out(i, i) = 1.0;  // isolated node keeps a self-loop
    } else {
      for (int j = 0; j < n; ++j) out(i, j) = adj(i, j) / s;
    }
  }
  return out;
}

double offdiag_std(const Matrix& dist) {
  const int n = dist.rows();
  if (n < 2) return 1.0;
  double mean = 0.0;
  int count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        mean += dist(i, j);
        ++count;
      }
  mean /= count;
  double var = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        const double d = dist(i, j) - mean;
        var += d * d;
      }
  return std::sqrt(var / count);
}

SensorGraph build_graph(Matrix dist, double sigma, double threshold, bool directed) {
  if (dist.rows() != dist.cols())
    throw ShapeError("build_graph: dist must be square, got " + shape_str(dist.rows(), dist.cols()));
  for (int i = 0; i < dist.rows(); ++i) {
    if (dist(i, i) != 0.0) throw ValueError("build_graph: dist diagonal must be zero");
    for (int j = 0; j < dist.cols(); ++j)
      if (dist(i, j) < 0.0) throw ValueError("build_graph: negative distance");
  }
  if (!directed) {
    for (int i = 0; i < dist.rows(); ++i)
      for (int j = i + 1; j < dist.cols(); ++j)
        if (dist(i, j) != dist(j, i))
          throw ValueError("build_graph: undirected graph needs a symmetric distance matrix");
  }
  SensorGraph g;
  g.n_nodes = dist.rows();
  g.directed = directed;
  if (sigma <= 0.0) sigma = offdiag_std(dist);
  if (sigma <= 0.0) sigma = 1.0;  // all distances zero
  const Matrix kernel = gaussian_kernel_adjacency(dist, sigma, threshold);
  g.adj_fwd = normalize(kernel);
  g.adj_bwd = directed ? normalize(transpose(kernel)) : g.adj_fwd;
  g.dist = std::move(dist);
  return g;
}

SensorGraph build_graph_from_coords(std::vector<std::array<double, 2>> coords, double sigma,
                                    double threshold, bool directed) {
  const int n = static_cast<int>(coords.size());
  Matrix dist(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dx = coords[i][0] - coords[j][0];
      const double dy = coords[i][1] - coords[j][1];
      dist(i, j) = std::sqrt(dx * dx + dy * dy);
    }
  SensorGraph g = build_graph(std::move(dist), sigma, threshold, directed);
  g.coords = std::move(coords);
  return g;
}

SensorGraph restrict_graph(const SensorGraph& g, const std::vector<int>& node_ids) {
  const int m = static_cast<int>(node_ids.size());
  SensorGraph out;
  out.n_nodes = m;
  out.directed = g.directed;
  out.dist = Matrix(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.dist(i, j) = g.dist(node_ids[i], node_ids[j]);
  Matrix fwd(m, m), bwd(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      fwd(i, j) = g.adj_fwd(node_ids[i], node_ids[j]);
      bwd(i, j) = g.adj_bwd(node_ids[i], node_ids[j]);
    }
  out.adj_fwd = normalize(fwd);
  out.adj_bwd = g.directed ? normalize(bwd) : out.adj_fwd;
  if (!g.coords.empty()) {
    out.coords.reserve(m);
    for (int id : node_ids) out.coords.push_back(g.coords[id]);
  }
  return out;
}

ad::Var graph_conv_channel(ad::Tape& tape, ad::Var x, ad::Var adj,
                           const std::vector<ad::Var>& weights, int order) {
  if (order < 1) throw ValueError("graph_conv: order must be >= 1");
  if (static_cast<int>(weights.size()) != order)
    throw ShapeError("graph_conv: expected " + std::to_string(order) + " weight matrices, got " +
                     std::to_string(weights.size()));
  ad::Var propagated = x;
  ad::Var acc;
  for (int l = 0; l < order; ++l) {
    propagated = tape.matmul(adj, propagated);
    ad::Var term = tape.matmul(propagated, weights[l]);
    acc = l == 0 ? term : tape.add(acc, term);
  }
  return acc;
}

ad::Var graph_conv(ad::Tape& tape, ad::Var x, ad::Var adj, const std::vector<ad::Var>& weights,
                   int order) {
  return tape.relu(graph_conv_channel(tape, x, adj, weights, order));
}

ad::Var adaptive_graph_conv(ad::Tape& tape, ad::Var x, ad::Var adj, ad::Var adaptive_adj,
                            const std::vector<ad::Var>& weights_p,
                            const std::vector<ad::Var>& weights_d, int order) {
  ad::Var pre = graph_conv_channel(tape, x, adj, weights_p, order);
  ad::Var adp = graph_conv_channel(tape, x, adaptive_adj, weights_d, order);
  return tape.relu(tape.add(pre, adp));
}

}  // namespace lsjstn
