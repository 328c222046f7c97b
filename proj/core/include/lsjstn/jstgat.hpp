#pragma once

#include <vector>

#include "lsjstn/autodiff.hpp"
#include "lsjstn/graph.hpp"

namespace lsjstn {

template <typename M>
struct AttentionParamsT {
  M W_a;  // DxF
  M U_a;  // DxF
  M v_a;  // 1xF
  M b_a;  // 1xF
};

/// Short-term component parameters. Attention weights and per-order
/// convolution weights are per graph direction; one bias stack is shared.
template <typename M>
struct JstGatParamsT {
  std::vector<AttentionParamsT<M>> attn;  // [direction]
  std::vector<std::vector<M>> W_s;        // [direction][order], DxF
  std::vector<M> b_s;                     // [order], 1xF
  M W_fs;                                 // FxD
  M b_fs;                                 // 1xD
};

using JstGatParams = JstGatParamsT<Matrix>;
using BoundJstGatParams = JstGatParamsT<ad::Var>;

/// Attention maps between target-time sensors (rows) and historical sensors
/// (columns), one NxN map per frame offset and direction, ordered oldest
/// frame first.
struct AttentionMaps {
  std::vector<std::vector<ad::Var>> maps;  // [direction][frame index]
  std::vector<int> frame_offsets;          // T_s .. 0, aligned with frame index
};

/// Row-stochastic joint spatiotemporal attention between the target frame
/// and one neighbor frame: softmax_j of v_a . tanh(W_a x_T^i + U_a x_t^j + b_a).
ad::Var attention_scores(ad::Tape& tape, ad::Var target_frame, ad::Var neighbor_frame,
                         const AttentionParamsT<ad::Var>& params);

/// Multiplies the map at frame offset m by e^(-m*lambda). Applied after the
/// softmax normalization, so rescaled rows sum to the decay factor.
AttentionMaps rescale_maps(ad::Tape& tape, const AttentionMaps& maps, double lambda);

/// Attention-modulated graph convolution summed over the short-term frames:
/// Z^l_t = gamma X_t + mu (E_t . A) Z^(l-1)_t, Z0 = X_t,
/// Z_out = sum_t ReLU(sum_l Z^l_t W_s^l + b_s^l). Directed graphs run one
/// recursion per direction and sum the projections inside the activation.
ad::Var joint_st_conv(ad::Tape& tape, const std::vector<ad::Var>& frames,
                      const AttentionMaps& maps, const std::vector<ad::Var>& adjs,
                      const JstGatParamsT<ad::Var>& params, double gamma, double mu, int order);

/// Y_s = Z_out W_fs + b_fs, no activation.
ad::Var short_term_head(ad::Tape& tape, ad::Var z_out, const JstGatParamsT<ad::Var>& params);

struct ShortTermResult {
  ad::Var y_short;     // NxD
  AttentionMaps maps;  // rescaled
};

/// Full short-term pass over the last T_s+1 pseudo-filled frames
/// (oldest first, target last).
ShortTermResult short_term_forward(ad::Tape& tape, const std::vector<ad::Var>& frames,
                                   const std::vector<ad::Var>& adjs,
                                   const JstGatParamsT<ad::Var>& params, double lambda,
                                   double gamma, double mu, int order);

}  // namespace lsjstn
