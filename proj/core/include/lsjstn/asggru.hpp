#pragma once

#include <vector>

#include "lsjstn/autodiff.hpp"
#include "lsjstn/graph.hpp"

namespace lsjstn {

/// Row treatment of the learned adaptive adjacency before it enters the
/// gate convolutions.
enum class AdaptiveNorm { none, row };

/// One node encoder of the adaptive-graph generator: a per-direction graph
/// convolution stack over the concatenated (D+F)-channel input, gated by a
/// node-feature map of the raw readings.
template <typename M>
struct EncoderParamsT {
  std::vector<std::vector<M>> conv;  // [direction][order], (D+F)xF
  M fc_w;                            // DxF
  M fc_b;                            // 1xF
};

/// One GRU gate: pre-defined-adjacency weight stacks per direction plus an
/// adaptive-adjacency stack, and a bias.
template <typename M>
struct GateParamsT {
  std::vector<std::vector<M>> pre;  // [direction][order], (D+F)xF
  std::vector<M> adp;               // [order], (D+F)xF
  M bias;                           // 1xF
};

template <typename M>
struct AsgGruParamsT {
  EncoderParamsT<M> enc_src, enc_dst;
  GateParamsT<M> gate_r, gate_u, gate_c;
  M W_fl;  // FxD
  M b_fl;  // 1xD
};

using AsgGruParams = AsgGruParamsT<Matrix>;
using BoundAsgGruParams = AsgGruParamsT<ad::Var>;

/// Hidden state carried between skip steps.
struct RecurrentState {
  ad::Var h;          // NxF
  int step_time = 0;  // frame index within the window
};

/// ReLU(tanh(alpha (M1 M2^T - M2 M1^T))): antisymmetric scores, so the
/// result never contains a symmetric edge pair and has a zero diagonal.
ad::Var adjacency_scores(ad::Tape& tape, ad::Var m1, ad::Var m2, double alpha);

/// Inductive adaptive adjacency from the current frame and the previous
/// hidden state. Row normalization (when selected) leaves all-zero rows zero.
ad::Var adaptive_adjacency(ad::Tape& tape, ad::Var x_t, ad::Var h_prev,
                           const std::vector<ad::Var>& adjs, const AsgGruParamsT<ad::Var>& params,
                           double alpha, AdaptiveNorm norm, int order);

/// One skip-GRU update. Gate convolutions run over the column-concatenation
/// of the input frame and the previous hidden state, through both the
/// pre-defined and the adaptive adjacency.
RecurrentState gru_step(ad::Tape& tape, ad::Var x_t, const RecurrentState& prev,
                        const std::vector<ad::Var>& adjs, ad::Var adaptive_adj,
                        const AsgGruParamsT<ad::Var>& params, int order);

/// Y_l = H W_fl + b_fl.
ad::Var long_term_head(ad::Tape& tape, ad::Var h, const AsgGruParamsT<ad::Var>& params);

struct UnrollResult {
  ad::Var y_long;                       // NxD
  std::vector<ad::Var> adaptive_snaps;  // one per recurrent step
  std::vector<int> step_frames;         // frame indices of the steps
};

/// Runs the recurrence over frame indices {0, T_k, ..., T-1}. Only those
/// entries of frames are read; the final step consumes short_term_out
/// instead of the stored frame. The hidden state starts at zero.
UnrollResult unroll(ad::Tape& tape, const std::vector<ad::Var>& frames, ad::Var short_term_out,
                    const std::vector<ad::Var>& adjs, const AsgGruParamsT<ad::Var>& params,
                    int t_k, double alpha, AdaptiveNorm norm, int order, int hidden);

}  // namespace lsjstn
