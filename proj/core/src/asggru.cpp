#include "lsjstn/asggru.hpp"

namespace lsjstn {

namespace {

ad::Var encode(ad::Tape& tape, ad::Var x_t, ad::Var concat_input,
               const std::vector<ad::Var>& adjs, const EncoderParamsT<ad::Var>& enc, int order) {
  ad::Var g;
  for (std::size_t d = 0; d < adjs.size(); ++d) {
    ad::Var ch = graph_conv_channel(tape, concat_input, adjs[d], enc.conv[d], order);
    g = d == 0 ? ch : tape.add(g, ch);
  }
  ad::Var node_feat = tape.add_rowvec(tape.matmul(x_t, enc.fc_w), enc.fc_b);
  return tape.tanh(tape.hadamard(g, node_feat));
}

ad::Var gate_preactivation(ad::Tape& tape, ad::Var concat_input, const std::vector<ad::Var>& adjs,
                           ad::Var adaptive_adj, const GateParamsT<ad::Var>& gate, int order) {
  ad::Var s;
  for (std::size_t d = 0; d < adjs.size(); ++d) {
    ad::Var ch = graph_conv_channel(tape, concat_input, adjs[d], gate.pre[d], order);
    s = d == 0 ? ch : tape.add(s, ch);
  }
  s = tape.add(s, graph_conv_channel(tape, concat_input, adaptive_adj, gate.adp, order));
  return tape.add_rowvec(s, gate.bias);
}

}  // namespace

ad::Var adjacency_scores(ad::Tape& tape, ad::Var m1, ad::Var m2, double alpha) {
  ad::Var s = tape.sub(tape.matmul(m1, tape.transpose(m2)), tape.matmul(m2, tape.transpose(m1)));
  return tape.relu(tape.tanh(tape.scale(s, alpha)));
}

ad::Var adaptive_adjacency(ad::Tape& tape, ad::Var x_t, ad::Var h_prev,
                           const std::vector<ad::Var>& adjs, const AsgGruParamsT<ad::Var>& params,
                           double alpha, AdaptiveNorm norm, int order) {
  ad::Var xc = tape.concat_cols(x_t, h_prev);
  ad::Var m1 = encode(tape, x_t, xc, adjs, params.enc_src, order);
  ad::Var m2 = encode(tape, x_t, xc, adjs, params.enc_dst, order);
  ad::Var a = adjacency_scores(tape, m1, m2, alpha);
  return norm == AdaptiveNorm::row ? tape.row_normalize(a) : a;
}

RecurrentState gru_step(ad::Tape& tape, ad::Var x_t, const RecurrentState& prev,
                        const std::vector<ad::Var>& adjs, ad::Var adaptive_adj,
                        const AsgGruParamsT<ad::Var>& params, int order) {
  ad::Var xc = tape.concat_cols(x_t, prev.h);
  ad::Var r = tape.sigmoid(gate_preactivation(tape, xc, adjs, adaptive_adj, params.gate_r, order));
  ad::Var u = tape.sigmoid(gate_preactivation(tape, xc, adjs, adaptive_adj, params.gate_u, order));
  ad::Var xc_reset = tape.concat_cols(x_t, tape.hadamard(prev.h, r));
  ad::Var c =
      tape.tanh(gate_preactivation(tape, xc_reset, adjs, adaptive_adj, params.gate_c, order));
  ad::Var ones = tape.input(Matrix::ones(u.rows(), u.cols()));
  ad::Var h = tape.add(tape.hadamard(u, prev.h), tape.hadamard(tape.sub(ones, u), c));
  return {h, prev.step_time};
}

ad::Var long_term_head(ad::Tape& tape, ad::Var h, const AsgGruParamsT<ad::Var>& params) {
  return tape.add_rowvec(tape.matmul(h, params.W_fl), params.b_fl);
}

UnrollResult unroll(ad::Tape& tape, const std::vector<ad::Var>& frames, ad::Var short_term_out,
                    const std::vector<ad::Var>& adjs, const AsgGruParamsT<ad::Var>& params,
                    int t_k, double alpha, AdaptiveNorm norm, int order, int hidden) {
  const int t_len = static_cast<int>(frames.size());
  if (t_len < 1) throw ValueError("unroll: empty window");
  if (t_k < 1) throw ValueError("unroll: T_k must be >= 1");
  if (t_len > 1) {
    if (t_k >= t_len) throw ValueError("unroll: T_k must be smaller than the window length");
    if ((t_len - 1) % t_k != 0)
      throw ValueError("unroll: window length minus one must be divisible by T_k");
  }
  const int n = short_term_out.rows();
  UnrollResult out;
  RecurrentState state{tape.input(Matrix::zeros(n, hidden)), 0};
  for (int ti = 0; ti < t_len; ti += (t_len == 1 ? 1 : t_k)) {
    ad::Var x = ti == t_len - 1 ? short_term_out : frames[ti];
    ad::Var ahat = adaptive_adjacency(tape, x, state.h, adjs, params, alpha, norm, order);
    state = gru_step(tape, x, state, adjs, ahat, params, order);
    state.step_time = ti;
    out.adaptive_snaps.push_back(ahat);
    out.step_frames.push_back(ti);
    if (t_len == 1) break;
  }
  out.y_long = long_term_head(tape, state.h, params);
  return out;
}

}  // namespace lsjstn
