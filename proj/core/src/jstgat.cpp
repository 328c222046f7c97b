#include "lsjstn/jstgat.hpp"

#include <cmath>

namespace lsjstn {

ad::Var attention_scores(ad::Tape& tape, ad::Var target_frame, ad::Var neighbor_frame,
                         const AttentionParamsT<ad::Var>& params) {
  if (target_frame.rows() != neighbor_frame.rows())
    throw ShapeError("attention_scores: target " +
                     shape_str(target_frame.rows(), target_frame.cols()) + ", neighbor " +
                     shape_str(neighbor_frame.rows(), neighbor_frame.cols()));
  ad::Var p = tape.matmul(target_frame, params.W_a);
  ad::Var q = tape.matmul(neighbor_frame, params.U_a);
  ad::Var raw = tape.pair_score(p, q, params.b_a, params.v_a);
  return tape.softmax_rows(raw);
}

AttentionMaps rescale_maps(ad::Tape& tape, const AttentionMaps& maps, double lambda) {
  AttentionMaps out;
  out.frame_offsets = maps.frame_offsets;
  out.maps.resize(maps.maps.size());
  for (std::size_t d = 0; d < maps.maps.size(); ++d) {
    out.maps[d].reserve(maps.maps[d].size());
    for (std::size_t m = 0; m < maps.maps[d].size(); ++m) {
      const double factor = std::exp(-static_cast<double>(maps.frame_offsets[m]) * lambda);
      out.maps[d].push_back(tape.scale(maps.maps[d][m], factor));
    }
  }
  return out;
}

ad::Var joint_st_conv(ad::Tape& tape, const std::vector<ad::Var>& frames,
                      const AttentionMaps& maps, const std::vector<ad::Var>& adjs,
                      const JstGatParamsT<ad::Var>& params, double gamma, double mu, int order) {
  if (order < 1) throw ValueError("joint_st_conv: order L must be >= 1");
  if (frames.empty()) throw ValueError("joint_st_conv: no frames");
  const std::size_t ndir = adjs.size();
  if (maps.maps.size() != ndir)
    throw ShapeError("joint_st_conv: " + std::to_string(maps.maps.size()) + " map directions, " +
                     std::to_string(ndir) + " adjacencies");
  ad::Var z_out;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    ad::Var gx = tape.scale(frames[f], gamma);
    std::vector<ad::Var> z(ndir, frames[f]);  // Z^0_t = X_t
    std::vector<ad::Var> ea(ndir);
    for (std::size_t d = 0; d < ndir; ++d) ea[d] = tape.hadamard(maps.maps[d][f], adjs[d]);
    ad::Var inner;
    for (int l = 1; l <= order; ++l) {
      ad::Var lsum;
      for (std::size_t d = 0; d < ndir; ++d) {
        z[d] = tape.add(gx, tape.scale(tape.matmul(ea[d], z[d]), mu));
        ad::Var term = tape.matmul(z[d], params.W_s[d][l - 1]);
        lsum = d == 0 ? term : tape.add(lsum, term);
      }
      lsum = tape.add_rowvec(lsum, params.b_s[l - 1]);
      inner = l == 1 ? lsum : tape.add(inner, lsum);
    }
    ad::Var activated = tape.relu(inner);
    z_out = f == 0 ? activated : tape.add(z_out, activated);
  }
  return z_out;
}

ad::Var short_term_head(ad::Tape& tape, ad::Var z_out, const JstGatParamsT<ad::Var>& params) {
  return tape.add_rowvec(tape.matmul(z_out, params.W_fs), params.b_fs);
}

ShortTermResult short_term_forward(ad::Tape& tape, const std::vector<ad::Var>& frames,
                                   const std::vector<ad::Var>& adjs,
                                   const JstGatParamsT<ad::Var>& params, double lambda,
                                   double gamma, double mu, int order) {
  if (frames.empty()) throw ValueError("short_term_forward: no frames");
  if (params.attn.size() != adjs.size())
    throw ShapeError("short_term_forward: " + std::to_string(params.attn.size()) +
                     " attention parameter sets, " + std::to_string(adjs.size()) + " adjacencies");
  const int t_s = static_cast<int>(frames.size()) - 1;
  AttentionMaps raw;
  raw.maps.resize(adjs.size());
  for (int m = 0; m <= t_s; ++m) raw.frame_offsets.push_back(t_s - m);
  ad::Var target = frames.back();
  for (std::size_t d = 0; d < adjs.size(); ++d)
    for (int m = 0; m <= t_s; ++m)
      raw.maps[d].push_back(attention_scores(tape, target, frames[m], params.attn[d]));
  AttentionMaps rescaled = rescale_maps(tape, raw, lambda);
  ad::Var z_out = joint_st_conv(tape, frames, rescaled, adjs, params, gamma, mu, order);
  return {short_term_head(tape, z_out, params), std::move(rescaled)};
}

}  // namespace lsjstn
