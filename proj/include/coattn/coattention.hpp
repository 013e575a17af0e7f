#pragma once

#include <optional>
#include <vector>

#include "coattn/graph.hpp"
#include "coattn/tensor.hpp"

namespace coattn {

struct Box {
  double x = 0, y = 0, w = 0, h = 0;
};

/// Region-proposal features for one image: an N x D2 feature matrix plus the
/// box geometry each row came from.
struct ProposalFeatures {
  Tensor features;  // N x D2
  std::vector<Box> boxes;

  std::size_t count() const { return features.rows(); }
  void validate() const;
};

/// The symbol inventory for one image: K embedding rows shared across the
/// corpus and a per-image presence probability for each symbol.
struct SymbolSet {
  Tensor embeddings;  // K x D1
  std::vector<double> probabilities;

  std::size_t count() const { return embeddings.rows(); }
  void validate() const;
};

struct CoAttentionConfig {
  int hops = 2;
  bool weighted_init = false;        // -wt variants
  bool suppression_enabled = true;   // only applies from the second hop on
  double suppression_ratio = 0.7;
  double suppression_value = -2.0;
};

/// Everything recorded during one co-attention pass: the initial symbol
/// summary plus, per hop, the raw (pre-normalization) scores, normalized
/// attentions and summary vectors on both sides.
struct HopTrace {
  Tensor raw_image;   // N, post-suppression when it applied
  Tensor alpha;       // N
  Tensor raw_symbol;  // K
  Tensor beta;        // K
  Tensor image_summary;   // D2
  Tensor symbol_summary;  // D1
};

struct AttentionTrace {
  Tensor initial_symbol_summary;  // D1
  std::vector<HopTrace> hops;
};

/// Graph node handles produced by run_coattention; the trace tensors can be
/// extracted from them after the forward pass.
struct CoAttentionNodes {
  NodeId fused;  // D1
  NodeId initial_symbol_summary;
  struct Hop {
    NodeId raw_image, alpha, raw_symbol, beta, image_summary, symbol_summary;
  };
  std::vector<Hop> hops;
};

/// Initial symbol summary: the plain mean of the symbol embeddings, or the
/// probability-weighted mean when `weighted` is set. Weighted form requires
/// a positive probability mass.
NodeId init_symbol_summary(Graph& g, NodeId symbols,
                           const std::vector<double>& probabilities,
                           bool weighted);

/// One image-side attention step. Scores each proposal against the current
/// symbol summary through the shared projection, optionally suppresses
/// scores that dominated the previous hop, normalizes, and returns the raw
/// scores, the attention weights and the attended image summary.
struct ImageAttention {
  NodeId raw;    // N, post-suppression when it applied
  NodeId alpha;  // N
  NodeId summary;  // D2
};
ImageAttention attend_image(Graph& g, NodeId symbol_summary, NodeId proposals,
                            NodeId w, std::optional<NodeId> prev_raw,
                            const CoAttentionConfig& config);

/// One symbol-side attention step. Scores each symbol against the attended
/// image summary, normalizes, and combines the symbol embeddings weighted by
/// attention times the fixed per-symbol probabilities.
struct SymbolAttention {
  NodeId raw;   // K
  NodeId beta;  // K
  NodeId summary;  // D1
  NodeId projected_image;  // W^T b, reused by the fusion term
};
SymbolAttention attend_symbols(Graph& g, NodeId image_summary, NodeId symbols,
                               const std::vector<double>& probabilities,
                               NodeId w);

/// Plain-value form of the suppression rule: entries of `current` whose
/// counterpart in `previous` is at least `ratio` times max(previous) are
/// replaced by `value`.
Tensor suppress_attention(const Tensor& current, const Tensor& previous,
                          double ratio, double value);

/// Full multihop pass: initial summary, alternating image and symbol
/// attention for `config.hops` rounds, and the fused embedding
/// sum_t (W^T image_summary_t + symbol_summary_t).
CoAttentionNodes run_coattention(Graph& g, NodeId proposals, NodeId symbols,
                                 const std::vector<double>& probabilities,
                                 NodeId w, const CoAttentionConfig& config);

AttentionTrace extract_trace(const Graph& g, const CoAttentionNodes& nodes);

}  // namespace coattn
