#include "coattn/coattention.hpp"

#include <string>

#include "coattn/errors.hpp"
#include "coattn/kernels.hpp"

namespace coattn {

void ProposalFeatures::validate() const {
  if (features.rank() != 2)
    throw DimensionError("proposal features must be a matrix, got " +
                         features.shape_str());
  if (boxes.size() != features.rows())
    throw ValidationError("proposal box count " + std::to_string(boxes.size()) +
                          " does not match feature rows " +
                          std::to_string(features.rows()));
  for (const Box& b : boxes)
    if (b.w < 0 || b.h < 0)
      throw ValidationError("proposal box has negative extent");
}

void SymbolSet::validate() const {
  if (embeddings.rank() != 2)
    throw DimensionError("symbol embeddings must be a matrix, got " +
                         embeddings.shape_str());
  if (probabilities.size() != embeddings.rows())
    throw ValidationError("symbol probability count " +
                          std::to_string(probabilities.size()) +
                          " does not match embedding rows " +
                          std::to_string(embeddings.rows()));
  for (double p : probabilities)
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError("symbol probability " + std::to_string(p) +
                            " outside [0, 1]");
}

NodeId init_symbol_summary(Graph& g, NodeId symbols,
                           const std::vector<double>& probabilities,
                           bool weighted) {
  std::size_t k = g.node_rows(symbols);
  if (probabilities.size() != k)
    throw DimensionError("probability count " +
                         std::to_string(probabilities.size()) +
                         " does not match symbol count " + std::to_string(k));
  if (!weighted) return g.mean_rows(symbols);

  double mass = 0.0;
  for (double p : probabilities) mass += p;
  if (mass <= 0.0)
    throw DegenerateProbabilityError(
        "weighted symbol initialization with zero probability mass");
  std::vector<double> w(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = probabilities[i] / mass;
  NodeId weights = g.input(Tensor::vec(std::move(w)), false);
  return g.weighted_row_sum(symbols, weights);
}

ImageAttention attend_image(Graph& g, NodeId symbol_summary, NodeId proposals,
                            NodeId w, std::optional<NodeId> prev_raw,
                            const CoAttentionConfig& config) {
  // score_i = tanh(<W s, proposal_i>)
  NodeId query = g.linear_map(w, symbol_summary);  // D2
  NodeId raw = g.tanh_elem(g.row_dots(proposals, query));
  if (prev_raw.has_value() && config.suppression_enabled)
    raw = g.suppress(raw, *prev_raw, config.suppression_ratio,
                     config.suppression_value);
  NodeId alpha = g.softmax(raw);
  NodeId summary = g.weighted_row_sum(proposals, alpha);
  return {raw, alpha, summary};
}

SymbolAttention attend_symbols(Graph& g, NodeId image_summary, NodeId symbols,
                               const std::vector<double>& probabilities,
                               NodeId w) {
  // score_k = tanh(<symbol_k, W^T b>)
  NodeId query = g.linear_map_t(w, image_summary);  // D1
  NodeId raw = g.tanh_elem(g.row_dots(symbols, query));
  NodeId beta = g.softmax(raw);
  // probabilities weight the normalized attention, not the raw scores
  NodeId summary = g.weighted_row_sum(symbols, beta, probabilities);
  return {raw, beta, summary, query};
}

Tensor suppress_attention(const Tensor& current, const Tensor& previous,
                          double ratio, double value) {
  if (!current.same_shape(previous))
    throw DimensionError("suppress_attention: shapes " + current.shape_str() +
                         " and " + previous.shape_str() + " do not agree");
  double m = kern::active().max(previous.data(), previous.size());
  double thr = ratio * m;
  Tensor out = current;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (previous[i] >= thr) out[i] = value;
  return out;
}

CoAttentionNodes run_coattention(Graph& g, NodeId proposals, NodeId symbols,
                                 const std::vector<double>& probabilities,
                                 NodeId w, const CoAttentionConfig& config) {
  if (config.hops < 1)
    throw DomainError("co-attention needs at least one hop, got " +
                      std::to_string(config.hops));

  CoAttentionNodes out;
  out.initial_symbol_summary =
      init_symbol_summary(g, symbols, probabilities, config.weighted_init);

  NodeId summary = out.initial_symbol_summary;
  std::optional<NodeId> prev_raw;
  NodeId fused{};

  for (int t = 0; t < config.hops; ++t) {
    ImageAttention img =
        attend_image(g, summary, proposals, w, prev_raw, config);
    SymbolAttention sym =
        attend_symbols(g, img.summary, symbols, probabilities, w);

    // hop contribution W^T b_t + s_t; the projection is the same node the
    // symbol scores were computed from
    NodeId hop_term = g.add(sym.projected_image, sym.summary);
    fused = fused.ok() ? g.add(fused, hop_term) : hop_term;

    out.hops.push_back({img.raw, img.alpha, sym.raw, sym.beta, img.summary,
                        sym.summary});
    summary = sym.summary;
    prev_raw = img.raw;
  }

  out.fused = fused;
  return out;
}

AttentionTrace extract_trace(const Graph& g, const CoAttentionNodes& nodes) {
  AttentionTrace trace;
  trace.initial_symbol_summary =
      g.value_tensor(nodes.initial_symbol_summary);
  for (const auto& hop : nodes.hops) {
    HopTrace h;
    h.raw_image = g.value_tensor(hop.raw_image);
    h.alpha = g.value_tensor(hop.alpha);
    h.raw_symbol = g.value_tensor(hop.raw_symbol);
    h.beta = g.value_tensor(hop.beta);
    h.image_summary = g.value_tensor(hop.image_summary);
    h.symbol_summary = g.value_tensor(hop.symbol_summary);
    trace.hops.push_back(std::move(h));
  }
  return trace;
}

}  // namespace coattn
