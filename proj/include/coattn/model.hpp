#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coattn/coattention.hpp"
#include "coattn/encoder.hpp"
#include "coattn/graph.hpp"
#include "coattn/tensor.hpp"

namespace coattn {

/// Forward-path selector. The co-attention variants differ in hop count and
/// symbol-summary initialization; the baselines replace co-attention with
/// mean pooling or a learned-query attention over the proposals.
enum class Variant {
  kVse,        // mean-pooled proposals, no symbol pathway
  kVseP,       // mean-pooled proposals, no symbol pathway
  kVsePAtt,    // learned-query attention over proposals, no symbol pathway
  kVseCoAtt,   // one co-attention hop
  kVseCoAtt2,  // two co-attention hops
  kVseCoAttWt,   // one hop, probability-weighted initial summary
  kVseCoAtt2Wt,  // two hops, probability-weighted initial summary
};

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);
const std::vector<Variant>& all_variants();
bool variant_uses_coattention(Variant v);
bool variant_uses_query(Variant v);
int variant_default_hops(Variant v);
bool variant_weighted_init(Variant v);

struct ModelDims {
  std::size_t d1 = 32;   // symbol embedding dimension
  std::size_t d2 = 48;   // proposal feature dimension
  std::size_t d_w = 32;  // word embedding dimension
  std::size_t d_e = 32;  // statement encoding dimension
};

/// All trainable state of one model instance.
struct ModelParams {
  ModelDims dims;
  Variant variant = Variant::kVseCoAtt2;
  CoAttentionConfig coattention;
  StatementPooling pooling = StatementPooling::kLast;

  Tensor w;  // D2 x D1, shared projection between modalities
  Tensor p;  // D_e x D1, joint-space projection
  Tensor q;  // D1, learned attention query (query variants only, else empty)
  WordEmbeddingTable embeddings;
  LstmParams lstm;

  static ModelParams init(const ModelDims& dims, Variant variant,
                          std::size_t vocab_size, std::uint64_t seed);

  /// Every trainable tensor, named, in a fixed order. The padding embedding
  /// row is handled by the trainer (its gradient is always zero).
  std::vector<std::pair<std::string, Tensor*>> named_params();
  std::vector<std::pair<std::string, const Tensor*>> named_params() const;
};

/// Graph-bound handles for one recording of the model parameters.
struct ModelBinding {
  NodeId w, p, q;
  EncoderBinding encoder;
  std::vector<std::pair<std::string, NodeId>> named;
};

ModelBinding bind_model(Graph& g, const ModelParams& params, bool trainable);

/// Per-sample inputs to the image side of the model.
struct ImageInputs {
  const Tensor* features;  // N x D2
  const std::vector<double>* symbol_probabilities;
  const Tensor* symbol_embeddings;  // K x D1
};

/// Builds the image embedding for the bound model's variant. For
/// co-attention variants the full trace node set is returned through
/// `trace_nodes` when given.
NodeId image_embedding(Graph& g, const ModelBinding& bound,
                       const ModelParams& params, const ImageInputs& in,
                       CoAttentionNodes* trace_nodes = nullptr);

/// Loss of one sample: every related statement scored against the sampled
/// negatives under the max-margin objective.
NodeId sample_loss(Graph& g, const ModelBinding& bound,
                   const ModelParams& params, const ImageInputs& in,
                   const std::vector<std::vector<int>>& positive_tokens,
                   const std::vector<std::vector<int>>& negative_tokens,
                   double margin);

}  // namespace coattn
