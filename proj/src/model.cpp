#include "coattn/model.hpp"

#include "coattn/errors.hpp"
#include "coattn/ranking.hpp"
#include "coattn/rng.hpp"

namespace coattn {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kVse: return "VSE";
    case Variant::kVseP: return "VSE-P";
    case Variant::kVsePAtt: return "VSE-P-Att";
    case Variant::kVseCoAtt: return "VSE-CoAtt";
    case Variant::kVseCoAtt2: return "VSE-CoAtt-2";
    case Variant::kVseCoAttWt: return "VSE-CoAtt-wt";
    case Variant::kVseCoAtt2Wt: return "VSE-CoAtt-2-wt";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  for (Variant v : all_variants())
    if (name == variant_name(v)) return v;
  throw DomainError("unknown variant '" + name + "'");
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v = {
      Variant::kVse,        Variant::kVseP,       Variant::kVsePAtt,
      Variant::kVseCoAtt,   Variant::kVseCoAtt2,  Variant::kVseCoAttWt,
      Variant::kVseCoAtt2Wt};
  return v;
}

bool variant_uses_coattention(Variant v) {
  return v == Variant::kVseCoAtt || v == Variant::kVseCoAtt2 ||
         v == Variant::kVseCoAttWt || v == Variant::kVseCoAtt2Wt;
}

bool variant_uses_query(Variant v) { return v == Variant::kVsePAtt; }

int variant_default_hops(Variant v) {
  switch (v) {
    case Variant::kVseCoAtt2:
    case Variant::kVseCoAtt2Wt:
      return 2;
    default:
      return 1;
  }
}

bool variant_weighted_init(Variant v) {
  return v == Variant::kVseCoAttWt || v == Variant::kVseCoAtt2Wt;
}

ModelParams ModelParams::init(const ModelDims& dims, Variant variant,
                              std::size_t vocab_size, std::uint64_t seed) {
  ModelParams m;
  m.dims = dims;
  m.variant = variant;
  m.coattention.hops = variant_default_hops(variant);
  m.coattention.weighted_init = variant_weighted_init(variant);
  m.pooling = StatementPooling::kLast;

  Rng rng(mix_seed(seed, fnv1a("model-init")));
  auto uniform = [&](std::vector<std::size_t> shape) {
    Tensor t = Tensor::zeros(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-0.08, 0.08);
    return t;
  };

  m.w = uniform({dims.d2, dims.d1});
  m.p = uniform({dims.d_e, dims.d1});
  if (variant_uses_query(variant)) m.q = uniform({dims.d1});
  m.embeddings = WordEmbeddingTable::init(vocab_size, dims.d_w, rng);
  m.lstm = LstmParams::init(dims.d_w, dims.d_e, rng);
  return m;
}

std::vector<std::pair<std::string, Tensor*>> ModelParams::named_params() {
  std::vector<std::pair<std::string, Tensor*>> out = {
      {"W", &w},
      {"P", &p},
      {"embeddings", &embeddings.weights},
      {"lstm.w_in", &lstm.w_in},
      {"lstm.w_forget", &lstm.w_forget},
      {"lstm.w_out", &lstm.w_out},
      {"lstm.w_cell", &lstm.w_cell},
      {"lstm.u_in", &lstm.u_in},
      {"lstm.u_forget", &lstm.u_forget},
      {"lstm.u_out", &lstm.u_out},
      {"lstm.u_cell", &lstm.u_cell},
      {"lstm.b_in", &lstm.b_in},
      {"lstm.b_forget", &lstm.b_forget},
      {"lstm.b_out", &lstm.b_out},
      {"lstm.b_cell", &lstm.b_cell},
  };
  if (variant_uses_query(variant)) out.emplace_back("q", &q);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> ModelParams::named_params()
    const {
  auto mut = const_cast<ModelParams*>(this)->named_params();
  std::vector<std::pair<std::string, const Tensor*>> out;
  out.reserve(mut.size());
  for (auto& [n, t] : mut) out.emplace_back(n, t);
  return out;
}

ModelBinding bind_model(Graph& g, const ModelParams& params, bool trainable) {
  ModelBinding b;
  b.w = g.input(params.w, trainable);
  b.p = g.input(params.p, trainable);
  b.encoder = bind_encoder(g, params.embeddings, params.lstm, trainable);
  b.named = {
      {"W", b.w},
      {"P", b.p},
      {"embeddings", b.encoder.table},
      {"lstm.w_in", b.encoder.w_in},
      {"lstm.w_forget", b.encoder.w_forget},
      {"lstm.w_out", b.encoder.w_out},
      {"lstm.w_cell", b.encoder.w_cell},
      {"lstm.u_in", b.encoder.u_in},
      {"lstm.u_forget", b.encoder.u_forget},
      {"lstm.u_out", b.encoder.u_out},
      {"lstm.u_cell", b.encoder.u_cell},
      {"lstm.b_in", b.encoder.b_in},
      {"lstm.b_forget", b.encoder.b_forget},
      {"lstm.b_out", b.encoder.b_out},
      {"lstm.b_cell", b.encoder.b_cell},
  };
  if (variant_uses_query(params.variant)) {
    b.q = g.input(params.q, trainable);
    b.named.emplace_back("q", b.q);
  }
  return b;
}

NodeId image_embedding(Graph& g, const ModelBinding& bound,
                       const ModelParams& params, const ImageInputs& in,
                       CoAttentionNodes* trace_nodes) {
  NodeId proposals = g.input(*in.features, false);

  switch (params.variant) {
    case Variant::kVse:
    case Variant::kVseP:
      // average pooling over the proposals, projected to the symbol space
      return g.linear_map_t(bound.w, g.mean_rows(proposals));

    case Variant::kVsePAtt: {
      // fixed learned query in place of a symbol summary
      NodeId query = g.linear_map(bound.w, bound.q);  // D2
      NodeId raw = g.tanh_elem(g.row_dots(proposals, query));
      NodeId alpha = g.softmax(raw);
      NodeId pooled = g.weighted_row_sum(proposals, alpha);
      return g.linear_map_t(bound.w, pooled);
    }

    default: {
      NodeId symbols = g.input(*in.symbol_embeddings, false);
      CoAttentionNodes nodes =
          run_coattention(g, proposals, symbols, *in.symbol_probabilities,
                          bound.w, params.coattention);
      if (trace_nodes != nullptr) *trace_nodes = nodes;
      return nodes.fused;
    }
  }
}

NodeId sample_loss(Graph& g, const ModelBinding& bound,
                   const ModelParams& params, const ImageInputs& in,
                   const std::vector<std::vector<int>>& positive_tokens,
                   const std::vector<std::vector<int>>& negative_tokens,
                   double margin) {
  NodeId fused = image_embedding(g, bound, params, in);
  NodeId projected = g.linear_map(bound.p, fused);

  std::vector<NodeId> pos, neg;
  pos.reserve(positive_tokens.size());
  neg.reserve(negative_tokens.size());
  for (const auto& toks : positive_tokens) {
    NodeId psi = encode_statement(g, toks, bound.encoder, params.pooling);
    pos.push_back(score_projected(g, projected, psi));
  }
  for (const auto& toks : negative_tokens) {
    NodeId psi = encode_statement(g, toks, bound.encoder, params.pooling);
    neg.push_back(score_projected(g, projected, psi));
  }
  return margin_rank_loss(g, pos, neg, margin);
}

}  // namespace coattn
