#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coattn/graph.hpp"
#include "coattn/tensor.hpp"

namespace coattn {

class Rng;

/// Trainable word embedding table, one row per vocabulary id. Row 0 (the
/// padding id) stays exactly zero: padding is stripped before lookup and the
/// row is excluded from updates.
struct WordEmbeddingTable {
  Tensor weights;  // V x D_w
  bool trainable = true;

  static WordEmbeddingTable init(std::size_t vocab_size, std::size_t dim,
                                 Rng& rng);
};

/// Gate parameters of a single-layer recurrent encoder cell. Input maps are
/// D_e x D_w, recurrent maps D_e x D_e, biases D_e.
struct LstmParams {
  Tensor w_in, w_forget, w_out, w_cell;
  Tensor u_in, u_forget, u_out, u_cell;
  Tensor b_in, b_forget, b_out, b_cell;

  std::size_t input_dim() const { return w_in.cols(); }
  std::size_t hidden_dim() const { return w_in.rows(); }

  // Uniform(-0.08, 0.08) everywhere, then +1 added to the forget bias.
  static LstmParams init(std::size_t input_dim, std::size_t hidden_dim,
                         Rng& rng);
};

enum class StatementPooling { kLast, kMean };

const char* pooling_name(StatementPooling p);
StatementPooling pooling_from_name(const std::string& name);

/// Graph-bound handles to the encoder parameters, created once per
/// recording.
struct EncoderBinding {
  NodeId table;
  NodeId w_in, w_forget, w_out, w_cell;
  NodeId u_in, u_forget, u_out, u_cell;
  NodeId b_in, b_forget, b_out, b_cell;
};

EncoderBinding bind_encoder(Graph& g, const WordEmbeddingTable& table,
                            const LstmParams& params, bool trainable);

/// Embedding rows for `ids` with padding ids removed. Throws
/// VocabularyError for out-of-range ids and EmptyStatementError when
/// nothing remains after stripping.
NodeId embed_tokens(Graph& g, const std::vector<int>& ids, NodeId table);

/// Runs the recurrent cell over the rows of `x` (T x D_w) from zero initial
/// state and returns the statement encoding (the last hidden state, or the
/// mean over time under kMean pooling).
NodeId lstm_encode(Graph& g, NodeId x, const EncoderBinding& enc,
                   StatementPooling pooling = StatementPooling::kLast);

/// embed_tokens followed by lstm_encode.
NodeId encode_statement(Graph& g, const std::vector<int>& ids,
                        const EncoderBinding& enc,
                        StatementPooling pooling = StatementPooling::kLast);

}  // namespace coattn
