#include "coattn/encoder.hpp"

#include "coattn/errors.hpp"
#include "coattn/rng.hpp"
#include "coattn/vocab.hpp"

namespace coattn {

WordEmbeddingTable WordEmbeddingTable::init(std::size_t vocab_size,
                                            std::size_t dim, Rng& rng) {
  Tensor w = Tensor::zeros({vocab_size, dim});
  // row 0 (padding) stays zero
  for (std::size_t r = 1; r < vocab_size; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      w.at2(r, c) = rng.uniform(-0.08, 0.08);
  return WordEmbeddingTable{std::move(w), true};
}

namespace {
Tensor uniform_mat(std::size_t r, std::size_t c, Rng& rng) {
  Tensor t = Tensor::zeros({r, c});
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-0.08, 0.08);
  return t;
}
Tensor uniform_vec(std::size_t n, Rng& rng) {
  Tensor t = Tensor::zeros({n});
  for (std::size_t i = 0; i < n; ++i) t[i] = rng.uniform(-0.08, 0.08);
  return t;
}
}  // namespace

LstmParams LstmParams::init(std::size_t input_dim, std::size_t hidden_dim,
                            Rng& rng) {
  LstmParams p;
  p.w_in = uniform_mat(hidden_dim, input_dim, rng);
  p.w_forget = uniform_mat(hidden_dim, input_dim, rng);
  p.w_out = uniform_mat(hidden_dim, input_dim, rng);
  p.w_cell = uniform_mat(hidden_dim, input_dim, rng);
  p.u_in = uniform_mat(hidden_dim, hidden_dim, rng);
  p.u_forget = uniform_mat(hidden_dim, hidden_dim, rng);
  p.u_out = uniform_mat(hidden_dim, hidden_dim, rng);
  p.u_cell = uniform_mat(hidden_dim, hidden_dim, rng);
  p.b_in = uniform_vec(hidden_dim, rng);
  p.b_forget = uniform_vec(hidden_dim, rng);
  p.b_out = uniform_vec(hidden_dim, rng);
  p.b_cell = uniform_vec(hidden_dim, rng);
  // positive forget bias keeps early cell state from washing out
  for (std::size_t i = 0; i < hidden_dim; ++i) p.b_forget[i] += 1.0;
  return p;
}

const char* pooling_name(StatementPooling p) {
  return p == StatementPooling::kLast ? "last" : "mean";
}

StatementPooling pooling_from_name(const std::string& name) {
  if (name == "last") return StatementPooling::kLast;
  if (name == "mean") return StatementPooling::kMean;
  throw DomainError("unknown statement pooling '" + name +
                    "' (expected last or mean)");
}

EncoderBinding bind_encoder(Graph& g, const WordEmbeddingTable& table,
                            const LstmParams& params, bool trainable) {
  EncoderBinding e;
  e.table = g.input(table.weights, trainable && table.trainable);
  e.w_in = g.input(params.w_in, trainable);
  e.w_forget = g.input(params.w_forget, trainable);
  e.w_out = g.input(params.w_out, trainable);
  e.w_cell = g.input(params.w_cell, trainable);
  e.u_in = g.input(params.u_in, trainable);
  e.u_forget = g.input(params.u_forget, trainable);
  e.u_out = g.input(params.u_out, trainable);
  e.u_cell = g.input(params.u_cell, trainable);
  e.b_in = g.input(params.b_in, trainable);
  e.b_forget = g.input(params.b_forget, trainable);
  e.b_out = g.input(params.b_out, trainable);
  e.b_cell = g.input(params.b_cell, trainable);
  return e;
}

NodeId embed_tokens(Graph& g, const std::vector<int>& ids, NodeId table) {
  std::size_t vocab_size = g.node_rows(table);
  std::vector<int> kept;
  kept.reserve(ids.size());
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_size)
      throw VocabularyError("token id " + std::to_string(id) +
                            " outside vocabulary of size " +
                            std::to_string(vocab_size));
    if (id != kPadId) kept.push_back(id);
  }
  if (kept.empty())
    throw EmptyStatementError("statement is empty after padding is stripped");
  return g.gather_rows(table, kept);
}

NodeId lstm_encode(Graph& g, NodeId x, const EncoderBinding& enc,
                   StatementPooling pooling) {
  std::size_t steps = g.node_rows(x);

  NodeId h{};  // previous hidden state, invalid at t = 0
  NodeId c{};
  NodeId pooled{};

  for (std::size_t t = 0; t < steps; ++t) {
    NodeId xt = g.row_view(x, t);

    auto gate_in = [&](NodeId w, NodeId u, NodeId b) {
      NodeId z = g.linear_map(w, xt);
      if (h.ok()) z = g.add(z, g.linear_map(u, h));  // h is zero at t = 0
      return g.add(z, b);
    };

    NodeId in_gate = g.sigmoid(gate_in(enc.w_in, enc.u_in, enc.b_in));
    NodeId forget_gate =
        g.sigmoid(gate_in(enc.w_forget, enc.u_forget, enc.b_forget));
    NodeId out_gate = g.sigmoid(gate_in(enc.w_out, enc.u_out, enc.b_out));
    NodeId cell_in = g.tanh_elem(gate_in(enc.w_cell, enc.u_cell, enc.b_cell));

    NodeId c_new = g.mul(in_gate, cell_in);
    if (c.ok()) c_new = g.add(c_new, g.mul(forget_gate, c));
    c = c_new;
    h = g.mul(out_gate, g.tanh_elem(c));

    if (pooling == StatementPooling::kMean)
      pooled = pooled.ok() ? g.add(pooled, h) : h;
  }

  if (pooling == StatementPooling::kMean)
    return g.scale(pooled, 1.0 / static_cast<double>(steps));
  return h;
}

NodeId encode_statement(Graph& g, const std::vector<int>& ids,
                        const EncoderBinding& enc, StatementPooling pooling) {
  return lstm_encode(g, embed_tokens(g, ids, enc.table), enc, pooling);
}

}  // namespace coattn
