#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coattn/tensor.hpp"

namespace coattn {

/// Handle to a node in a Graph recording. Plain index, valid until the next
/// reset() of the graph it came from.
struct NodeId {
  std::int32_t v = -1;
  bool ok() const { return v >= 0; }
};

/// Reverse-mode differentiation tape. Each operation records its value and
/// an analytic backward rule; backward() replays the recording in reverse,
/// accumulating gradients into every node that (transitively) depends on a
/// gradient-carrying input.
///
/// Node values are rank <= 2: scalars are 1x1, vectors are 1xn rows,
/// matrices are row-major. Values and gradients live in arenas that keep
/// their capacity across reset(), so a graph can be rebuilt every step
/// without reallocating.
///
/// Every forward result is checked to be finite; a NaN or Inf raises
/// NumericError naming the operation.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  /// Leaf holding a copy of `t`. Gradients are accumulated for it only when
  /// `needs_grad` is set.
  NodeId input(const Tensor& t, bool needs_grad = false);

  // y = W x. W is rows x cols, x has cols entries, y has rows entries.
  NodeId linear_map(NodeId w, NodeId x);
  // y = W^T x. W is rows x cols, x has rows entries, y has cols entries.
  NodeId linear_map_t(NodeId w, NodeId x);

  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);  // elementwise
  NodeId scale(NodeId a, double c);
  NodeId add_const(NodeId a, double c);

  NodeId tanh_elem(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId relu(NodeId a);

  /// Normalizes all entries to positive values summing to 1 (stable via max
  /// subtraction). Input must be non-empty.
  NodeId softmax(NodeId a);

  NodeId dot(NodeId a, NodeId b);
  NodeId sum(NodeId a);

  /// dot(u, v) / (|u| |v|), in [-1, 1]. Throws DegenerateVectorError when
  /// either norm is below 1e-12.
  NodeId cosine_similarity(NodeId u, NodeId v);

  /// Rows of `table` selected by `ids`; result is ids.size() x cols.
  /// Backward scatters row gradients back into the table.
  NodeId gather_rows(NodeId table, const std::vector<int>& ids);

  /// Row `r` of a matrix node as a 1 x cols value.
  NodeId row_view(NodeId m, std::size_t r);

  /// y_i = dot(rows_i, v) for every row of a matrix node.
  NodeId row_dots(NodeId rows, NodeId v);

  /// y = sum_i weights_i * coeff_i * rows_i. `coeffs` are fixed (non-
  /// differentiated) per-row factors; empty means all ones. Terms whose
  /// total factor is exactly zero are skipped and contribute nothing.
  NodeId weighted_row_sum(NodeId rows, NodeId weights,
                          const std::vector<double>& coeffs = {});

  /// Mean of the matrix rows.
  NodeId mean_rows(NodeId rows);

  /// Copy of `cur` where every index whose value in `prev` is >= ratio times
  /// max(prev) is replaced by `value`. `prev` is read as data: no gradient
  /// flows through the comparison, and replaced entries block gradient
  /// entirely (they are constants).
  NodeId suppress(NodeId cur, NodeId prev, double ratio, double value);

  /// Reverse sweep from a scalar node; accumulates gradients for every
  /// gradient-carrying node recorded before it.
  void backward(NodeId loss);

  std::span<const double> value(NodeId n) const;
  std::span<const double> grad(NodeId n) const;
  double scalar(NodeId n) const;
  Tensor value_tensor(NodeId n) const;
  Tensor grad_tensor(NodeId n) const;

  std::size_t node_rows(NodeId n) const;
  std::size_t node_cols(NodeId n) const;
  bool node_needs_grad(NodeId n) const;

  /// Drops all nodes but keeps arena capacity.
  void reset();

  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    kInput,
    kMatVec,
    kMatTVec,
    kAdd,
    kSub,
    kMul,
    kScale,
    kAddConst,
    kTanh,
    kSigmoid,
    kRelu,
    kSoftmax,
    kDot,
    kSum,
    kCosine,
    kGatherRows,
    kRowView,
    kRowDots,
    kWeightedRowSum,
    kMeanRows,
    kSuppress,
  };

  struct Node {
    Op op;
    bool needs_grad;
    std::int32_t a = -1;
    std::int32_t b = -1;
    std::int32_t i0 = 0;              // small op index (row_view row)
    std::uint32_t rows = 0, cols = 0;
    std::size_t val = 0;              // offset into vals_
    std::size_t grad = 0;             // offset into grads_ when needs_grad
    std::uint32_t iaux = 0, iaux_n = 0;  // span in iaux_ (ids, masks)
    std::uint32_t daux = 0, daux_n = 0;  // span in daux_ (coeffs)
    double c0 = 0.0, c1 = 0.0;        // op constants / cached norms
  };

  std::size_t n_of(NodeId id) const;
  const Node& at(NodeId id) const;
  NodeId push(Node n, const char* opname);
  double* val_ptr(const Node& n) { return vals_.data() + n.val; }
  const double* val_ptr(const Node& n) const { return vals_.data() + n.val; }
  double* grad_ptr(const Node& n) { return grads_.data() + n.grad; }
  const double* grad_ptr(const Node& n) const {
    return grads_.data() + n.grad;
  }
  void backward_node(const Node& n);

  std::vector<Node> nodes_;
  std::vector<double> vals_;
  std::vector<double> grads_;
  std::vector<std::int32_t> iaux_;
  std::vector<double> daux_;
};

}  // namespace coattn
