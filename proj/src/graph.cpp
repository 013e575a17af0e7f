#include "coattn/graph.hpp"

#include <cmath>
#include <string>

#include "coattn/errors.hpp"
#include "coattn/kernels.hpp"

namespace coattn {

namespace {

std::string dims_str(std::size_t r, std::size_t c) {
  return "[" + std::to_string(r) + "x" + std::to_string(c) + "]";
}

}  // namespace

std::size_t Graph::n_of(NodeId id) const {
  if (!id.ok() || static_cast<std::size_t>(id.v) >= nodes_.size())
    throw DomainError("invalid node id");
  return static_cast<std::size_t>(id.v);
}

const Graph::Node& Graph::at(NodeId id) const { return nodes_[n_of(id)]; }

NodeId Graph::push(Node n, const char* opname) {
  n.val = vals_.size();
  std::size_t count = static_cast<std::size_t>(n.rows) * n.cols;
  vals_.resize(n.val + count, 0.0);
  if (n.needs_grad) {
    n.grad = grads_.size();
    grads_.resize(n.grad + count, 0.0);
  }
  nodes_.push_back(n);
  (void)opname;
  return NodeId{static_cast<std::int32_t>(nodes_.size() - 1)};
}

NodeId Graph::input(const Tensor& t, bool needs_grad) {
  Node n{};
  n.op = Op::kInput;
  n.needs_grad = needs_grad;
  if (t.rank() == 1) {
    n.rows = 1;
    n.cols = static_cast<std::uint32_t>(t.size());
  } else if (t.rank() == 2) {
    n.rows = static_cast<std::uint32_t>(t.rows());
    n.cols = static_cast<std::uint32_t>(t.cols());
  } else {
    throw DimensionError("graph inputs must be rank 1 or 2, got " +
                         t.shape_str());
  }
  NodeId id = push(n, "input");
  double* y = vals_.data() + nodes_.back().val;
  const double* src = t.data();
  for (std::size_t i = 0; i < t.size(); ++i) y[i] = src[i];
  return id;
}

NodeId Graph::linear_map(NodeId w, NodeId x) {
  const Node& nw = at(w);
  const Node& nx = at(x);
  if (nx.rows != 1 || nw.cols != nx.cols)
    throw DimensionError("linear_map: shapes " + dims_str(nw.rows, nw.cols) +
                         " and " + dims_str(nx.rows, nx.cols) +
                         " do not agree");
  Node n{};
  n.op = Op::kMatVec;
  n.a = w.v;
  n.b = x.v;
  n.needs_grad = nw.needs_grad || nx.needs_grad;
  n.rows = 1;
  n.cols = nw.rows;
  std::size_t woff = nw.val, xoff = nx.val;
  std::size_t wr = nw.rows, wc = nw.cols;
  NodeId id = push(n, "linear_map");
  kern::matvec(vals_.data() + nodes_.back().val, vals_.data() + woff,
               vals_.data() + xoff, wr, wc);
  if (!all_finite(vals_.data() + nodes_.back().val, wr))
    throw NumericError("linear_map produced a non-finite value");
  return id;
}

NodeId Graph::linear_map_t(NodeId w, NodeId x) {
  const Node& nw = at(w);
  const Node& nx = at(x);
  if (nx.rows != 1 || nw.rows != nx.cols)
    throw DimensionError("linear_map_t: shapes " + dims_str(nw.rows, nw.cols) +
                         " and " + dims_str(nx.rows, nx.cols) +
                         " do not agree");
  Node n{};
  n.op = Op::kMatTVec;
  n.a = w.v;
  n.b = x.v;
  n.needs_grad = nw.needs_grad || nx.needs_grad;
  n.rows = 1;
  n.cols = nw.cols;
  std::size_t woff = nw.val, xoff = nx.val;
  std::size_t wr = nw.rows, wc = nw.cols;
  NodeId id = push(n, "linear_map_t");
  kern::matvec_t(vals_.data() + nodes_.back().val, vals_.data() + woff,
                 vals_.data() + xoff, wr, wc);
  if (!all_finite(vals_.data() + nodes_.back().val, wc))
    throw NumericError("linear_map_t produced a non-finite value");
  return id;
}

namespace {
void require_same_shape(std::size_t ar, std::size_t ac, std::size_t br,
                        std::size_t bc, const char* opname) {
  if (ar != br || ac != bc)
    throw DimensionError(std::string(opname) + ": shapes " + dims_str(ar, ac) +
                         " and " + dims_str(br, bc) + " do not agree");
}
}  // namespace

NodeId Graph::add(NodeId a, NodeId b) {
  const Node& na = at(a);
  const Node& nb = at(b);
  require_same_shape(na.rows, na.cols, nb.rows, nb.cols, "add");
  Node n{};
  n.op = Op::kAdd;
  n.a = a.v;
  n.b = b.v;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.rows = na.rows;
  n.cols = na.cols;
  std::size_t ao = na.val, bo = nb.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "add");
  kern::active().add(vals_.data() + nodes_.back().val, vals_.data() + ao,
                     vals_.data() + bo, cnt);
  if (!all_finite(vals_.data() + nodes_.back().val, cnt))
    throw NumericError("add produced a non-finite value");
  return id;
}

NodeId Graph::sub(NodeId a, NodeId b) {
  const Node& na = at(a);
  const Node& nb = at(b);
  require_same_shape(na.rows, na.cols, nb.rows, nb.cols, "sub");
  Node n{};
  n.op = Op::kSub;
  n.a = a.v;
  n.b = b.v;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.rows = na.rows;
  n.cols = na.cols;
  std::size_t ao = na.val, bo = nb.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "sub");
  kern::active().sub(vals_.data() + nodes_.back().val, vals_.data() + ao,
                     vals_.data() + bo, cnt);
  if (!all_finite(vals_.data() + nodes_.back().val, cnt))
    throw NumericError("sub produced a non-finite value");
  return id;
}

NodeId Graph::mul(NodeId a, NodeId b) {
  const Node& na = at(a);
  const Node& nb = at(b);
  require_same_shape(na.rows, na.cols, nb.rows, nb.cols, "mul");
  Node n{};
  n.op = Op::kMul;
  n.a = a.v;
  n.b = b.v;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.rows = na.rows;
  n.cols = na.cols;
  std::size_t ao = na.val, bo = nb.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "mul");
  kern::active().mul(vals_.data() + nodes_.back().val, vals_.data() + ao,
                     vals_.data() + bo, cnt);
  if (!all_finite(vals_.data() + nodes_.back().val, cnt))
    throw NumericError("mul produced a non-finite value");
  return id;
}

NodeId Graph::scale(NodeId a, double c) {
  const Node& na = at(a);
  Node n{};
  n.op = Op::kScale;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  n.rows = na.rows;
  n.cols = na.cols;
  n.c0 = c;
  std::size_t ao = na.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "scale");
  kern::active().scale(vals_.data() + nodes_.back().val, vals_.data() + ao, c,
                       cnt);
  if (!all_finite(vals_.data() + nodes_.back().val, cnt))
    throw NumericError("scale produced a non-finite value");
  return id;
}

NodeId Graph::add_const(NodeId a, double c) {
  const Node& na = at(a);
  Node n{};
  n.op = Op::kAddConst;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  n.rows = na.rows;
  n.cols = na.cols;
  n.c0 = c;
  std::size_t ao = na.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "add_const");
  double* y = vals_.data() + nodes_.back().val;
  const double* x = vals_.data() + ao;
  for (std::size_t i = 0; i < cnt; ++i) y[i] = x[i] + c;
  if (!all_finite(y, cnt))
    throw NumericError("add_const produced a non-finite value");
  return id;
}

NodeId Graph::tanh_elem(NodeId a) {
  const Node& na = at(a);
  Node n{};
  n.op = Op::kTanh;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  n.rows = na.rows;
  n.cols = na.cols;
  std::size_t ao = na.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "tanh");
  double* y = vals_.data() + nodes_.back().val;
  const double* x = vals_.data() + ao;
  for (std::size_t i = 0; i < cnt; ++i) y[i] = std::tanh(x[i]);
  return id;
}

NodeId Graph::sigmoid(NodeId a) {
  const Node& na = at(a);
  Node n{};
  n.op = Op::kSigmoid;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  n.rows = na.rows;
  n.cols = na.cols;
  std::size_t ao = na.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "sigmoid");
  double* y = vals_.data() + nodes_.back().val;
  const double* x = vals_.data() + ao;
  for (std::size_t i = 0; i < cnt; ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
  return id;
}

NodeId Graph::relu(NodeId a) {
  const Node& na = at(a);
  Node n{};
  n.op = Op::kRelu;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  n.rows = na.rows;
  n.cols = na.cols;
  std::size_t ao = na.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "relu");
  double* y = vals_.data() + nodes_.back().val;
  const double* x = vals_.data() + ao;
  for (std::size_t i = 0; i < cnt; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
  return id;
}

NodeId Graph::softmax(NodeId a) {
  const Node& na = at(a);
  std::size_t cnt = (std::size_t)na.rows * na.cols;
  if (cnt == 0) throw DomainError("softmax: empty input");
  if (na.rows != 1)
    throw DimensionError("softmax expects a vector, got " +
                         dims_str(na.rows, na.cols));
  Node n{};
  n.op = Op::kSoftmax;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  n.rows = na.rows;
  n.cols = na.cols;
  std::size_t ao = na.val;
  NodeId id = push(n, "softmax");
  double* y = vals_.data() + nodes_.back().val;
  const double* x = vals_.data() + ao;
  double m = kern::active().max(x, cnt);
  for (std::size_t i = 0; i < cnt; ++i) y[i] = std::exp(x[i] - m);
  double s = kern::active().sum(y, cnt);
  for (std::size_t i = 0; i < cnt; ++i) y[i] /= s;
  if (!all_finite(y, cnt))
    throw NumericError("softmax produced a non-finite value");
  return id;
}

NodeId Graph::dot(NodeId a, NodeId b) {
  const Node& na = at(a);
  const Node& nb = at(b);
  require_same_shape(na.rows, na.cols, nb.rows, nb.cols, "dot");
  Node n{};
  n.op = Op::kDot;
  n.a = a.v;
  n.b = b.v;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.rows = 1;
  n.cols = 1;
  std::size_t ao = na.val, bo = nb.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "dot");
  double v = kern::active().dot(vals_.data() + ao, vals_.data() + bo, cnt);
  vals_[nodes_.back().val] = v;
  if (!std::isfinite(v)) throw NumericError("dot produced a non-finite value");
  return id;
}

NodeId Graph::sum(NodeId a) {
  const Node& na = at(a);
  Node n{};
  n.op = Op::kSum;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  n.rows = 1;
  n.cols = 1;
  std::size_t ao = na.val, cnt = (std::size_t)na.rows * na.cols;
  NodeId id = push(n, "sum");
  double v = kern::active().sum(vals_.data() + ao, cnt);
  vals_[nodes_.back().val] = v;
  if (!std::isfinite(v)) throw NumericError("sum produced a non-finite value");
  return id;
}

NodeId Graph::cosine_similarity(NodeId u, NodeId v) {
  const Node& nu = at(u);
  const Node& nv = at(v);
  require_same_shape(nu.rows, nu.cols, nv.rows, nv.cols, "cosine_similarity");
  std::size_t cnt = (std::size_t)nu.rows * nu.cols;
  std::size_t uo = nu.val, vo = nv.val;
  const double* ud = vals_.data() + uo;
  const double* vd = vals_.data() + vo;
  double un = std::sqrt(kern::active().dot(ud, ud, cnt));
  double vn = std::sqrt(kern::active().dot(vd, vd, cnt));
  if (un <= 1e-12 || vn <= 1e-12)
    throw DegenerateVectorError(
        "cosine_similarity: vector norm below 1e-12 (|u|=" +
        std::to_string(un) + ", |v|=" + std::to_string(vn) + ")");
  Node n{};
  n.op = Op::kCosine;
  n.a = u.v;
  n.b = v.v;
  n.needs_grad = nu.needs_grad || nv.needs_grad;
  n.rows = 1;
  n.cols = 1;
  n.c0 = un;
  n.c1 = vn;
  NodeId id = push(n, "cosine_similarity");
  double s =
      kern::active().dot(vals_.data() + uo, vals_.data() + vo, cnt) / (un * vn);
  vals_[nodes_.back().val] = s;
  if (!std::isfinite(s))
    throw NumericError("cosine_similarity produced a non-finite value");
  return id;
}

NodeId Graph::gather_rows(NodeId table, const std::vector<int>& ids) {
  const Node& nt = at(table);
  if (ids.empty()) throw DomainError("gather_rows: no rows requested");
  for (int id : ids)
    if (id < 0 || static_cast<std::uint32_t>(id) >= nt.rows)
      throw DomainError("gather_rows: row " + std::to_string(id) +
                        " outside table with " + std::to_string(nt.rows) +
                        " rows");
  Node n{};
  n.op = Op::kGatherRows;
  n.a = table.v;
  n.needs_grad = nt.needs_grad;
  n.rows = static_cast<std::uint32_t>(ids.size());
  n.cols = nt.cols;
  n.iaux = static_cast<std::uint32_t>(iaux_.size());
  n.iaux_n = static_cast<std::uint32_t>(ids.size());
  for (int id : ids) iaux_.push_back(id);
  std::size_t to = nt.val;
  std::size_t d = nt.cols;
  NodeId id = push(n, "gather_rows");
  double* y = vals_.data() + nodes_.back().val;
  const double* t = vals_.data() + to;
  for (std::size_t r = 0; r < ids.size(); ++r)
    for (std::size_t c = 0; c < d; ++c)
      y[r * d + c] = t[static_cast<std::size_t>(ids[r]) * d + c];
  return id;
}

NodeId Graph::row_view(NodeId m, std::size_t r) {
  const Node& nm = at(m);
  if (r >= nm.rows)
    throw DimensionError("row_view: row " + std::to_string(r) +
                         " outside matrix " + dims_str(nm.rows, nm.cols));
  Node n{};
  n.op = Op::kRowView;
  n.a = m.v;
  n.needs_grad = nm.needs_grad;
  n.rows = 1;
  n.cols = nm.cols;
  n.i0 = static_cast<std::int32_t>(r);
  std::size_t mo = nm.val, d = nm.cols;
  NodeId id = push(n, "row_view");
  double* y = vals_.data() + nodes_.back().val;
  const double* src = vals_.data() + mo + r * d;
  for (std::size_t c = 0; c < d; ++c) y[c] = src[c];
  return id;
}

NodeId Graph::row_dots(NodeId rows, NodeId v) {
  const Node& nr = at(rows);
  const Node& nv = at(v);
  if (nv.rows != 1 || nv.cols != nr.cols)
    throw DimensionError("row_dots: shapes " + dims_str(nr.rows, nr.cols) +
                         " and " + dims_str(nv.rows, nv.cols) +
                         " do not agree");
  Node n{};
  n.op = Op::kRowDots;
  n.a = rows.v;
  n.b = v.v;
  n.needs_grad = nr.needs_grad || nv.needs_grad;
  n.rows = 1;
  n.cols = nr.rows;
  std::size_t ro = nr.val, vo = nv.val, nrows = nr.rows, d = nr.cols;
  NodeId id = push(n, "row_dots");
  double* y = vals_.data() + nodes_.back().val;
  for (std::size_t i = 0; i < nrows; ++i)
    y[i] = kern::active().dot(vals_.data() + ro + i * d, vals_.data() + vo, d);
  if (!all_finite(y, nrows))
    throw NumericError("row_dots produced a non-finite value");
  return id;
}

NodeId Graph::weighted_row_sum(NodeId rows, NodeId weights,
                               const std::vector<double>& coeffs) {
  const Node& nr = at(rows);
  const Node& nw = at(weights);
  if (nw.rows != 1 || nw.cols != nr.rows)
    throw DimensionError("weighted_row_sum: shapes " +
                         dims_str(nr.rows, nr.cols) + " and " +
                         dims_str(nw.rows, nw.cols) + " do not agree");
  if (!coeffs.empty() && coeffs.size() != nr.rows)
    throw DimensionError("weighted_row_sum: coefficient count " +
                         std::to_string(coeffs.size()) +
                         " does not match row count " +
                         std::to_string(nr.rows));
  Node n{};
  n.op = Op::kWeightedRowSum;
  n.a = rows.v;
  n.b = weights.v;
  n.needs_grad = nr.needs_grad || nw.needs_grad;
  n.rows = 1;
  n.cols = nr.cols;
  n.daux = static_cast<std::uint32_t>(daux_.size());
  n.daux_n = static_cast<std::uint32_t>(coeffs.size());
  for (double c : coeffs) daux_.push_back(c);
  std::size_t ro = nr.val, wo = nw.val, nrows = nr.rows, d = nr.cols;
  NodeId id = push(n, "weighted_row_sum");
  double* y = vals_.data() + nodes_.back().val;
  const double* w = vals_.data() + wo;
  const double* cf = coeffs.empty() ? nullptr
                                    : daux_.data() + nodes_.back().daux;
  for (std::size_t c = 0; c < d; ++c) y[c] = 0.0;
  for (std::size_t i = 0; i < nrows; ++i) {
    double f = w[i] * (cf ? cf[i] : 1.0);
    if (f == 0.0) continue;  // exact zeros contribute nothing, bitwise
    kern::active().axpy(y, f, vals_.data() + ro + i * d, d);
  }
  if (!all_finite(y, d))
    throw NumericError("weighted_row_sum produced a non-finite value");
  return id;
}

NodeId Graph::mean_rows(NodeId rows) {
  const Node& nr = at(rows);
  Node n{};
  n.op = Op::kMeanRows;
  n.a = rows.v;
  n.needs_grad = nr.needs_grad;
  n.rows = 1;
  n.cols = nr.cols;
  std::size_t ro = nr.val, nrows = nr.rows, d = nr.cols;
  NodeId id = push(n, "mean_rows");
  double* y = vals_.data() + nodes_.back().val;
  for (std::size_t c = 0; c < d; ++c) y[c] = 0.0;
  double inv = 1.0 / static_cast<double>(nrows);
  for (std::size_t i = 0; i < nrows; ++i)
    kern::active().axpy(y, inv, vals_.data() + ro + i * d, d);
  if (!all_finite(y, d))
    throw NumericError("mean_rows produced a non-finite value");
  return id;
}

NodeId Graph::suppress(NodeId cur, NodeId prev, double ratio, double value) {
  const Node& nc = at(cur);
  const Node& np = at(prev);
  require_same_shape(nc.rows, nc.cols, np.rows, np.cols, "suppress");
  if (nc.rows != 1)
    throw DimensionError("suppress expects vectors, got " +
                         dims_str(nc.rows, nc.cols));
  std::size_t cnt = nc.cols;
  std::size_t co = nc.val, po = np.val;
  // mask computed from the previous scores as plain data
  double m = kern::active().max(vals_.data() + po, cnt);
  double thr = ratio * m;
  Node n{};
  n.op = Op::kSuppress;
  n.a = cur.v;
  n.needs_grad = nc.needs_grad;
  n.rows = 1;
  n.cols = nc.cols;
  n.c0 = value;
  n.iaux = static_cast<std::uint32_t>(iaux_.size());
  std::uint32_t mask_n = 0;
  for (std::size_t i = 0; i < cnt; ++i) {
    if (vals_[po + i] >= thr) {
      iaux_.push_back(static_cast<std::int32_t>(i));
      ++mask_n;
    }
  }
  n.iaux_n = mask_n;
  NodeId id = push(n, "suppress");
  double* y = vals_.data() + nodes_.back().val;
  const double* x = vals_.data() + co;
  for (std::size_t i = 0; i < cnt; ++i) y[i] = x[i];
  const std::int32_t* mask = iaux_.data() + nodes_.back().iaux;
  for (std::uint32_t k = 0; k < mask_n; ++k)
    y[static_cast<std::size_t>(mask[k])] = value;
  return id;
}

void Graph::backward(NodeId loss) {
  const Node& nl = at(loss);
  if (nl.rows != 1 || nl.cols != 1)
    throw DomainError("backward expects a scalar node, got " +
                      dims_str(nl.rows, nl.cols));
  if (!nl.needs_grad) return;  // nothing upstream carries gradient
  grads_[nl.grad] = 1.0;
  for (std::int32_t i = loss.v; i >= 0; --i) {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.needs_grad || n.op == Op::kInput) continue;
    backward_node(n);
  }
}

void Graph::backward_node(const Node& n) {
  const kern::Kernels& k = kern::active();
  std::size_t cnt = static_cast<std::size_t>(n.rows) * n.cols;
  const double* g = grads_.data() + n.grad;
  const double* y = vals_.data() + n.val;

  Node& na = nodes_[static_cast<std::size_t>(n.a)];
  const bool ga = na.needs_grad;
  double* ag = ga ? grads_.data() + na.grad : nullptr;
  const double* av = vals_.data() + na.val;

  Node* nb = n.b >= 0 ? &nodes_[static_cast<std::size_t>(n.b)] : nullptr;
  const bool gb = nb != nullptr && nb->needs_grad;
  double* bg = gb ? grads_.data() + nb->grad : nullptr;
  const double* bv = nb != nullptr ? vals_.data() + nb->val : nullptr;

  switch (n.op) {
    case Op::kInput:
      break;
    case Op::kMatVec: {
      // y = A x, A = a (R x C), x = b (C)
      std::size_t r = na.rows, c = na.cols;
      for (std::size_t i = 0; i < r; ++i) {
        if (ga) k.axpy(ag + i * c, g[i], bv, c);
        if (gb) k.axpy(bg, g[i], av + i * c, c);
      }
      break;
    }
    case Op::kMatTVec: {
      // y = A^T x, A = a (R x C), x = b (R)
      std::size_t r = na.rows, c = na.cols;
      for (std::size_t i = 0; i < r; ++i) {
        if (ga) k.axpy(ag + i * c, bv[i], g, c);
        if (gb) bg[i] += k.dot(av + i * c, g, c);
      }
      break;
    }
    case Op::kAdd:
      if (ga) k.axpy(ag, 1.0, g, cnt);
      if (gb) k.axpy(bg, 1.0, g, cnt);
      break;
    case Op::kSub:
      if (ga) k.axpy(ag, 1.0, g, cnt);
      if (gb) k.axpy(bg, -1.0, g, cnt);
      break;
    case Op::kMul:
      if (ga) k.mul_acc(ag, g, bv, cnt);
      if (gb) k.mul_acc(bg, g, av, cnt);
      break;
    case Op::kScale:
      if (ga) k.axpy(ag, n.c0, g, cnt);
      break;
    case Op::kAddConst:
      if (ga) k.axpy(ag, 1.0, g, cnt);
      break;
    case Op::kTanh:
      if (ga)
        for (std::size_t i = 0; i < cnt; ++i)
          ag[i] += g[i] * (1.0 - y[i] * y[i]);
      break;
    case Op::kSigmoid:
      if (ga)
        for (std::size_t i = 0; i < cnt; ++i)
          ag[i] += g[i] * y[i] * (1.0 - y[i]);
      break;
    case Op::kRelu:
      // subgradient 0 at the kink
      if (ga)
        for (std::size_t i = 0; i < cnt; ++i)
          if (av[i] > 0.0) ag[i] += g[i];
      break;
    case Op::kSoftmax: {
      if (ga) {
        double s = k.dot(y, g, cnt);
        for (std::size_t i = 0; i < cnt; ++i) ag[i] += y[i] * (g[i] - s);
      }
      break;
    }
    case Op::kDot:
      if (ga) k.axpy(ag, g[0], bv, (std::size_t)na.rows * na.cols);
      if (gb) k.axpy(bg, g[0], av, (std::size_t)na.rows * na.cols);
      break;
    case Op::kSum:
      if (ga)
        for (std::size_t i = 0; i < (std::size_t)na.rows * na.cols; ++i)
          ag[i] += g[0];
      break;
    case Op::kCosine: {
      std::size_t d = (std::size_t)na.rows * na.cols;
      double un = n.c0, vn = n.c1, s = y[0], g0 = g[0];
      double inv_uv = 1.0 / (un * vn);
      if (ga) {
        double cu = s / (un * un);
        for (std::size_t i = 0; i < d; ++i)
          ag[i] += g0 * (bv[i] * inv_uv - cu * av[i]);
      }
      if (gb) {
        double cv = s / (vn * vn);
        for (std::size_t i = 0; i < d; ++i)
          bg[i] += g0 * (av[i] * inv_uv - cv * bv[i]);
      }
      break;
    }
    case Op::kGatherRows: {
      if (ga) {
        std::size_t d = n.cols;
        const std::int32_t* ids = iaux_.data() + n.iaux;
        for (std::uint32_t r = 0; r < n.iaux_n; ++r)
          k.axpy(ag + static_cast<std::size_t>(ids[r]) * d, 1.0, g + r * d, d);
      }
      break;
    }
    case Op::kRowView:
      if (ga)
        k.axpy(ag + static_cast<std::size_t>(n.i0) * n.cols, 1.0, g, n.cols);
      break;
    case Op::kRowDots: {
      std::size_t nrows = na.rows, d = na.cols;
      for (std::size_t i = 0; i < nrows; ++i) {
        if (ga) k.axpy(ag + i * d, g[i], bv, d);
        if (gb) k.axpy(bg, g[i], av + i * d, d);
      }
      break;
    }
    case Op::kWeightedRowSum: {
      std::size_t nrows = na.rows, d = na.cols;
      const double* cf = n.daux_n > 0 ? daux_.data() + n.daux : nullptr;
      const double* w = bv;
      for (std::size_t i = 0; i < nrows; ++i) {
        double ci = cf ? cf[i] : 1.0;
        if (gb && ci != 0.0) bg[i] += ci * k.dot(av + i * d, g, d);
        double f = w[i] * ci;
        if (ga && f != 0.0) k.axpy(ag + i * d, f, g, d);
      }
      break;
    }
    case Op::kMeanRows: {
      if (ga) {
        std::size_t nrows = na.rows, d = na.cols;
        double inv = 1.0 / static_cast<double>(nrows);
        for (std::size_t i = 0; i < nrows; ++i) k.axpy(ag + i * d, inv, g, d);
      }
      break;
    }
    case Op::kSuppress: {
      // replaced entries are constants; everything else passes through
      if (ga) {
        const std::int32_t* mask = iaux_.data() + n.iaux;
        std::uint32_t mi = 0;
        for (std::size_t i = 0; i < cnt; ++i) {
          if (mi < n.iaux_n && mask[mi] == static_cast<std::int32_t>(i)) {
            ++mi;
            continue;
          }
          ag[i] += g[i];
        }
      }
      break;
    }
  }
}

std::span<const double> Graph::value(NodeId id) const {
  const Node& n = at(id);
  return {vals_.data() + n.val, static_cast<std::size_t>(n.rows) * n.cols};
}

std::span<const double> Graph::grad(NodeId id) const {
  const Node& n = at(id);
  if (!n.needs_grad)
    throw DomainError("node has no gradient (needs_grad is false)");
  return {grads_.data() + n.grad, static_cast<std::size_t>(n.rows) * n.cols};
}

double Graph::scalar(NodeId id) const {
  const Node& n = at(id);
  if (n.rows != 1 || n.cols != 1)
    throw DomainError("scalar() on node of shape " +
                      dims_str(n.rows, n.cols));
  return vals_[n.val];
}

namespace {
Tensor make_tensor(std::size_t rows, std::size_t cols, const double* data) {
  std::vector<double> d(data, data + rows * cols);
  if (rows == 1) return Tensor::vec(std::move(d));
  return Tensor::mat(rows, cols, std::move(d));
}
}  // namespace

Tensor Graph::value_tensor(NodeId id) const {
  const Node& n = at(id);
  return make_tensor(n.rows, n.cols, vals_.data() + n.val);
}

Tensor Graph::grad_tensor(NodeId id) const {
  const Node& n = at(id);
  if (!n.needs_grad)
    throw DomainError("node has no gradient (needs_grad is false)");
  return make_tensor(n.rows, n.cols, grads_.data() + n.grad);
}

std::size_t Graph::node_rows(NodeId id) const { return at(id).rows; }
std::size_t Graph::node_cols(NodeId id) const { return at(id).cols; }
bool Graph::node_needs_grad(NodeId id) const { return at(id).needs_grad; }

void Graph::reset() {
  nodes_.clear();
  vals_.clear();
  grads_.clear();
  iaux_.clear();
  daux_.clear();
}

}  // namespace coattn
