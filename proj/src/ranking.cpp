#include "coattn/ranking.hpp"

#include <algorithm>

#include "coattn/errors.hpp"

namespace coattn {

NodeId score_statement(Graph& g, NodeId fused, NodeId statement_encoding,
                       NodeId projection) {
  return score_projected(g, g.linear_map(projection, fused),
                         statement_encoding);
}

NodeId score_projected(Graph& g, NodeId projected_fused,
                       NodeId statement_encoding) {
  return g.cosine_similarity(projected_fused, statement_encoding);
}

NodeId margin_rank_loss(Graph& g, const std::vector<NodeId>& positive,
                        const std::vector<NodeId>& negative, double margin) {
  if (positive.empty())
    throw LossDefinitionError("ranking loss needs at least one positive score");
  if (negative.empty())
    throw LossDefinitionError("ranking loss needs at least one negative score");

  NodeId total{};
  for (NodeId pos : positive) {
    for (NodeId neg : negative) {
      NodeId term = g.relu(g.add_const(g.sub(neg, pos), margin));
      total = total.ok() ? g.add(total, term) : term;
    }
  }
  return total;
}

double margin_rank_loss_value(const std::vector<double>& positive,
                              const std::vector<double>& negative,
                              double margin) {
  if (positive.empty())
    throw LossDefinitionError("ranking loss needs at least one positive score");
  if (negative.empty())
    throw LossDefinitionError("ranking loss needs at least one negative score");
  double total = 0.0;
  for (double p : positive)
    for (double n : negative) total += std::max(0.0, margin - p + n);
  return total;
}

}  // namespace coattn
