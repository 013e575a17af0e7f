#pragma once

#include <vector>

#include "coattn/graph.hpp"
#include "coattn/tensor.hpp"

namespace coattn {

/// Similarity between a fused image embedding and a statement encoding:
/// cosine of the projected embedding against the encoding. Both vectors
/// must have norm above 1e-12.
NodeId score_statement(Graph& g, NodeId fused, NodeId statement_encoding,
                       NodeId projection);

/// Same, with the projected image embedding precomputed (it is shared by
/// every candidate statement of one image).
NodeId score_projected(Graph& g, NodeId projected_fused,
                       NodeId statement_encoding);

/// Max-margin ranking loss over every positive/negative pair:
/// sum_j sum_l max(0, margin - s_pos_j + s_neg_l).
/// Requires at least one positive and one negative score.
NodeId margin_rank_loss(Graph& g, const std::vector<NodeId>& positive,
                        const std::vector<NodeId>& negative, double margin);

/// Plain-value form of the loss for evaluation and testing.
double margin_rank_loss_value(const std::vector<double>& positive,
                              const std::vector<double>& negative,
                              double margin);

}  // namespace coattn
