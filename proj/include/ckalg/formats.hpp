#pragma once

#include <string_view>

#include "ckalg/graph.hpp"
#include "ckalg/graph_moves.hpp"

namespace ckalg {

/// Line-oriented graph format:
///
///     vertex v
///     edge e : v -> w     # comment
///
/// Throws ParseError carrying the offending line.
GraphPtr parse_graph_text(std::string_view text);

/// Lines `split <vertex> : {e1, e2} | {e3}`; unlisted vertices keep one class.
OutSplitPartition parse_partition_text(std::string_view text, const GraphPtr& g);

/// Partition in the same format, one `split` line per vertex with m(v) > 1.
std::string partition_to_text(const OutSplitPartition& part);

}  // namespace ckalg
