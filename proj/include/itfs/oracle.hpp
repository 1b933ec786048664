#pragma once

#include <optional>
#include <span>

#include "itfs/core.hpp"

namespace itfs {

// Sequential brute-force references used as ground truth in tests. They
// share only the core types with the partitioned path: tallying, term
// evaluation and summation are all independent implementations.

// I(A;B) from a direct joint frequency table, in nats.
double oracle_mi(std::span<const Value> a, std::span<const Value> b);

// I(A;B|C) from a direct triple frequency table, in nats.
double oracle_cmi(std::span<const Value> a, std::span<const Value> b,
                  std::span<const Value> c);

// Greedy selection that re-evaluates every candidate's full criterion
// formula from scratch each iteration via oracle_mi / oracle_cmi. Soft
// limits (n <= 200, m <= 10000) only produce a warning. Same smallest-index
// tie rule as the main path.
SelectionResult oracle_select(const RowDataset& data, CriterionKind kind,
                              std::size_t num_select, std::optional<double> beta = {});

}  // namespace itfs
