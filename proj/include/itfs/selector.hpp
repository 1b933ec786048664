#pragma once

#include <optional>

#include "itfs/core.hpp"
#include "itfs/criteria.hpp"
#include "itfs/infotheory.hpp"

namespace itfs {

// Wall-clock breakdown of one selection run.
struct PhaseTimings {
    double relevance_ms = 0.0;
    std::vector<double> iteration_ms;  // one redundancy pass per later pick
};

struct SelectOptions {
    std::optional<double> beta;  // Mifs only
    double log_scale = 1.0;      // 1/ln 2 scores in bits; selection order invariant
    PhaseTimings* timings = nullptr;
};

// Relevance I(Xk;Y) for every input feature, ascending by index. Fills the
// cache with the class marginal table; optionally hands back the broadcast
// class column for reuse.
std::vector<std::pair<FeatureIndex, double>> compute_relevances(
    const WorkerPool& pool, const ColumnStore& store, ProportionCache& cache,
    BroadcastColumn* class_col_out = nullptr, double log_scale = 1.0);

// MI and CMI of the newly selected feature against every live candidate.
// Looks up and broadcasts the feature's column and caches its marginal and
// joint-with-class tables; the class column must already be broadcast.
MiCmiMap compute_redundancies(const WorkerPool& pool, const ColumnStore& store,
                              FeatureIndex best_feature, const BroadcastColumn& class_col,
                              ProportionCache& cache, const std::vector<char>& selected_mask,
                              double log_scale = 1.0);

// Greedy forward selection: relevance pass, then one redundancy pass per
// selected feature, until min(num_select, n) features are chosen.
SelectionResult select(const WorkerPool& pool, const ColumnStore& store, CriterionKind kind,
                       std::size_t num_select, const SelectOptions& options = {});

}  // namespace itfs
