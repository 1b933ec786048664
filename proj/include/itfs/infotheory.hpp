#pragma once

#include <cmath>
#include <optional>

#include "itfs/core.hpp"
#include "itfs/engine.hpp"

namespace itfs {

// Pairwise and conditional mutual information of one candidate feature
// against the current paired variable, in nats (cmi is 0 and unused when no
// conditioning variable was given).
struct MiCmiPair {
    FeatureIndex feature = 0;
    double mi = 0.0;
    double cmi = 0.0;
};

using CubeMap = std::unordered_map<FeatureIndex, ContingencyCube>;
using MiCmiMap = std::unordered_map<FeatureIndex, MiCmiPair>;

// Correctly rounded accumulation of doubles (Shewchuk-style partials, the
// math.fsum algorithm). The result is independent of the order terms are
// added in, so mathematically equal scores stay bitwise equal and the
// smallest-index tie rule fires identically everywhere.
class ExactSum {
public:
    void add(double x) {
        std::size_t used = 0;
        for (std::size_t i = 0; i < partials_.size(); ++i) {
            double p = partials_[i];
            if (std::fabs(x) < std::fabs(p)) std::swap(x, p);
            const double hi = x + p;
            const double lo = p - (hi - x);
            if (lo != 0.0) partials_[used++] = lo;
            x = hi;
        }
        partials_.resize(used);
        partials_.push_back(x);
    }

    double value() const {
        std::size_t n = partials_.size();
        if (n == 0) return 0.0;
        double hi = partials_[--n];
        double lo = 0.0;
        while (n > 0) {
            const double x = hi;
            const double y = partials_[--n];
            hi = x + y;
            const double yr = hi - x;
            lo = y - yr;
            if (lo != 0.0) break;
        }
        // Round-half-even can depend on the next partial down.
        if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                      (lo > 0.0 && partials_[n - 1] > 0.0))) {
            const double y = lo * 2.0;
            const double x = hi + y;
            if (y == x - hi) hi = x;
        }
        return hi;
    }

private:
    std::vector<double> partials_;  // non-overlapping, increasing magnitude
};

// Builds one contingency cube per candidate feature of a dense-layout store
// against the broadcast paired column (and optional conditioning column):
// counts[y][i][j] = instances with cond=y, candidate=i, paired=j. Candidates
// exclude the paired/conditioning features and anything marked in excluded.
// Per-block cubes are merged with reduce_by_key.
CubeMap get_histograms(const WorkerPool& pool, const ColumnStore& store,
                       FeatureIndex paired, const BroadcastColumn& paired_col,
                       std::optional<FeatureIndex> cond, const BroadcastColumn* cond_col,
                       const std::vector<char>& excluded = {});

// Sparse-layout equivalent. Zero rows of each cube are reconstructed from
// two accumulators (the (paired, cond) joint histogram and the cond
// histogram over all instances), so each feature costs O(nnz) instead of
// O(m) and exactly one cube per feature is emitted; no reduce step.
CubeMap sparse_histograms(const WorkerPool& pool, const ColumnStore& store,
                          FeatureIndex paired, const BroadcastColumn& paired_col,
                          std::optional<FeatureIndex> cond, const BroadcastColumn* cond_col,
                          const std::vector<char>& excluded = {});

// Converts cubes to MI (and CMI when cond is present) in nats. The cache
// must already hold the marginal table of paired, and when cond is present
// its marginal table plus the (paired, cond) joint table; candidate-side
// marginals and joints are recomputed locally from each cube. Terms with a
// zero count contribute exactly 0. log_scale rescales the result (1/ln 2
// gives bits); any positive scale leaves selection order unchanged.
MiCmiMap compute_mutual_info(const WorkerPool& pool, const CubeMap& cubes,
                             const ProportionCache& cache, FeatureIndex paired,
                             std::optional<FeatureIndex> cond, std::size_t num_instances,
                             double log_scale = 1.0);

// Plug-in entropy of a discrete column, in nats.
double entropy(std::span<const Value> column);

// Value counts of a column (size = cardinality).
std::vector<std::int64_t> tally_column(const BroadcastColumn& col, std::size_t card);
// Joint counts laid out [value][class value].
std::vector<std::int64_t> tally_joint(const BroadcastColumn& col, std::size_t card,
                                      const BroadcastColumn& cls, std::size_t class_card);

}  // namespace itfs
