#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "itfs/engine.hpp"

namespace itfs {

// Discretized feature value. Inputs must be pre-binned to small
// non-negative integers; count-based estimators are then exact.
using Value = std::uint32_t;
using FeatureIndex = Key;

// CLI exit-code buckets: ConfigError -> 1, IoError -> 2, DataError -> 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense row-major table of discretized feature values plus a class column.
class RowDataset {
public:
    static constexpr std::size_t kLastColumn = std::numeric_limits<std::size_t>::max();

    // cells is row-major with num_inputs + 1 entries per row (inputs plus
    // class). class_index defaults to the last column.
    RowDataset(std::size_t num_inputs, std::vector<Value> cells,
               std::size_t class_index = kLastColumn);

    static RowDataset from_rows(const std::vector<std::vector<Value>>& rows,
                                std::size_t class_index = kLastColumn);

    std::size_t num_features() const { return num_inputs_; }
    std::size_t num_instances() const { return num_rows_; }
    std::size_t num_columns() const { return num_inputs_ + 1; }
    std::size_t class_index() const { return class_index_; }

    Value at(std::size_t row, std::size_t col) const {
        return cells_[row * num_columns() + col];
    }
    std::span<const Value> row(std::size_t r) const {
        return {cells_.data() + r * num_columns(), num_columns()};
    }
    std::vector<Value> column(std::size_t col) const;

private:
    std::size_t num_inputs_ = 0;
    std::size_t num_rows_ = 0;
    std::size_t class_index_ = 0;
    std::vector<Value> cells_;
};

// One feature's values for one row partition of the source dataset.
// Concatenating the blocks of a feature in ascending block order
// reproduces the source column exactly.
struct FeatureBlock {
    FeatureIndex feature = 0;
    std::uint32_t block = 0;
    std::vector<Value> values;
};

// Whole-column sparse vector: (instance, value) entries sorted by strictly
// increasing instance index, zeros omitted.
struct SparseFeatureVector {
    FeatureIndex feature = 0;
    std::vector<std::pair<std::uint32_t, Value>> entries;
};

// Immutable snapshot of a full column, replicated to every worker. Dense
// consumers address it as (block, offset); sparse consumers by instance.
class BroadcastColumn {
public:
    BroadcastColumn() = default;

    // block_sizes empty means a single block covering the whole column.
    BroadcastColumn(FeatureIndex feature, std::vector<Value> values,
                    std::vector<std::size_t> block_sizes = {});

    FeatureIndex feature() const { return feature_; }
    std::size_t size() const { return values_.size(); }
    std::size_t num_blocks() const { return offsets_.size() - 1; }
    std::size_t block_offset(std::size_t block) const { return offsets_[block]; }
    std::size_t block_size(std::size_t block) const {
        return offsets_[block + 1] - offsets_[block];
    }

    Value at(std::size_t block, std::size_t offset) const {
        return values_[offsets_[block] + offset];
    }
    Value operator[](std::size_t instance) const { return values_[instance]; }

    const std::vector<Value>& values() const { return values_; }

private:
    FeatureIndex feature_ = 0;
    std::vector<Value> values_;
    std::vector<std::size_t> offsets_;  // size num_blocks + 1
};

// Engine broadcast primitive: copies the column, so later mutation of the
// source cannot be observed through the handle.
inline BroadcastColumn broadcast(FeatureIndex feature, std::vector<Value> values,
                                 std::vector<std::size_t> block_sizes = {}) {
    return BroadcastColumn(feature, std::move(values), std::move(block_sizes));
}

// 3-D count tensor indexed [conditioning value][candidate value][paired
// value]. The conditioning axis has size 1 when no conditioning variable is
// involved. Cube addition is cell-wise and integer-exact.
class ContingencyCube {
public:
    ContingencyCube() = default;
    ContingencyCube(std::size_t ysize, std::size_t isize, std::size_t jsize);

    std::size_t ysize() const { return ysize_; }
    std::size_t isize() const { return isize_; }
    std::size_t jsize() const { return jsize_; }

    std::int64_t& at(std::size_t y, std::size_t i, std::size_t j) {
        return counts_[(y * isize_ + i) * jsize_ + j];
    }
    std::int64_t at(std::size_t y, std::size_t i, std::size_t j) const {
        return counts_[(y * isize_ + i) * jsize_ + j];
    }

    ContingencyCube& operator+=(const ContingencyCube& other);

    std::int64_t total() const;

    bool operator==(const ContingencyCube&) const = default;

private:
    std::size_t ysize_ = 0, isize_ = 0, jsize_ = 0;
    std::vector<std::int64_t> counts_;
};

// Count-backed marginal and joint tables for the broadcast variables (the
// class and each selected feature). Probabilities are count / m evaluated
// at access time, so they stay exact in rational terms.
class ProportionCache {
public:
    void put_marginal(FeatureIndex f, std::vector<std::int64_t> counts,
                      std::size_t num_instances);
    // counts laid out [value][class value].
    void put_joint(FeatureIndex f, std::vector<std::int64_t> counts,
                   std::size_t card, std::size_t class_card,
                   std::size_t num_instances);

    bool has_marginal(FeatureIndex f) const { return marginal_.count(f) != 0; }
    bool has_joint(FeatureIndex f) const { return joint_.count(f) != 0; }

    std::int64_t marginal_count(FeatureIndex f, std::size_t v) const;
    std::int64_t joint_count(FeatureIndex f, std::size_t v, std::size_t y) const;
    std::size_t marginal_size(FeatureIndex f) const;

    double marginal(FeatureIndex f, std::size_t v) const;
    double joint(FeatureIndex f, std::size_t v, std::size_t y) const;

    std::size_t num_instances() const { return num_instances_; }

private:
    struct JointTable {
        std::size_t card = 0, class_card = 0;
        std::vector<std::int64_t> counts;
    };
    std::size_t num_instances_ = 0;
    std::unordered_map<FeatureIndex, std::vector<std::int64_t>> marginal_;
    std::unordered_map<FeatureIndex, JointTable> joint_;
};

// The eight criteria of the generic relevance/redundancy/conditional-
// redundancy score family. "If" (informative fragments) is equivalent to
// Cmim and kept as a separate name only.
enum class CriterionKind { Mim, Mifs, Jmi, Cmi, Mrmr, Cmim, If, Icap };

// Case-insensitive: mim, mifs, jmi, cmi, mrmr, cmim, if, icap.
CriterionKind parse_criterion(const std::string& name);
const char* criterion_name(CriterionKind kind);

// Per-candidate cached relevance plus incrementally updated redundancy
// terms. Mutated only by the single-threaded selection driver.
struct CriterionAccumulator {
    CriterionKind kind = CriterionKind::Mim;
    double beta = 0.0;   // pairwise-MI weight (free for Mifs only)
    double gamma = 0.0;  // conditional-MI weight (fixed per criterion)
    std::size_t num_selected = 0;  // |S|: update passes folded in

    // Parallel arrays over candidates, ascending feature index.
    std::vector<FeatureIndex> feature;
    std::vector<double> relevance;  // written once at init, never mutated
    std::vector<double> red_sum;    // sum of I(Xj;Xi) over selected j
    std::vector<double> cond_sum;   // sum of I(Xj;Xi|Y) over selected j
    std::vector<double> max_term;   // max over selected j of mi - cmi
    std::vector<double> icap_sum;   // sum of max(0, mi - cmi)
    std::vector<char> selected;

    // Selection order with scores frozen at selection time.
    std::vector<std::pair<FeatureIndex, double>> selection_log;

    std::size_t num_candidates() const { return feature.size(); }
    std::size_t live_count() const { return feature.size() - selection_log.size(); }
    // Slot for a feature index, or num_candidates() when absent.
    std::size_t slot_of(FeatureIndex f) const;
};

// Ordered (feature, score-at-selection) output of a selection run.
struct SelectionResult {
    CriterionKind criterion = CriterionKind::Mim;
    double beta = 0.0;  // meaningful for Mifs only
    std::vector<std::pair<FeatureIndex, double>> selected;
};

// Partitioned collection of per-feature blocks (dense) or whole sparse
// feature vectors, sorted by feature key within and across partitions.
struct ColumnStore {
    enum class Layout { DenseBlocks, SparseVectors };

    Layout layout = Layout::DenseBlocks;
    PartitionedCollection<FeatureBlock> dense;
    PartitionedCollection<SparseFeatureVector> sparse;
    std::vector<Value> dense_class;  // sparse layout only; class stays dense

    std::size_t npart = 1;
    std::size_t row_blocks = 1;  // row partitions feeding the dense transform
    std::size_t num_instances = 0;
    std::size_t num_features = 0;  // inputs, excluding the class
    std::size_t class_index = 0;
    std::vector<Value> cardinalities;  // per column, 1 + max observed value

    std::size_t cardinality(FeatureIndex f) const { return cardinalities[f]; }

    // Collects a full column and broadcasts it. Touches only partitions
    // whose key range covers the index; the touch counter is exposed so
    // tests can observe that.
    BroadcastColumn lookup_column(FeatureIndex f) const;

    std::uint64_t lookup_partitions_touched() const { return lookup_touched_; }
    void reset_lookup_counter() const { lookup_touched_ = 0; }

private:
    mutable std::uint64_t lookup_touched_ = 0;
};

}  // namespace itfs
