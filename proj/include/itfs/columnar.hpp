#pragma once

#include "itfs/core.hpp"
#include "itfs/engine.hpp"

namespace itfs {

// Sparse input row: explicit (feature, value) entries sorted by strictly
// increasing feature index, zeros omitted. index is the global instance
// index of the row.
struct SparseRow {
    std::uint32_t index = 0;
    std::vector<std::pair<FeatureIndex, Value>> entries;
};

// Sparse row records plus the always-dense class vector.
struct SparseDataset {
    std::size_t num_features = 0;
    std::vector<SparseRow> rows;
    std::vector<Value> classes;  // length num_instances

    std::size_t num_instances() const { return rows.size(); }
};

// Rebuilds the dense row-major table (class column last). Intended for
// tests and oracle comparisons, not for large data.
RowDataset densify(const SparseDataset& data);

// Transposes row-major data into per-(feature, row-partition) blocks and
// sorts them by feature key into npart partitions. The class column travels
// through like any feature. npart is clamped to 2x the column count so a
// feature's blocks land in at most two output partitions.
ColumnStore columnar_transform(const WorkerPool& pool, const RowDataset& data,
                               std::size_t row_parts, std::size_t npart);

// Transposes sparse rows into one whole SparseFeatureVector per feature
// (entries sorted by instance index), grouped by feature key into npart
// partitions. Features absent from every row become empty vectors with
// cardinality 1. The class vector stays dense.
ColumnStore sparse_columnar_transform(const WorkerPool& pool, const SparseDataset& data,
                                      std::size_t npart);

}  // namespace itfs
