#include "itfs/columnar.hpp"

#include <algorithm>
#include <iostream>

namespace itfs {

namespace {

std::size_t clamp_npart(std::size_t npart, std::size_t num_columns) {
    const std::size_t limit = 2 * num_columns;
    const std::size_t clamped = std::max<std::size_t>(1, std::min(npart, limit));
    if (clamped != npart)
        std::cerr << "itfs: clamping npart from " << npart << " to " << clamped
                  << " (2x column count)\n";
    return clamped;
}

}  // namespace

RowDataset densify(const SparseDataset& data) {
    const std::size_t n = data.num_features;
    const std::size_t m = data.num_instances();
    if (n < 1 || m < 1) throw DataError("sparse dataset is empty");
    if (data.classes.size() != m) throw DataError("class vector length mismatch");

    std::vector<Value> cells(m * (n + 1), 0);
    std::vector<char> seen(m, 0);
    for (std::size_t r = 0; r < m; ++r) {
        const SparseRow& row = data.rows[r];
        if (row.index >= m) throw DataError("sparse row index out of range");
        if (seen[row.index]) throw DataError("duplicate sparse row index");
        seen[row.index] = 1;
        for (const auto& [f, v] : row.entries) {
            if (f >= n) throw DataError("sparse feature index out of range");
            cells[row.index * (n + 1) + f] = v;
        }
        cells[row.index * (n + 1) + n] = data.classes[row.index];
    }
    return RowDataset(n, std::move(cells), n);
}

ColumnStore columnar_transform(const WorkerPool& pool, const RowDataset& data,
                               std::size_t row_parts, std::size_t npart) {
    const std::size_t ncols = data.num_columns();
    const std::size_t m = data.num_instances();
    row_parts = std::max<std::size_t>(1, std::min(row_parts, m));
    const std::size_t npart_eff = clamp_npart(npart, ncols);

    const auto row_offsets = detail::balanced_offsets(m, row_parts);

    // Per-partition transpose; block maxima feed the cardinality table.
    std::vector<std::vector<Keyed<FeatureBlock>>> emitted(row_parts);
    std::vector<std::vector<Value>> maxima(row_parts);
    pool.run_indexed(row_parts, [&](std::size_t p) {
        const std::size_t r0 = row_offsets[p], r1 = row_offsets[p + 1];
        std::vector<Value> local_max(ncols, 0);
        std::vector<Keyed<FeatureBlock>> out;
        out.reserve(ncols);
        for (std::size_t k = 0; k < ncols; ++k) {
            FeatureBlock blk{static_cast<FeatureIndex>(k), static_cast<std::uint32_t>(p), {}};
            blk.values.reserve(r1 - r0);
            out.emplace_back(static_cast<Key>(k), std::move(blk));
        }
        // Row-major traversal: sequential reads, one write stream per
        // feature. Column-major reads would fetch a cache line per cell.
        for (std::size_t r = r0; r < r1; ++r) {
            const auto row = data.row(r);
            for (std::size_t k = 0; k < ncols; ++k) {
                const Value v = row[k];
                out[k].second.values.push_back(v);
                if (v > local_max[k]) local_max[k] = v;
            }
        }
        emitted[p] = std::move(out);
        maxima[p] = std::move(local_max);
    });

    PartitionedCollection<Keyed<FeatureBlock>> coll{std::move(emitted)};
    auto sorted = sort_by_key(std::move(coll), npart_eff);

    ColumnStore store;
    store.layout = ColumnStore::Layout::DenseBlocks;
    store.npart = npart_eff;
    store.row_blocks = row_parts;
    store.num_instances = m;
    store.num_features = data.num_features();
    store.class_index = data.class_index();
    store.cardinalities.assign(ncols, 1);
    for (const auto& local_max : maxima)
        for (std::size_t k = 0; k < ncols; ++k)
            store.cardinalities[k] = std::max<Value>(store.cardinalities[k], local_max[k] + 1);

    store.dense.partitions.resize(npart_eff);
    for (std::size_t p = 0; p < npart_eff; ++p) {
        auto& dst = store.dense.partitions[p];
        dst.reserve(sorted.partitions[p].size());
        for (auto& [k, blk] : sorted.partitions[p]) dst.push_back(std::move(blk));
    }
    return store;
}

ColumnStore sparse_columnar_transform(const WorkerPool& pool, const SparseDataset& data,
                                      std::size_t npart) {
    const std::size_t n = data.num_features;
    const std::size_t m = data.num_instances();
    if (n < 1 || m < 1) throw DataError("sparse dataset is empty");
    if (data.classes.size() != m) throw DataError("class vector length mismatch");
    const std::size_t npart_eff = clamp_npart(npart, n + 1);

    // Emit one (feature, (instance, value)) tuple per explicit entry.
    using Entry = std::pair<std::uint32_t, Value>;
    const std::size_t chunks = std::max<std::size_t>(1, std::min(m, pool.workers() * 2));
    const auto row_offsets = detail::balanced_offsets(m, chunks);
    std::vector<std::vector<Keyed<Entry>>> emitted(chunks);
    pool.run_indexed(chunks, [&](std::size_t p) {
        std::vector<Keyed<Entry>> out;
        for (std::size_t r = row_offsets[p]; r < row_offsets[p + 1]; ++r) {
            const SparseRow& row = data.rows[r];
            if (row.index >= m) throw DataError("sparse row index out of range");
            FeatureIndex prev = 0;
            bool first = true;
            for (const auto& [f, v] : row.entries) {
                if (f >= n) throw DataError("sparse feature index out of range");
                if (!first && f <= prev) throw DataError("sparse row entries not increasing");
                prev = f;
                first = false;
                if (v == 0) throw DataError("sparse entry stores an explicit zero");
                out.emplace_back(f, Entry{row.index, v});
            }
        }
        emitted[p] = std::move(out);
    });

    auto grouped = group_by_key(PartitionedCollection<Keyed<Entry>>{std::move(emitted)},
                                npart_eff);

    // Vectorize groups and fill in features absent from every row, then
    // re-split the complete feature range so every feature is present.
    std::vector<SparseFeatureVector> vectors(n);
    for (std::size_t k = 0; k < n; ++k) vectors[k].feature = static_cast<FeatureIndex>(k);
    for (auto& part : grouped.partitions) {
        for (auto& [k, entries] : part) {
            std::sort(entries.begin(), entries.end(),
                      [](const Entry& a, const Entry& b) { return a.first < b.first; });
            for (std::size_t e = 1; e < entries.size(); ++e)
                if (entries[e].first == entries[e - 1].first)
                    throw DataError("duplicate (instance, feature) pair");
            vectors[k].entries = std::move(entries);
        }
    }

    ColumnStore store;
    store.layout = ColumnStore::Layout::SparseVectors;
    store.npart = npart_eff;
    store.row_blocks = 1;
    store.num_instances = m;
    store.num_features = n;
    store.class_index = n;
    store.dense_class = data.classes;

    store.cardinalities.assign(n + 1, 1);
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& [inst, v] : vectors[k].entries)
            store.cardinalities[k] = std::max<Value>(store.cardinalities[k], v + 1);
    for (const Value y : data.classes)
        store.cardinalities[n] = std::max<Value>(store.cardinalities[n], y + 1);

    store.sparse.partitions.resize(npart_eff);
    const auto feat_offsets = detail::balanced_offsets(n, npart_eff);
    for (std::size_t p = 0; p < npart_eff; ++p) {
        auto& dst = store.sparse.partitions[p];
        for (std::size_t k = feat_offsets[p]; k < feat_offsets[p + 1]; ++k)
            dst.push_back(std::move(vectors[k]));
    }
    return store;
}

}  // namespace itfs
