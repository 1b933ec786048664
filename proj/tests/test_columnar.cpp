#include <doctest.h>

#include <random>

#include "itfs/columnar.hpp"
#include "itfs/selector.hpp"
#include "test_util.hpp"

using namespace itfs;

namespace {

std::size_t total_blocks(const ColumnStore& store) {
    std::size_t total = 0;
    for (const auto& p : store.dense.partitions) total += p.size();
    return total;
}

}  // namespace

TEST_SUITE("columnar") {

TEST_CASE("8 instances x 4 columns over 2 row partitions give 8 grouped blocks") {
    std::mt19937_64 rng(1);
    const auto data = test::random_dataset(rng, 8, 3, 2, 4);  // 3 inputs + class
    const WorkerPool pool(2);
    const auto store = columnar_transform(pool, data, 2, 2);

    CHECK(store.npart == 2);
    CHECK(store.row_blocks == 2);
    CHECK(total_blocks(store) == 8);
    // Each output partition holds all blocks of exactly 2 features.
    for (const auto& part : store.dense.partitions) {
        REQUIRE(part.size() == 4);
        CHECK(part[0].feature == part[1].feature);
        CHECK(part[2].feature == part[3].feature);
        CHECK(part[0].block < part[1].block);
    }
}

TEST_CASE("single row partition gives one block per feature") {
    std::mt19937_64 rng(2);
    const auto data = test::random_dataset(rng, 10, 4);
    const WorkerPool pool(1);
    const auto store = columnar_transform(pool, data, 1, 3);
    CHECK(total_blocks(store) == data.num_columns());
    for (std::size_t k = 0; k < data.num_columns(); ++k) {
        const auto col = store.lookup_column(static_cast<FeatureIndex>(k));
        CHECK(col.values() == data.column(k));
    }
}

TEST_CASE("50x10 round-trip equals a direct transpose") {
    std::mt19937_64 rng(3);
    const auto data = test::random_dataset(rng, 50, 9);  // 10 columns
    const WorkerPool pool(2);
    const auto store = columnar_transform(pool, data, 4, 3);
    for (std::size_t k = 0; k < data.num_columns(); ++k)
        CHECK(store.lookup_column(static_cast<FeatureIndex>(k)).values() == data.column(k));
}

TEST_CASE("round-trip holds for every npart and layout stays invisible") {
    std::mt19937_64 rng(4);
    const std::size_t n = 6;
    const auto data = test::random_dataset(rng, 60, n);
    const WorkerPool pool(2);

    SelectionResult base;
    bool first = true;
    for (const std::size_t npart : {std::size_t{1}, std::size_t{2}, n, 2 * n}) {
        const auto store = columnar_transform(pool, data, 3, npart);
        for (std::size_t k = 0; k < data.num_columns(); ++k)
            REQUIRE(store.lookup_column(static_cast<FeatureIndex>(k)).values() ==
                    data.column(k));
        const auto result = select(pool, store, CriterionKind::Jmi, 3);
        if (first) {
            base = result;
            first = false;
        } else {
            CHECK(result.selected == base.selected);
        }
    }
}

TEST_CASE("cardinalities are 1 + observed max") {
    const auto data = RowDataset::from_rows({{0, 5, 1}, {2, 0, 0}});
    const WorkerPool pool(1);
    const auto store = columnar_transform(pool, data, 2, 2);
    CHECK(store.cardinalities == std::vector<Value>{3, 6, 2});
}

TEST_CASE("npart is clamped to twice the column count") {
    std::mt19937_64 rng(5);
    const auto data = test::random_dataset(rng, 12, 3);  // 4 columns
    const WorkerPool pool(1);
    const auto store = columnar_transform(pool, data, 1, 1000);
    CHECK(store.npart == 8);
}

TEST_CASE("sparse transform matches the dense columns of the same matrix") {
    std::mt19937_64 rng(6);
    const auto sdata = test::random_sparse(rng, 40, 12, 0.9);
    const auto dense_data = densify(sdata);
    const WorkerPool pool(2);
    const auto sparse_store = sparse_columnar_transform(pool, sdata, 4);
    const auto dense_store = columnar_transform(pool, dense_data, 2, 4);
    for (std::size_t k = 0; k < dense_data.num_columns(); ++k)
        CHECK(sparse_store.lookup_column(static_cast<FeatureIndex>(k)).values() ==
              dense_store.lookup_column(static_cast<FeatureIndex>(k)).values());
    CHECK(sparse_store.cardinalities == dense_store.cardinalities);
}

TEST_CASE("a feature absent from all rows has an empty vector and cardinality 1") {
    SparseDataset data;
    data.num_features = 3;
    data.rows = {{0, {{0, 1}}}, {1, {{2, 2}}}};
    data.classes = {0, 1};
    const WorkerPool pool(1);
    const auto store = sparse_columnar_transform(pool, data, 2);
    CHECK(store.cardinality(1) == 1);
    const auto col = store.lookup_column(1);
    CHECK(col.values() == std::vector<Value>{0, 0});
    std::size_t vectors = 0;
    for (const auto& part : store.sparse.partitions)
        for (const auto& vec : part) {
            ++vectors;
            if (vec.feature == 1) CHECK(vec.entries.empty());
        }
    CHECK(vectors == 3);
}

TEST_CASE("sparse 200x1000 at 1% density keeps per-feature non-zero counts") {
    std::mt19937_64 rng(7);
    const auto sdata = test::random_sparse(rng, 200, 1000, 0.01);
    const WorkerPool pool(2);
    const auto store = sparse_columnar_transform(pool, sdata, 16);

    // Direct per-feature scan of the input rows.
    std::vector<std::size_t> expected(sdata.num_features, 0);
    for (const auto& row : sdata.rows)
        for (const auto& [f, v] : row.entries) ++expected[f];

    std::size_t seen = 0;
    for (const auto& part : store.sparse.partitions)
        for (const auto& vec : part) {
            ++seen;
            CHECK(vec.entries.size() == expected[vec.feature]);
            for (std::size_t e = 1; e < vec.entries.size(); ++e)
                REQUIRE(vec.entries[e - 1].first < vec.entries[e].first);
        }
    CHECK(seen == sdata.num_features);
}

TEST_CASE("duplicate (instance, feature) pairs are rejected") {
    SparseDataset data;
    data.num_features = 2;
    data.rows = {{0, {{0, 1}}}, {0, {{0, 2}}}};  // same instance index twice
    data.classes = {0, 1};
    const WorkerPool pool(1);
    CHECK_THROWS_AS(sparse_columnar_transform(pool, data, 1), DataError);
}

TEST_CASE("sparse row index past the instance count is rejected") {
    SparseDataset data;
    data.num_features = 2;
    data.rows = {{5, {{0, 1}}}};
    data.classes = {0};
    const WorkerPool pool(1);
    CHECK_THROWS_AS(sparse_columnar_transform(pool, data, 1), DataError);
}

TEST_CASE("ragged rows are rejected at dataset construction") {
    CHECK_THROWS_AS(RowDataset::from_rows({{1, 2, 3}, {1, 2}}), DataError);
}

}  // TEST_SUITE
