#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "itfs/columnar.hpp"
#include "itfs/oracle.hpp"
#include "itfs/selector.hpp"
#include "test_util.hpp"

using namespace itfs;

namespace {

constexpr CriterionKind kAllKinds[] = {CriterionKind::Mim,  CriterionKind::Mifs,
                                       CriterionKind::Jmi,  CriterionKind::Cmi,
                                       CriterionKind::Mrmr, CriterionKind::Cmim,
                                       CriterionKind::If,   CriterionKind::Icap};

bool same_selection(const SelectionResult& a, const SelectionResult& b, double tol) {
    if (a.selected.size() != b.selected.size()) return false;
    for (std::size_t i = 0; i < a.selected.size(); ++i) {
        if (a.selected[i].first != b.selected[i].first) return false;
        if (std::fabs(a.selected[i].second - b.selected[i].second) > tol) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("selector") {

TEST_CASE("ns=1 picks the single most relevant feature") {
    std::mt19937_64 rng(41);
    const auto data = test::random_dataset(rng, 80, 7);
    const WorkerPool pool(2);
    const auto store = columnar_transform(pool, data, 3, 4);
    const auto ycol = data.column(data.class_index());

    FeatureIndex expected = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < data.num_features(); ++k) {
        const double mi = oracle_mi(data.column(k), ycol);
        if (mi > best) {
            best = mi;
            expected = static_cast<FeatureIndex>(k);
        }
    }
    for (const auto kind : kAllKinds) {
        const auto result = select(pool, store, kind, 1);
        REQUIRE(result.selected.size() == 1);
        CHECK(result.selected[0].first == expected);
        CHECK(std::fabs(result.selected[0].second - best) <= 1e-12);
    }
}

TEST_CASE("ns=n yields a permutation of all input features") {
    std::mt19937_64 rng(42);
    const auto data = test::random_dataset(rng, 50, 9);
    const WorkerPool pool(2);
    const auto store = columnar_transform(pool, data, 2, 5);
    const auto result = select(pool, store, CriterionKind::Mrmr, 9);
    REQUIRE(result.selected.size() == 9);
    std::vector<FeatureIndex> got;
    for (const auto& [f, s] : result.selected) got.push_back(f);
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<FeatureIndex>{0, 1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("random 40x10: every criterion matches the sequential oracle") {
    std::mt19937_64 rng(43);
    const auto data = test::random_dataset(rng, 40, 10);
    const WorkerPool pool(2);
    const auto store = columnar_transform(pool, data, 3, 4);
    for (const auto kind : kAllKinds) {
        const auto fast = select(pool, store, kind, 10);
        const auto slow = oracle_select(data, kind, 10);
        CHECK(same_selection(fast, slow, 1e-10));
    }
}

TEST_CASE("first selected score equals its relevance") {
    std::mt19937_64 rng(44);
    const auto data = test::random_dataset(rng, 60, 6);
    const WorkerPool pool(1);
    const auto store = columnar_transform(pool, data, 2, 3);
    ProportionCache cache;
    const auto rel = compute_relevances(pool, store, cache);
    const auto result = select(pool, store, CriterionKind::Jmi, 4);
    const auto it = std::find_if(rel.begin(), rel.end(), [&](const auto& p) {
        return p.first == result.selected[0].first;
    });
    REQUIRE(it != rel.end());
    CHECK(result.selected[0].second == it->second);
}

TEST_CASE("compute_relevances: a copy of the class is worth its entropy") {
    std::mt19937_64 rng(45);
    const std::size_t m = 48;
    const auto y = test::random_column(rng, m, 3);
    std::vector<std::vector<Value>> rows(m);
    for (std::size_t r = 0; r < m; ++r)
        rows[r] = {y[r], test::random_column(rng, 1, 4)[0], 0, y[r]};
    rows[0][2] = 0;  // constant feature
    const auto data = RowDataset::from_rows(rows);
    const WorkerPool pool(2);
    const auto store = columnar_transform(pool, data, 2, 4);

    ProportionCache cache;
    const auto rel = compute_relevances(pool, store, cache);
    REQUIRE(rel.size() == 3);
    CHECK(std::fabs(rel[0].second - entropy(y)) <= 1e-12);  // copy of Y
    CHECK(rel[2].second == 0.0);                            // constant
}

TEST_CASE("compute_relevances matches the brute force on random 80x6") {
    std::mt19937_64 rng(46);
    const auto data = test::random_dataset(rng, 80, 6);
    const WorkerPool pool(2);
    const auto store = columnar_transform(pool, data, 3, 3);
    ProportionCache cache;
    const auto rel = compute_relevances(pool, store, cache);
    const auto ycol = data.column(data.class_index());
    REQUIRE(rel.size() == 6);
    for (const auto& [k, v] : rel)
        CHECK(std::fabs(v - oracle_mi(data.column(k), ycol)) <= 1e-12);
}

TEST_CASE("compute_redundancies closed forms and brute force") {
    // Product design: feature 0 runs through all combinations with feature
    // 1, so their empirical dependence is exactly zero. Feature 2 copies
    // feature 1.
    std::vector<std::vector<Value>> rows;
    for (Value a = 0; a < 3; ++a)
        for (Value b = 0; b < 4; ++b) rows.push_back({a, b, b, (a + b) % 2});
    const auto data = RowDataset::from_rows(rows);
    const WorkerPool pool(2);
    const auto store = columnar_transform(pool, data, 2, 4);

    ProportionCache cache;
    BroadcastColumn ycol;
    compute_relevances(pool, store, cache, &ycol);

    std::vector<char> mask(data.num_columns(), 0);
    mask[1] = 1;  // pretend feature 1 was just selected
    const auto red = compute_redundancies(pool, store, 1, ycol, cache, mask);
    REQUIRE(red.size() == 2);
    CHECK(red.at(0).mi == 0.0);  // independent of the paired feature
    CHECK(std::fabs(red.at(2).mi - entropy(data.column(1))) <= 1e-12);  // copy

    const auto yvals = data.column(data.class_index());
    for (const auto& [k, p] : red) {
        CHECK(std::fabs(p.mi - oracle_mi(data.column(k), data.column(1))) <= 1e-12);
        CHECK(std::fabs(p.cmi - oracle_cmi(data.column(k), data.column(1), yvals)) <= 1e-12);
    }
}

TEST_CASE("selection output is identical across runs, workers and nparts") {
    std::mt19937_64 rng(47);
    const auto data = test::random_dataset(rng, 90, 8);
    SelectionResult base;
    bool first = true;
    for (const std::size_t workers : {1, 2, 8}) {
        const WorkerPool pool(workers);
        for (const std::size_t npart : {1, 3, 9}) {
            const auto store = columnar_transform(pool, data, 2, npart);
            const auto result = select(pool, store, CriterionKind::Icap, 5);
            if (first) {
                base = result;
                first = false;
            } else {
                CHECK(same_selection(result, base, 0.0));
            }
        }
    }
}

TEST_CASE("lookups touch only partitions whose key range covers the feature") {
    std::mt19937_64 rng(48);
    const auto data = test::random_dataset(rng, 30, 11);  // 12 columns
    const WorkerPool pool(1);
    const auto store = columnar_transform(pool, data, 2, 6);

    for (FeatureIndex f = 0; f < 12; ++f) {
        std::size_t covering = 0;
        for (const auto& part : store.dense.partitions) {
            if (part.empty()) continue;
            if (part.front().feature <= f && f <= part.back().feature) ++covering;
        }
        store.reset_lookup_counter();
        store.lookup_column(f);
        CHECK(store.lookup_partitions_touched() == covering);
        CHECK(covering < store.npart);
    }
}

TEST_CASE("mim selection is descending relevance with index tie-break") {
    std::mt19937_64 rng(49);
    const auto data = test::random_dataset(rng, 70, 9);
    const WorkerPool pool(2);
    const auto store = columnar_transform(pool, data, 2, 4);
    ProportionCache cache;
    auto rel = compute_relevances(pool, store, cache);
    std::stable_sort(rel.begin(), rel.end(), [](const auto& a, const auto& b) {
        return a.second > b.second;
    });
    const auto result = select(pool, store, CriterionKind::Mim, 9);
    REQUIRE(result.selected.size() == rel.size());
    for (std::size_t i = 0; i < rel.size(); ++i) {
        CHECK(result.selected[i].first == rel[i].first);
        CHECK(result.selected[i].second == rel[i].second);
    }
}

TEST_CASE("ns above n clamps with a warning instead of failing") {
    std::mt19937_64 rng(50);
    const auto data = test::random_dataset(rng, 20, 4);
    const WorkerPool pool(1);
    const auto store = columnar_transform(pool, data, 1, 2);
    const auto result = select(pool, store, CriterionKind::Mim, 100);
    CHECK(result.selected.size() == 4);
}

TEST_CASE("invalid selection requests are rejected") {
    std::mt19937_64 rng(51);
    const auto data = test::random_dataset(rng, 20, 4);
    const WorkerPool pool(1);
    const auto store = columnar_transform(pool, data, 1, 2);
    CHECK_THROWS_AS(select(pool, store, CriterionKind::Mim, 0), std::invalid_argument);
    const ColumnStore empty;
    CHECK_THROWS_AS(select(pool, empty, CriterionKind::Mim, 1), std::invalid_argument);
    ProportionCache cache;
    CHECK_THROWS_AS(
        compute_redundancies(pool, store, 99, store.lookup_column(4), cache, {}),
        std::invalid_argument);
}

TEST_CASE("a single-valued class makes every relevance zero") {
    std::mt19937_64 rng(53);
    std::vector<std::vector<Value>> rows(30);
    for (auto& r : rows)
        r = {test::random_column(rng, 1, 4)[0], test::random_column(rng, 1, 3)[0], 0};
    const auto data = RowDataset::from_rows(rows);
    const WorkerPool pool(1);
    const auto store = columnar_transform(pool, data, 2, 2);
    ProportionCache cache;
    const auto rel = compute_relevances(pool, store, cache);
    for (const auto& [f, v] : rel) CHECK(v == 0.0);
    // Ties everywhere: mim falls back to index order.
    const auto result = select(pool, store, CriterionKind::Mim, 2);
    CHECK(result.selected[0].first == 0);
    CHECK(result.selected[1].first == 1);
}

TEST_CASE("sparse-path selection equals dense-path selection") {
    std::mt19937_64 rng(52);
    const auto sdata = test::random_sparse(rng, 120, 15, 0.2);
    const auto ddata = densify(sdata);
    const WorkerPool pool(2);
    const auto sstore = sparse_columnar_transform(pool, sdata, 5);
    const auto dstore = columnar_transform(pool, ddata, 2, 5);
    for (const auto kind : {CriterionKind::Jmi, CriterionKind::Cmim}) {
        const auto a = select(pool, sstore, kind, 6);
        const auto b = select(pool, dstore, kind, 6);
        CHECK(same_selection(a, b, 0.0));
    }
}

}  // TEST_SUITE
