#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <stdexcept>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

namespace itfs {

// Feature indices double as partition keys. 32 bits covers the largest
// datasets this library targets (tens of millions of features).
using Key = std::uint32_t;

template <typename T>
using Keyed = std::pair<Key, T>;

// Fans indexed tasks out to a fixed set of persistent worker threads.
// Results are written into caller-owned slots keyed by task index, so the
// schedule can never influence the output. The thread count is capped at
// the hardware concurrency; the logical worker count stays a free
// parameter. Only the driver thread may submit work.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t workers = 1);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::size_t workers() const { return workers_; }

    // Runs fn(0) .. fn(count-1) and blocks until all are done. If tasks
    // throw, the exception from the lowest task index is rethrown and no
    // partial results are observable through this call.
    void run_indexed(std::size_t count,
                     const std::function<void(std::size_t)>& fn) const;

private:
    struct Shared;
    std::size_t workers_;
    std::unique_ptr<Shared> shared_;
};

// A sequence of element sequences. Elements are never silently reordered
// within a partition.
template <typename T>
struct PartitionedCollection {
    std::vector<std::vector<T>> partitions;

    std::size_t npart() const { return partitions.size(); }

    std::size_t total_size() const {
        std::size_t total = 0;
        for (const auto& p : partitions) total += p.size();
        return total;
    }

    // Concatenation in partition order.
    std::vector<T> flatten() const {
        std::vector<T> out;
        out.reserve(total_size());
        for (const auto& p : partitions)
            out.insert(out.end(), p.begin(), p.end());
        return out;
    }
};

// Applies f independently to each partition. f must be pure with respect to
// shared state; partition count is preserved.
template <typename In, typename F>
auto map_partitions(const WorkerPool& pool, const PartitionedCollection<In>& coll, F&& f) {
    using Out = typename std::invoke_result_t<F, const std::vector<In>&>::value_type;
    PartitionedCollection<Out> out;
    out.partitions.resize(coll.npart());
    pool.run_indexed(coll.npart(), [&](std::size_t p) {
        out.partitions[p] = f(coll.partitions[p]);
    });
    return out;
}

// Same, with the partition index available to the transform.
template <typename In, typename F>
auto map_partitions_indexed(const WorkerPool& pool, const PartitionedCollection<In>& coll, F&& f) {
    using Out = typename std::invoke_result_t<F, std::size_t, const std::vector<In>&>::value_type;
    PartitionedCollection<Out> out;
    out.partitions.resize(coll.npart());
    pool.run_indexed(coll.npart(), [&](std::size_t p) {
        out.partitions[p] = f(p, coll.partitions[p]);
    });
    return out;
}

namespace detail {

// Contiguous count-balanced chunk boundaries: the first (n % npart) chunks
// take one extra element.
inline std::vector<std::size_t> balanced_offsets(std::size_t n, std::size_t npart) {
    std::vector<std::size_t> offsets(npart + 1, 0);
    const std::size_t base = n / npart;
    const std::size_t extra = n % npart;
    for (std::size_t p = 0; p < npart; ++p)
        offsets[p + 1] = offsets[p] + base + (p < extra ? 1 : 0);
    return offsets;
}

}  // namespace detail

// Stable global sort by key. The sorted sequence is redistributed into
// exactly npart contiguous, count-balanced partitions, so the concatenation
// of output partitions is non-decreasing in key and equal keys keep their
// encounter order.
template <typename T>
PartitionedCollection<Keyed<T>> sort_by_key(PartitionedCollection<Keyed<T>> coll, std::size_t npart) {
    if (npart < 1) throw std::invalid_argument("sort_by_key: npart must be >= 1");
    std::vector<Keyed<T>> all;
    all.reserve(coll.total_size());
    for (auto& p : coll.partitions)
        for (auto& e : p) all.push_back(std::move(e));
    std::stable_sort(all.begin(), all.end(),
                     [](const Keyed<T>& a, const Keyed<T>& b) { return a.first < b.first; });

    PartitionedCollection<Keyed<T>> out;
    out.partitions.resize(npart);
    const auto offsets = detail::balanced_offsets(all.size(), npart);
    for (std::size_t p = 0; p < npart; ++p) {
        auto& dst = out.partitions[p];
        dst.reserve(offsets[p + 1] - offsets[p]);
        for (std::size_t i = offsets[p]; i < offsets[p + 1]; ++i)
            dst.push_back(std::move(all[i]));
    }
    return out;
}

// sort_by_key followed by run-length grouping of equal keys. Whole groups
// are distributed into npart contiguous partitions balanced by group count,
// so a key never straddles a partition boundary.
template <typename T>
PartitionedCollection<Keyed<std::vector<T>>> group_by_key(PartitionedCollection<Keyed<T>> coll,
                                                          std::size_t npart) {
    auto sorted = sort_by_key(std::move(coll), 1);
    auto& all = sorted.partitions[0];

    std::vector<Keyed<std::vector<T>>> groups;
    for (std::size_t i = 0; i < all.size();) {
        const Key k = all[i].first;
        std::vector<T> values;
        while (i < all.size() && all[i].first == k) {
            values.push_back(std::move(all[i].second));
            ++i;
        }
        groups.emplace_back(k, std::move(values));
    }

    PartitionedCollection<Keyed<std::vector<T>>> out;
    out.partitions.resize(npart);
    const auto offsets = detail::balanced_offsets(groups.size(), npart);
    for (std::size_t p = 0; p < npart; ++p)
        for (std::size_t i = offsets[p]; i < offsets[p + 1]; ++i)
            out.partitions[p].push_back(std::move(groups[i]));
    return out;
}

// Folds all values of each key with combine, which must be associative and
// commutative. The fold runs in deterministic partition-then-element order;
// with integer-count payloads the result is exact and independent of the
// partition layout.
template <typename T, typename Combine>
std::unordered_map<Key, T> reduce_by_key(PartitionedCollection<Keyed<T>> coll, Combine&& combine) {
    std::unordered_map<Key, T> out;
    for (auto& part : coll.partitions) {
        for (auto& [k, v] : part) {
            auto it = out.find(k);
            if (it == out.end())
                out.emplace(k, std::move(v));
            else
                it->second = combine(std::move(it->second), std::move(v));
        }
    }
    return out;
}

}  // namespace itfs
