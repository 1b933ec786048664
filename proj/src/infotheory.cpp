#include "itfs/infotheory.hpp"

#include <algorithm>

namespace itfs {

namespace {

void check_column_length(const BroadcastColumn& col, std::size_t m, const char* what) {
    if (col.size() != m)
        throw std::invalid_argument(std::string(what) + " column length != instance count");
}

bool is_excluded(const std::vector<char>& excluded, FeatureIndex k) {
    return k < excluded.size() && excluded[k] != 0;
}

}  // namespace

CubeMap get_histograms(const WorkerPool& pool, const ColumnStore& store,
                       FeatureIndex paired, const BroadcastColumn& paired_col,
                       std::optional<FeatureIndex> cond, const BroadcastColumn* cond_col,
                       const std::vector<char>& excluded) {
    if (store.layout != ColumnStore::Layout::DenseBlocks)
        throw std::invalid_argument("get_histograms needs a dense-layout store");
    const std::size_t m = store.num_instances;
    check_column_length(paired_col, m, "paired");
    if (cond) check_column_length(*cond_col, m, "conditioning");

    const std::size_t jsize = store.cardinality(paired);
    const std::size_t ysize = cond ? store.cardinality(*cond) : 1;

    auto emitted = map_partitions(
        pool, store.dense, [&](const std::vector<FeatureBlock>& part) {
            std::vector<Keyed<ContingencyCube>> out;
            for (const FeatureBlock& blk : part) {
                const FeatureIndex k = blk.feature;
                if (k == paired || (cond && k == *cond) || is_excluded(excluded, k))
                    continue;
                const std::size_t isize = store.cardinality(k);
                if (blk.values.size() != paired_col.block_size(blk.block))
                    throw DataError("block length does not match the broadcast column");
                ContingencyCube cube(ysize, isize, jsize);
                const std::size_t len = blk.values.size();
                const Value* iv = blk.values.data();
                const Value* jv = paired_col.values().data() +
                                  paired_col.block_offset(blk.block);
                if (cond) {
                    const Value* yv = cond_col->values().data() +
                                      cond_col->block_offset(blk.block);
                    for (std::size_t e = 0; e < len; ++e) {
                        if (iv[e] >= isize || jv[e] >= jsize || yv[e] >= ysize)
                            throw DataError(
                                "value out of cube bounds (cardinality corruption)");
                        ++cube.at(yv[e], iv[e], jv[e]);
                    }
                } else {
                    for (std::size_t e = 0; e < len; ++e) {
                        if (iv[e] >= isize || jv[e] >= jsize)
                            throw DataError(
                                "value out of cube bounds (cardinality corruption)");
                        ++cube.at(0, iv[e], jv[e]);
                    }
                }
                out.emplace_back(k, std::move(cube));
            }
            return out;
        });

    return reduce_by_key(std::move(emitted), [](ContingencyCube a, const ContingencyCube& b) {
        a += b;
        return a;
    });
}

CubeMap sparse_histograms(const WorkerPool& pool, const ColumnStore& store,
                          FeatureIndex paired, const BroadcastColumn& paired_col,
                          std::optional<FeatureIndex> cond, const BroadcastColumn* cond_col,
                          const std::vector<char>& excluded) {
    if (store.layout != ColumnStore::Layout::SparseVectors)
        throw std::invalid_argument("sparse_histograms needs a sparse-layout store");
    const std::size_t m = store.num_instances;
    check_column_length(paired_col, m, "paired");
    if (cond) check_column_length(*cond_col, m, "conditioning");

    const std::size_t jsize = store.cardinality(paired);
    const std::size_t ysize = cond ? store.cardinality(*cond) : 1;

    // Accumulators over all m instances, shared read-only by every feature:
    // joint (paired, cond) histogram and cond histogram.
    std::vector<std::int64_t> joint_jy(jsize * ysize, 0);
    std::vector<std::int64_t> hist_y(ysize, 0);
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t j = paired_col[r];
        const std::size_t y = cond ? (*cond_col)[r] : 0;
        if (j >= jsize || y >= ysize)
            throw DataError("value out of cube bounds (cardinality corruption)");
        ++joint_jy[j * ysize + y];
        ++hist_y[y];
    }

    auto emitted = map_partitions(
        pool, store.sparse, [&](const std::vector<SparseFeatureVector>& part) {
            std::vector<Keyed<ContingencyCube>> out;
            std::vector<std::int64_t> leftover;
            for (const SparseFeatureVector& vec : part) {
                const FeatureIndex k = vec.feature;
                if (k == paired || (cond && k == *cond) || is_excluded(excluded, k))
                    continue;
                const std::size_t isize = store.cardinality(k);
                ContingencyCube cube(ysize, isize, jsize);

                // Explicit entries hit the cube directly and are taken out
                // of the joint accumulator.
                leftover = joint_jy;
                for (const auto& [inst, val] : vec.entries) {
                    if (inst >= m) throw DataError("sparse instance index out of range");
                    const std::size_t i = val;
                    const std::size_t j = paired_col[inst];
                    const std::size_t y = cond ? (*cond_col)[inst] : 0;
                    if (i == 0) throw DataError("sparse entry stores an explicit zero");
                    if (i >= isize)
                        throw DataError("value out of cube bounds (cardinality corruption)");
                    ++cube.at(y, i, j);
                    if (--leftover[j * ysize + y] < 0)
                        throw DataError("negative leftover count in sparse histogram");
                }

                // Whatever mass remains belongs to candidate value 0.
                for (std::size_t j = 0; j < jsize; ++j)
                    for (std::size_t y = 0; y < ysize; ++y)
                        cube.at(y, 0, j) += leftover[j * ysize + y];

                for (std::size_t y = 0; y < ysize; ++y) {
                    std::int64_t slice = 0;
                    for (std::size_t i = 0; i < isize; ++i)
                        for (std::size_t j = 0; j < jsize; ++j) slice += cube.at(y, i, j);
                    if (slice != hist_y[y])
                        throw DataError("sparse histogram slice does not add up");
                }
                out.emplace_back(k, std::move(cube));
            }
            return out;
        });

    // One cube per feature by construction; collect without a reduce.
    CubeMap result;
    for (auto& part : emitted.partitions) {
        for (auto& [k, cube] : part) {
            if (!result.emplace(k, std::move(cube)).second)
                throw std::logic_error("sparse path produced a duplicate cube key");
        }
    }
    return result;
}

namespace {

double clamp_nonnegative(double v, const char* what) {
    if (v < 0.0) {
        if (v < -1e-12)
            throw std::logic_error(std::string(what) + " fell below the numerical floor");
        return 0.0;
    }
    return v;
}

// MI and CMI for a single cube. Log arguments are ratios of exact integer
// products, so empirically independent variables contribute exactly 0.
MiCmiPair cube_mutual_info(FeatureIndex k, const ContingencyCube& cube,
                           const ProportionCache& cache, FeatureIndex paired,
                           std::optional<FeatureIndex> cond, std::size_t num_instances,
                           double log_scale) {
    const std::size_t ysize = cube.ysize(), isize = cube.isize(), jsize = cube.jsize();
    const double md = static_cast<double>(num_instances);

    // Candidate-side tables, local to this cube.
    std::vector<std::int64_t> joint_ij(isize * jsize, 0);
    std::vector<std::int64_t> count_i(isize, 0);
    std::vector<std::int64_t> count_iy(isize * ysize, 0);
    for (std::size_t y = 0; y < ysize; ++y)
        for (std::size_t i = 0; i < isize; ++i)
            for (std::size_t j = 0; j < jsize; ++j) {
                const std::int64_t c = cube.at(y, i, j);
                joint_ij[i * jsize + j] += c;
                count_i[i] += c;
                count_iy[i * ysize + y] += c;
            }

    ExactSum mi_sum;
    for (std::size_t i = 0; i < isize; ++i) {
        for (std::size_t j = 0; j < jsize; ++j) {
            const std::int64_t c_ij = joint_ij[i * jsize + j];
            if (c_ij == 0) continue;
            const std::int64_t c_j = cache.marginal_count(paired, j);
            if (c_j == 0) throw std::logic_error("paired marginal inconsistent with cube");
            const double ratio = (static_cast<double>(c_ij) * md) /
                                 (static_cast<double>(count_i[i]) * static_cast<double>(c_j));
            mi_sum.add((static_cast<double>(c_ij) / md) * std::log(ratio));
        }
    }

    MiCmiPair out;
    out.feature = k;
    out.mi = clamp_nonnegative(mi_sum.value(), "mi") * log_scale;

    if (cond) {
        ExactSum cmi_sum;
        for (std::size_t y = 0; y < ysize; ++y) {
            const std::int64_t c_y = cache.marginal_count(*cond, y);
            for (std::size_t i = 0; i < isize; ++i) {
                const std::int64_t c_iy = count_iy[i * ysize + y];
                for (std::size_t j = 0; j < jsize; ++j) {
                    const std::int64_t c_ijy = cube.at(y, i, j);
                    if (c_ijy == 0) continue;
                    const std::int64_t c_jy = cache.joint_count(paired, j, y);
                    if (c_y == 0 || c_iy == 0 || c_jy == 0)
                        throw std::logic_error("cached tables inconsistent with cube");
                    const double ratio =
                        (static_cast<double>(c_ijy) * static_cast<double>(c_y)) /
                        (static_cast<double>(c_iy) * static_cast<double>(c_jy));
                    cmi_sum.add((static_cast<double>(c_ijy) / md) * std::log(ratio));
                }
            }
        }
        out.cmi = clamp_nonnegative(cmi_sum.value(), "cmi") * log_scale;
    }
    return out;
}

}  // namespace

MiCmiMap compute_mutual_info(const WorkerPool& pool, const CubeMap& cubes,
                             const ProportionCache& cache, FeatureIndex paired,
                             std::optional<FeatureIndex> cond, std::size_t num_instances,
                             double log_scale) {
    if (!cache.has_marginal(paired))
        throw std::logic_error("proportion cache is missing the paired marginal table");
    if (cond && !cache.has_marginal(*cond))
        throw std::logic_error("proportion cache is missing the conditioning marginal table");
    if (cond && !cache.has_joint(paired))
        throw std::logic_error("proportion cache is missing the paired joint table");

    std::vector<FeatureIndex> keys;
    keys.reserve(cubes.size());
    for (const auto& [k, cube] : cubes) keys.push_back(k);
    std::sort(keys.begin(), keys.end());

    std::vector<MiCmiPair> results(keys.size());
    pool.run_indexed(keys.size(), [&](std::size_t idx) {
        const FeatureIndex k = keys[idx];
        const ContingencyCube& cube = cubes.at(k);
        if (cube.total() != static_cast<std::int64_t>(num_instances))
            throw std::logic_error("cube total != instance count");
        if (cube.jsize() != cache.marginal_size(paired))
            throw std::logic_error("cube shape inconsistent with cached tables");
        results[idx] = cube_mutual_info(k, cube, cache, paired, cond, num_instances, log_scale);
    });

    MiCmiMap out;
    out.reserve(results.size());
    for (const MiCmiPair& p : results) out.emplace(p.feature, p);
    return out;
}

double entropy(std::span<const Value> column) {
    if (column.empty()) throw std::invalid_argument("entropy of an empty column");
    Value maxv = 0;
    for (const Value v : column) maxv = std::max(maxv, v);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(maxv) + 1, 0);
    for (const Value v : column) ++counts[v];

    const double md = static_cast<double>(column.size());
    ExactSum h;
    for (const std::int64_t c : counts) {
        if (c == 0) continue;
        h.add((static_cast<double>(c) / md) * std::log(md / static_cast<double>(c)));
    }
    return clamp_nonnegative(h.value(), "entropy");
}

std::vector<std::int64_t> tally_column(const BroadcastColumn& col, std::size_t card) {
    std::vector<std::int64_t> counts(card, 0);
    for (const Value v : col.values()) {
        if (v >= card) throw DataError("value out of cardinality range");
        ++counts[v];
    }
    return counts;
}

std::vector<std::int64_t> tally_joint(const BroadcastColumn& col, std::size_t card,
                                      const BroadcastColumn& cls, std::size_t class_card) {
    if (col.size() != cls.size()) throw std::invalid_argument("joint tally length mismatch");
    std::vector<std::int64_t> counts(card * class_card, 0);
    for (std::size_t r = 0; r < col.size(); ++r) {
        const Value v = col[r];
        const Value y = cls[r];
        if (v >= card || y >= class_card) throw DataError("value out of cardinality range");
        ++counts[v * class_card + y];
    }
    return counts;
}

}  // namespace itfs
