#include "itfs/selector.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>

namespace itfs {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    const auto dt = std::chrono::steady_clock::now() - since;
    return std::chrono::duration<double, std::milli>(dt).count();
}

CubeMap histograms_for(const WorkerPool& pool, const ColumnStore& store, FeatureIndex paired,
                       const BroadcastColumn& paired_col, std::optional<FeatureIndex> cond,
                       const BroadcastColumn* cond_col, const std::vector<char>& excluded) {
    if (store.layout == ColumnStore::Layout::DenseBlocks)
        return get_histograms(pool, store, paired, paired_col, cond, cond_col, excluded);
    return sparse_histograms(pool, store, paired, paired_col, cond, cond_col, excluded);
}

}  // namespace

std::vector<std::pair<FeatureIndex, double>> compute_relevances(
    const WorkerPool& pool, const ColumnStore& store, ProportionCache& cache,
    BroadcastColumn* class_col_out, double log_scale) {
    const FeatureIndex y = static_cast<FeatureIndex>(store.class_index);
    BroadcastColumn ycol = store.lookup_column(y);

    if (!cache.has_marginal(y))
        cache.put_marginal(y, tally_column(ycol, store.cardinality(y)), store.num_instances);
    if (store.cardinality(y) < 2)
        std::cerr << "itfs: warning: class has a single value; all relevances are 0\n";

    auto cubes = histograms_for(pool, store, y, ycol, std::nullopt, nullptr, {});
    auto pairs = compute_mutual_info(pool, cubes, cache, y, std::nullopt,
                                     store.num_instances, log_scale);

    std::vector<std::pair<FeatureIndex, double>> rel;
    rel.reserve(pairs.size());
    for (const auto& [k, p] : pairs) rel.emplace_back(k, p.mi);
    std::sort(rel.begin(), rel.end());

    if (class_col_out != nullptr) *class_col_out = std::move(ycol);
    return rel;
}

MiCmiMap compute_redundancies(const WorkerPool& pool, const ColumnStore& store,
                              FeatureIndex best_feature, const BroadcastColumn& class_col,
                              ProportionCache& cache, const std::vector<char>& selected_mask,
                              double log_scale) {
    const FeatureIndex y = static_cast<FeatureIndex>(store.class_index);
    BroadcastColumn jcol = store.lookup_column(best_feature);

    const std::size_t card = store.cardinality(best_feature);
    const std::size_t class_card = store.cardinality(y);
    if (!cache.has_joint(best_feature)) {
        auto joint = tally_joint(jcol, card, class_col, class_card);
        if (!cache.has_marginal(best_feature)) {
            // The marginal is the class-sum of the joint row by row.
            std::vector<std::int64_t> marg(card, 0);
            for (std::size_t v = 0; v < card; ++v)
                for (std::size_t c = 0; c < class_card; ++c)
                    marg[v] += joint[v * class_card + c];
            cache.put_marginal(best_feature, std::move(marg), store.num_instances);
        }
        cache.put_joint(best_feature, std::move(joint), card, class_card,
                        store.num_instances);
    }

    auto cubes = histograms_for(pool, store, best_feature, jcol, y, &class_col, selected_mask);
    return compute_mutual_info(pool, cubes, cache, best_feature, y, store.num_instances,
                               log_scale);
}

SelectionResult select(const WorkerPool& pool, const ColumnStore& store, CriterionKind kind,
                       std::size_t num_select, const SelectOptions& options) {
    if (num_select < 1) throw std::invalid_argument("must select at least one feature");
    if (store.num_features < 1 || store.num_instances < 1)
        throw std::invalid_argument("selection over an empty store");
    if (store.class_index >= store.cardinalities.size())
        throw std::invalid_argument("store has no class column");

    const std::size_t target = std::min(num_select, store.num_features);
    if (target != num_select)
        std::cerr << "itfs: warning: clamping selection count from " << num_select << " to "
                  << target << " (only " << store.num_features << " features)\n";

    ProportionCache cache;
    BroadcastColumn ycol;

    const auto t_rel = std::chrono::steady_clock::now();
    const auto relevances = compute_relevances(pool, store, cache, &ycol, options.log_scale);
    if (options.timings != nullptr) options.timings->relevance_ms = elapsed_ms(t_rel);

    CriterionAccumulator acc = init_criteria(relevances, kind, options.beta);

    std::vector<char> selected_mask(store.num_features + 1, 0);
    auto [best, score] = best_candidate(acc);
    mark_selected(acc, best, score);
    selected_mask[best] = 1;

    while (acc.selection_log.size() < target) {
        const auto t_it = std::chrono::steady_clock::now();
        const auto red = compute_redundancies(pool, store, best, ycol, cache, selected_mask,
                                              options.log_scale);
        update_criteria(acc, red);
        std::tie(best, score) = best_candidate(acc);
        mark_selected(acc, best, score);
        selected_mask[best] = 1;
        if (options.timings != nullptr)
            options.timings->iteration_ms.push_back(elapsed_ms(t_it));
    }

    SelectionResult result;
    result.criterion = kind;
    result.beta = (kind == CriterionKind::Mifs) ? options.beta.value_or(1.0) : 0.0;
    result.selected = std::move(acc.selection_log);
    return result;
}

}  // namespace itfs
