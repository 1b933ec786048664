#include "itfs/criteria.hpp"

#include <algorithm>
#include <limits>

namespace itfs {

CriterionAccumulator init_criteria(
    const std::vector<std::pair<FeatureIndex, double>>& relevances, CriterionKind kind,
    std::optional<double> beta, std::optional<double> gamma) {
    if (gamma.has_value())
        throw ConfigError("gamma is fixed by the criterion and cannot be set");
    if (beta.has_value() && kind != CriterionKind::Mifs)
        throw ConfigError(std::string("beta is fixed for criterion ") + criterion_name(kind));
    if (relevances.empty()) throw std::invalid_argument("no candidate relevances");

    CriterionAccumulator acc;
    acc.kind = kind;
    switch (kind) {
        case CriterionKind::Mifs:
            acc.beta = beta.value_or(1.0);
            acc.gamma = 0.0;
            break;
        case CriterionKind::Cmi:
            acc.beta = 1.0;
            acc.gamma = 1.0;
            break;
        default:
            // Mim has zero weights; Jmi/Mrmr weights are 1/|S| at score
            // time; Cmim/If/Icap use the max / capped forms.
            acc.beta = 0.0;
            acc.gamma = 0.0;
            break;
    }

    const std::size_t n = relevances.size();
    acc.feature.reserve(n);
    acc.relevance.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto& [f, rel] = relevances[s];
        if (s > 0 && f <= relevances[s - 1].first)
            throw std::invalid_argument("relevances must be ascending in feature index");
        if (rel < 0.0) throw std::invalid_argument("negative relevance");
        acc.feature.push_back(f);
        acc.relevance.push_back(rel);
    }
    acc.red_sum.assign(n, 0.0);
    acc.cond_sum.assign(n, 0.0);
    acc.max_term.assign(n, -std::numeric_limits<double>::infinity());
    acc.icap_sum.assign(n, 0.0);
    acc.selected.assign(n, 0);
    return acc;
}

double criterion_score(const CriterionAccumulator& acc, std::size_t slot) {
    const double rel = acc.relevance[slot];
    const double k = static_cast<double>(acc.num_selected);
    switch (acc.kind) {
        case CriterionKind::Mim:
            return rel;
        case CriterionKind::Mifs:
            return rel - acc.beta * acc.red_sum[slot];
        case CriterionKind::Jmi:
            return acc.num_selected == 0
                       ? rel
                       : rel - (acc.red_sum[slot] - acc.cond_sum[slot]) / k;
        case CriterionKind::Cmi:
            return rel - acc.red_sum[slot] + acc.cond_sum[slot];
        case CriterionKind::Mrmr:
            return acc.num_selected == 0 ? rel : rel - acc.red_sum[slot] / k;
        case CriterionKind::Cmim:
        case CriterionKind::If:
            // The max over an empty selected set is undefined; before any
            // selection the score is pure relevance.
            return acc.num_selected == 0 ? rel : rel - acc.max_term[slot];
        case CriterionKind::Icap:
            return rel - acc.icap_sum[slot];
    }
    return rel;
}

void update_criteria(CriterionAccumulator& acc, const MiCmiMap& red) {
    if (acc.live_count() == 0)
        throw std::logic_error("update_criteria after all features were selected");
    for (std::size_t s = 0; s < acc.num_candidates(); ++s) {
        if (acc.selected[s]) continue;
        const auto it = red.find(acc.feature[s]);
        if (it == red.end())
            throw std::invalid_argument("redundancy values missing a live candidate");
        const double mi = it->second.mi;
        const double cmi = it->second.cmi;
        acc.red_sum[s] += mi;
        acc.cond_sum[s] += cmi;
        acc.max_term[s] = std::max(acc.max_term[s], mi - cmi);
        acc.icap_sum[s] += std::max(0.0, mi - cmi);
    }
    ++acc.num_selected;
}

std::pair<FeatureIndex, double> best_candidate(const CriterionAccumulator& acc) {
    std::size_t best = acc.num_candidates();
    double best_score = 0.0;
    for (std::size_t s = 0; s < acc.num_candidates(); ++s) {
        if (acc.selected[s]) continue;
        const double score = criterion_score(acc, s);
        if (best == acc.num_candidates() || score > best_score) {
            best = s;
            best_score = score;
        }
    }
    if (best == acc.num_candidates()) throw std::logic_error("no live candidates");
    return {acc.feature[best], best_score};
}

void mark_selected(CriterionAccumulator& acc, FeatureIndex f, double score) {
    const std::size_t slot = acc.slot_of(f);
    if (slot == acc.num_candidates()) throw std::invalid_argument("unknown feature");
    if (acc.selected[slot]) throw std::logic_error("feature selected twice");
    acc.selected[slot] = 1;
    acc.selection_log.emplace_back(f, score);
}

}  // namespace itfs
