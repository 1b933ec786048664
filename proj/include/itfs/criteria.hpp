#pragma once

#include <optional>

#include "itfs/core.hpp"
#include "itfs/infotheory.hpp"

namespace itfs {

// Builds an accumulator whose initial score for every candidate equals its
// relevance (all redundancy terms empty). relevances must be ascending in
// feature index, one entry per input feature, all values >= 0. beta is only
// free for Mifs (default 1.0); gamma is fixed by every criterion.
CriterionAccumulator init_criteria(
    const std::vector<std::pair<FeatureIndex, double>>& relevances, CriterionKind kind,
    std::optional<double> beta = {}, std::optional<double> gamma = {});

// Folds the (mi, cmi) of the newly selected feature against every live
// candidate and advances |S|. red must cover every live candidate.
void update_criteria(CriterionAccumulator& acc, const MiCmiMap& red);

// Highest-scoring live candidate; ties break to the smallest feature index.
std::pair<FeatureIndex, double> best_candidate(const CriterionAccumulator& acc);

// Freezes the candidate's score and removes it from future argmax queries
// and updates.
void mark_selected(CriterionAccumulator& acc, FeatureIndex f, double score);

// Current score of the candidate in a slot, per the criterion's formula.
double criterion_score(const CriterionAccumulator& acc, std::size_t slot);

}  // namespace itfs
