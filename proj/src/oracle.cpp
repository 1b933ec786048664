#include "itfs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <vector>

namespace itfs {

namespace {

std::size_t card_of(std::span<const Value> col) {
    Value maxv = 0;
    for (const Value v : col) maxv = std::max(maxv, v);
    return static_cast<std::size_t>(maxv) + 1;
}

// Order-independent: terms are sorted before folding in extended precision,
// so any permutation of the same term multiset gives the same double.
double sum_terms(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    long double acc = 0.0L;
    for (const double t : terms) acc += t;
    double v = static_cast<double>(acc);
    if (v < 0.0 && v > -1e-12) v = 0.0;
    return v;
}

}  // namespace

double oracle_mi(std::span<const Value> a, std::span<const Value> b) {
    if (a.size() != b.size()) throw std::invalid_argument("oracle_mi: length mismatch");
    if (a.empty()) throw std::invalid_argument("oracle_mi: empty columns");
    const std::size_t ca = card_of(a), cb = card_of(b);
    const std::size_t m = a.size();

    std::vector<std::int64_t> joint(ca * cb, 0), cnt_a(ca, 0), cnt_b(cb, 0);
    for (std::size_t r = 0; r < m; ++r) {
        ++joint[a[r] * cb + b[r]];
        ++cnt_a[a[r]];
        ++cnt_b[b[r]];
    }

    const double md = static_cast<double>(m);
    std::vector<double> terms;
    terms.reserve(ca * cb);
    for (std::size_t va = 0; va < ca; ++va) {
        for (std::size_t vb = 0; vb < cb; ++vb) {
            const std::int64_t c = joint[va * cb + vb];
            if (c == 0) continue;
            const double ratio = (static_cast<double>(c) * md) /
                                 (static_cast<double>(cnt_a[va]) * static_cast<double>(cnt_b[vb]));
            terms.push_back((static_cast<double>(c) / md) * std::log(ratio));
        }
    }
    return sum_terms(terms);
}

double oracle_cmi(std::span<const Value> a, std::span<const Value> b,
                  std::span<const Value> c) {
    if (a.size() != b.size() || a.size() != c.size())
        throw std::invalid_argument("oracle_cmi: length mismatch");
    if (a.empty()) throw std::invalid_argument("oracle_cmi: empty columns");
    const std::size_t ca = card_of(a), cb = card_of(b), cc = card_of(c);
    const std::size_t m = a.size();

    std::vector<std::int64_t> triple(ca * cb * cc, 0);
    std::vector<std::int64_t> cnt_ac(ca * cc, 0), cnt_bc(cb * cc, 0), cnt_c(cc, 0);
    for (std::size_t r = 0; r < m; ++r) {
        ++triple[(a[r] * cb + b[r]) * cc + c[r]];
        ++cnt_ac[a[r] * cc + c[r]];
        ++cnt_bc[b[r] * cc + c[r]];
        ++cnt_c[c[r]];
    }

    const double md = static_cast<double>(m);
    std::vector<double> terms;
    for (std::size_t vc = 0; vc < cc; ++vc) {
        if (cnt_c[vc] == 0) continue;
        const double pc = static_cast<double>(cnt_c[vc]) / md;
        for (std::size_t va = 0; va < ca; ++va) {
            for (std::size_t vb = 0; vb < cb; ++vb) {
                const std::int64_t q = triple[(va * cb + vb) * cc + vc];
                if (q == 0) continue;
                const double p_ab_given_c =
                    static_cast<double>(q) / static_cast<double>(cnt_c[vc]);
                const double ratio =
                    (static_cast<double>(q) * static_cast<double>(cnt_c[vc])) /
                    (static_cast<double>(cnt_ac[va * cc + vc]) *
                     static_cast<double>(cnt_bc[vb * cc + vc]));
                terms.push_back(pc * p_ab_given_c * std::log(ratio));
            }
        }
    }
    return sum_terms(terms);
}

SelectionResult oracle_select(const RowDataset& data, CriterionKind kind,
                              std::size_t num_select, std::optional<double> beta) {
    const std::size_t n = data.num_features();
    const std::size_t m = data.num_instances();
    if (num_select < 1) throw std::invalid_argument("must select at least one feature");
    if (n > 200 || m > 10000)
        std::cerr << "itfs: warning: oracle_select is meant for small data (n <= 200, m <= "
                     "10000); this will be slow\n";
    const double beta_eff = (kind == CriterionKind::Mifs) ? beta.value_or(1.0) : 0.0;

    std::vector<std::vector<Value>> cols(data.num_columns());
    for (std::size_t k = 0; k < data.num_columns(); ++k) cols[k] = data.column(k);
    const std::vector<Value>& ycol = cols[data.class_index()];

    std::vector<FeatureIndex> candidates;
    for (std::size_t k = 0; k < data.num_columns(); ++k)
        if (k != data.class_index()) candidates.push_back(static_cast<FeatureIndex>(k));

    const std::size_t target = std::min(num_select, n);
    std::vector<FeatureIndex> chosen;
    std::vector<char> taken(data.num_columns(), 0);

    SelectionResult result;
    result.criterion = kind;
    result.beta = beta_eff;

    while (chosen.size() < target) {
        FeatureIndex best = 0;
        double best_score = 0.0;
        bool have_best = false;
        for (const FeatureIndex f : candidates) {
            if (taken[f]) continue;
            const double rel = oracle_mi(cols[f], ycol);

            double red = 0.0, cond = 0.0, icap = 0.0;
            double worst = -std::numeric_limits<double>::infinity();
            for (const FeatureIndex j : chosen) {
                const double mi = oracle_mi(cols[j], cols[f]);
                const double cmi = oracle_cmi(cols[j], cols[f], ycol);
                red += mi;
                cond += cmi;
                worst = std::max(worst, mi - cmi);
                icap += std::max(0.0, mi - cmi);
            }

            double score = rel;
            const double k = static_cast<double>(chosen.size());
            switch (kind) {
                case CriterionKind::Mim: score = rel; break;
                case CriterionKind::Mifs: score = rel - beta_eff * red; break;
                case CriterionKind::Jmi:
                    score = chosen.empty() ? rel : rel - (red - cond) / k;
                    break;
                case CriterionKind::Cmi: score = rel - red + cond; break;
                case CriterionKind::Mrmr:
                    score = chosen.empty() ? rel : rel - red / k;
                    break;
                case CriterionKind::Cmim:
                case CriterionKind::If:
                    score = chosen.empty() ? rel : rel - worst;
                    break;
                case CriterionKind::Icap: score = rel - icap; break;
            }

            if (!have_best || score > best_score) {
                have_best = true;
                best = f;
                best_score = score;
            }
        }
        chosen.push_back(best);
        taken[best] = 1;
        result.selected.emplace_back(best, best_score);
    }
    return result;
}

}  // namespace itfs
