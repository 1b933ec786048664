#include "itfs/core.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace itfs {

RowDataset::RowDataset(std::size_t num_inputs, std::vector<Value> cells,
                       std::size_t class_index)
    : num_inputs_(num_inputs), cells_(std::move(cells)) {
    if (num_inputs_ < 1) throw DataError("dataset needs at least one input feature");
    const std::size_t ncols = num_inputs_ + 1;
    if (cells_.empty() || cells_.size() % ncols != 0)
        throw DataError("cell count is not a multiple of the column count");
    num_rows_ = cells_.size() / ncols;
    class_index_ = (class_index == kLastColumn) ? num_inputs_ : class_index;
    if (class_index_ >= ncols) throw DataError("class index out of range");
}

RowDataset RowDataset::from_rows(const std::vector<std::vector<Value>>& rows,
                                 std::size_t class_index) {
    if (rows.empty()) throw DataError("dataset has no rows");
    const std::size_t ncols = rows.front().size();
    if (ncols < 2) throw DataError("rows need at least one input plus the class");
    std::vector<Value> cells;
    cells.reserve(rows.size() * ncols);
    for (const auto& r : rows) {
        if (r.size() != ncols) throw DataError("ragged row");
        cells.insert(cells.end(), r.begin(), r.end());
    }
    return RowDataset(ncols - 1, std::move(cells), class_index);
}

std::vector<Value> RowDataset::column(std::size_t col) const {
    std::vector<Value> out(num_rows_);
    for (std::size_t r = 0; r < num_rows_; ++r) out[r] = at(r, col);
    return out;
}

BroadcastColumn::BroadcastColumn(FeatureIndex feature, std::vector<Value> values,
                                 std::vector<std::size_t> block_sizes)
    : feature_(feature), values_(std::move(values)) {
    if (block_sizes.empty()) block_sizes.push_back(values_.size());
    offsets_.resize(block_sizes.size() + 1, 0);
    for (std::size_t b = 0; b < block_sizes.size(); ++b)
        offsets_[b + 1] = offsets_[b] + block_sizes[b];
    if (offsets_.back() != values_.size())
        throw std::invalid_argument("block sizes do not cover the column");
}

ContingencyCube::ContingencyCube(std::size_t ysize, std::size_t isize, std::size_t jsize)
    : ysize_(ysize), isize_(isize), jsize_(jsize), counts_(ysize * isize * jsize, 0) {
    if (ysize_ == 0 || isize_ == 0 || jsize_ == 0)
        throw std::invalid_argument("cube dimensions must be positive");
}

ContingencyCube& ContingencyCube::operator+=(const ContingencyCube& other) {
    if (ysize_ != other.ysize_ || isize_ != other.isize_ || jsize_ != other.jsize_)
        throw std::invalid_argument("cube shape mismatch under one key");
    for (std::size_t c = 0; c < counts_.size(); ++c) counts_[c] += other.counts_[c];
    return *this;
}

std::int64_t ContingencyCube::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

void ProportionCache::put_marginal(FeatureIndex f, std::vector<std::int64_t> counts,
                                   std::size_t num_instances) {
    if (num_instances_ == 0) num_instances_ = num_instances;
    if (num_instances_ != num_instances)
        throw std::logic_error("proportion cache mixes instance counts");
    marginal_[f] = std::move(counts);
}

void ProportionCache::put_joint(FeatureIndex f, std::vector<std::int64_t> counts,
                                std::size_t card, std::size_t class_card,
                                std::size_t num_instances) {
    if (num_instances_ == 0) num_instances_ = num_instances;
    if (num_instances_ != num_instances)
        throw std::logic_error("proportion cache mixes instance counts");
    if (counts.size() != card * class_card)
        throw std::logic_error("joint table size mismatch");
    joint_[f] = JointTable{card, class_card, std::move(counts)};
}

std::int64_t ProportionCache::marginal_count(FeatureIndex f, std::size_t v) const {
    return marginal_.at(f)[v];
}

std::int64_t ProportionCache::joint_count(FeatureIndex f, std::size_t v, std::size_t y) const {
    const JointTable& t = joint_.at(f);
    return t.counts[v * t.class_card + y];
}

std::size_t ProportionCache::marginal_size(FeatureIndex f) const {
    return marginal_.at(f).size();
}

double ProportionCache::marginal(FeatureIndex f, std::size_t v) const {
    return static_cast<double>(marginal_count(f, v)) / static_cast<double>(num_instances_);
}

double ProportionCache::joint(FeatureIndex f, std::size_t v, std::size_t y) const {
    return static_cast<double>(joint_count(f, v, y)) / static_cast<double>(num_instances_);
}

CriterionKind parse_criterion(const std::string& name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "mim") return CriterionKind::Mim;
    if (lower == "mifs") return CriterionKind::Mifs;
    if (lower == "jmi") return CriterionKind::Jmi;
    if (lower == "cmi") return CriterionKind::Cmi;
    if (lower == "mrmr") return CriterionKind::Mrmr;
    if (lower == "cmim") return CriterionKind::Cmim;
    if (lower == "if") return CriterionKind::If;
    if (lower == "icap") return CriterionKind::Icap;
    throw ConfigError("unknown criterion: " + name);
}

const char* criterion_name(CriterionKind kind) {
    switch (kind) {
        case CriterionKind::Mim: return "mim";
        case CriterionKind::Mifs: return "mifs";
        case CriterionKind::Jmi: return "jmi";
        case CriterionKind::Cmi: return "cmi";
        case CriterionKind::Mrmr: return "mrmr";
        case CriterionKind::Cmim: return "cmim";
        case CriterionKind::If: return "if";
        case CriterionKind::Icap: return "icap";
    }
    return "?";
}

std::size_t CriterionAccumulator::slot_of(FeatureIndex f) const {
    const auto it = std::lower_bound(feature.begin(), feature.end(), f);
    if (it == feature.end() || *it != f) return feature.size();
    return static_cast<std::size_t>(it - feature.begin());
}

namespace {

// Key range of one dense partition; partitions are sorted by key, so the
// first and last elements bound it.
template <typename T, typename KeyOf>
bool partition_covers(const std::vector<T>& part, Key k, KeyOf key_of) {
    return !part.empty() && key_of(part.front()) <= k && k <= key_of(part.back());
}

}  // namespace

BroadcastColumn ColumnStore::lookup_column(FeatureIndex f) const {
    if (f > num_features)
        throw std::invalid_argument("lookup_column: feature index out of range");

    if (layout == Layout::SparseVectors) {
        if (f == class_index) return broadcast(f, dense_class);
        std::vector<Value> col(num_instances, 0);
        bool found = false;
        for (const auto& part : sparse.partitions) {
            if (!partition_covers(part, f,
                                  [](const SparseFeatureVector& v) { return v.feature; }))
                continue;
            ++lookup_touched_;
            const auto it = std::lower_bound(
                part.begin(), part.end(), f,
                [](const SparseFeatureVector& v, FeatureIndex k) { return v.feature < k; });
            if (it != part.end() && it->feature == f) {
                for (const auto& [inst, val] : it->entries) col[inst] = val;
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("lookup_column: feature not present");
        return broadcast(f, std::move(col));
    }

    // Dense: gather the feature's blocks, which must cover every row block.
    std::vector<const std::vector<Value>*> blocks(row_blocks, nullptr);
    for (const auto& part : dense.partitions) {
        if (!partition_covers(part, f, [](const FeatureBlock& b) { return b.feature; }))
            continue;
        ++lookup_touched_;
        auto it = std::lower_bound(part.begin(), part.end(), f,
                                   [](const FeatureBlock& b, FeatureIndex k) {
                                       return b.feature < k;
                                   });
        for (; it != part.end() && it->feature == f; ++it) {
            if (it->block >= row_blocks || blocks[it->block] != nullptr)
                throw DataError("lookup_column: duplicate or out-of-range block");
            blocks[it->block] = &it->values;
        }
    }

    std::vector<Value> col;
    col.reserve(num_instances);
    std::vector<std::size_t> sizes(row_blocks);
    for (std::size_t b = 0; b < row_blocks; ++b) {
        if (blocks[b] == nullptr) throw DataError("lookup_column: missing block");
        col.insert(col.end(), blocks[b]->begin(), blocks[b]->end());
        sizes[b] = blocks[b]->size();
    }
    if (col.size() != num_instances)
        throw DataError("lookup_column: column length mismatch");
    return broadcast(f, std::move(col), std::move(sizes));
}

}  // namespace itfs
