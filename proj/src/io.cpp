#include "itfs/io.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "itfs/selector.hpp"

namespace itfs {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    const auto dt = std::chrono::steady_clock::now() - since;
    return std::chrono::duration<double, std::milli>(dt).count();
}

bool parse_double(const std::string& token, double& out) {
    errno = 0;
    char* end = nullptr;
    out = std::strtod(token.c_str(), &end);
    return end != token.c_str() && *end == '\0' && errno == 0;
}

bool integral_value(double v) {
    return v >= 0.0 && v == std::floor(v) && v <= 4294967295.0;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

// First-occurrence label dictionary, shared by the csv and libsvm loaders.
class LabelMap {
public:
    Value map(double label) {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return static_cast<Value>(i);
        labels_.push_back(label);
        return static_cast<Value>(labels_.size() - 1);
    }

private:
    std::vector<double> labels_;
};

}  // namespace

void validate_config(const RunConfig& config) {
    if (config.ns < 1) throw ConfigError("ns must be >= 1");
    if (config.bins == 1) throw ConfigError("bin count must be >= 2 when binning is enabled");
    if (config.beta.has_value() && config.criterion != CriterionKind::Mifs)
        throw ConfigError("beta is only a parameter of mifs");
    if (config.format == InputFormat::Libsvm && config.label_position != -1)
        throw ConfigError("label-position applies to csv input only");
}

std::size_t resolve_workers(const RunConfig& config) {
    if (const char* env = std::getenv("ITFS_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
        std::cerr << "itfs: ignoring unparsable ITFS_WORKERS='" << env << "'\n";
    }
    if (config.workers >= 1) return config.workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<Value> bin_equal_width(const std::vector<double>& column, std::size_t bins) {
    if (bins < 2) throw ConfigError("bin count must be >= 2");
    const auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<Value> out(column.size(), 0);
    if (hi == lo) return out;  // degenerate range: a single bin
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t r = 0; r < column.size(); ++r) {
        auto idx = static_cast<std::size_t>(std::floor((column[r] - lo) / width));
        out[r] = static_cast<Value>(std::min(idx, bins - 1));  // top edge inclusive
    }
    return out;
}

RowDataset load_csv(const std::string& path, int label_position, std::size_t bins) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    bool first_line = true;
    std::size_t ncols = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto tokens = split_csv_line(line);
        std::vector<double> row(tokens.size());
        bool numeric = true;
        for (std::size_t c = 0; c < tokens.size(); ++c)
            if (!parse_double(tokens[c], row[c])) {
                numeric = false;
                break;
            }
        if (first_line) {
            first_line = false;
            ncols = tokens.size();
            if (!numeric) continue;  // header row
        }
        if (!numeric) throw DataError("non-numeric cell in " + path);
        if (tokens.size() != ncols) throw DataError("ragged row in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("no data rows in " + path);
    if (ncols < 2) throw DataError("need at least one feature column plus the class");

    std::size_t class_col;
    if (label_position < 0)
        class_col = ncols - 1;
    else if (static_cast<std::size_t>(label_position) < ncols)
        class_col = static_cast<std::size_t>(label_position);
    else
        throw ConfigError("label position out of range");

    const std::size_t m = rows.size();
    std::vector<Value> cells(m * ncols, 0);

    LabelMap labels;
    for (std::size_t r = 0; r < m; ++r)
        cells[r * ncols + class_col] = labels.map(rows[r][class_col]);

    std::vector<double> column(m);
    for (std::size_t c = 0; c < ncols; ++c) {
        if (c == class_col) continue;
        for (std::size_t r = 0; r < m; ++r) column[r] = rows[r][c];
        if (bins >= 2) {
            const auto binned = bin_equal_width(column, bins);
            for (std::size_t r = 0; r < m; ++r) cells[r * ncols + c] = binned[r];
        } else {
            for (std::size_t r = 0; r < m; ++r) {
                if (!integral_value(column[r]))
                    throw DataError("non-integer value in column " + std::to_string(c) +
                                    "; enable binning with --bins");
                cells[r * ncols + c] = static_cast<Value>(column[r]);
            }
        }
    }
    return RowDataset(ncols - 1, std::move(cells), class_col);
}

SparseDataset load_libsvm(const std::string& path, std::size_t bins) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    struct RawRow {
        std::vector<std::pair<FeatureIndex, double>> entries;
    };
    std::vector<RawRow> raw;
    std::vector<Value> classes;
    LabelMap labels;
    FeatureIndex max_feature = 0;

    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string token;
        if (!(ls >> token)) continue;
        double label;
        if (!parse_double(token, label)) throw DataError("unparsable label: " + token);
        classes.push_back(labels.map(label));

        RawRow row;
        FeatureIndex prev = 0;
        while (ls >> token) {
            const std::size_t colon = token.find(':');
            if (colon == std::string::npos) throw DataError("unparsable entry: " + token);
            double idx_d, val;
            if (!parse_double(token.substr(0, colon), idx_d) || !integral_value(idx_d) ||
                idx_d < 1.0)
                throw DataError("bad feature index in: " + token);
            if (!parse_double(token.substr(colon + 1), val))
                throw DataError("unparsable value in: " + token);
            const auto idx = static_cast<FeatureIndex>(idx_d - 1.0);  // 1-based input
            if (!row.entries.empty() && idx <= prev)
                throw DataError("feature indices not strictly increasing");
            prev = idx;
            if (val == 0.0) continue;  // explicit zeros are dropped
            row.entries.emplace_back(idx, val);
            max_feature = std::max(max_feature, idx);
        }
        raw.push_back(std::move(row));
    }
    if (raw.empty()) throw DataError("no data rows in " + path);

    SparseDataset data;
    data.num_features = static_cast<std::size_t>(max_feature) + 1;
    data.classes = std::move(classes);
    data.rows.resize(raw.size());
    for (std::size_t r = 0; r < raw.size(); ++r)
        data.rows[r].index = static_cast<std::uint32_t>(r);

    if (bins >= 2) {
        // Per-feature equal-width bins over the non-zero range, mapped to
        // 1..bins so implicit zeros keep value 0.
        std::vector<double> lo(data.num_features, std::numeric_limits<double>::infinity());
        std::vector<double> hi(data.num_features, -std::numeric_limits<double>::infinity());
        for (const RawRow& row : raw)
            for (const auto& [f, v] : row.entries) {
                lo[f] = std::min(lo[f], v);
                hi[f] = std::max(hi[f], v);
            }
        for (std::size_t r = 0; r < raw.size(); ++r) {
            for (const auto& [f, v] : raw[r].entries) {
                Value binned = 1;
                if (hi[f] > lo[f]) {
                    const double width = (hi[f] - lo[f]) / static_cast<double>(bins);
                    const auto idx = static_cast<std::size_t>(std::floor((v - lo[f]) / width));
                    binned = static_cast<Value>(1 + std::min(idx, bins - 1));
                }
                data.rows[r].entries.emplace_back(f, binned);
            }
        }
    } else {
        for (std::size_t r = 0; r < raw.size(); ++r) {
            for (const auto& [f, v] : raw[r].entries) {
                if (!integral_value(v))
                    throw DataError("non-integer value " + std::to_string(v) +
                                    "; enable binning with --bins");
                data.rows[r].entries.emplace_back(f, static_cast<Value>(v));
            }
        }
    }
    return data;
}

void write_libsvm(std::ostream& out, const SparseDataset& data) {
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        out << data.classes[r];
        for (const auto& [f, v] : data.rows[r].entries) out << ' ' << (f + 1) << ':' << v;
        out << '\n';
    }
}

void write_libsvm(const std::string& path, const SparseDataset& data) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    write_libsvm(out, data);
    if (!out) throw IoError("failed while writing " + path);
}

void run_select(const RunConfig& config) {
    validate_config(config);
    if (config.input.empty()) throw ConfigError("no input file given");

    const std::size_t workers = resolve_workers(config);
    const WorkerPool pool(workers);
    const std::size_t npart = config.npart > 0 ? config.npart : 2 * workers;
    const std::size_t row_parts = 2 * workers;

    const auto t_transform = std::chrono::steady_clock::now();
    ColumnStore store;
    if (config.format == InputFormat::Csv) {
        const RowDataset data = load_csv(config.input, config.label_position, config.bins);
        store = columnar_transform(pool, data, row_parts, npart);
    } else {
        const SparseDataset data = load_libsvm(config.input, config.bins);
        store = sparse_columnar_transform(pool, data, npart);
    }
    const double transform_ms = elapsed_ms(t_transform);

    PhaseTimings timings;
    SelectOptions options;
    options.beta = config.beta;
    options.timings = &timings;
    const SelectionResult result = select(pool, store, config.criterion, config.ns, options);

    std::ofstream file;
    if (!config.output.empty()) {
        file.open(config.output);
        if (!file) throw IoError("cannot write " + config.output);
    }
    std::ostream& out = config.output.empty() ? std::cout : file;

    const double scale = config.bits ? 1.0 / std::log(2.0) : 1.0;
    for (std::size_t rank = 0; rank < result.selected.size(); ++rank) {
        const auto& [feature, score] = result.selected[rank];
        nlohmann::json record{
            {"rank", rank + 1},
            {"feature", feature},
            {"score", score * scale},
            {"unit", config.bits ? "bits" : "nats"},
            {"criterion", criterion_name(result.criterion)},
            {"ns", config.ns},
            {"npart", store.npart},
            {"transform_ms", transform_ms},
            {"relevance_ms", timings.relevance_ms},
            {"redundancy_ms", rank == 0 ? 0.0 : timings.iteration_ms[rank - 1]},
        };
        if (config.criterion == CriterionKind::Mifs) record["beta"] = result.beta;
        out << record.dump() << '\n';
    }
    if (!out) throw IoError("failed while writing output");
}

}  // namespace itfs
