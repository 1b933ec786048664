#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "itfs/columnar.hpp"
#include "itfs/core.hpp"

namespace itfs {

enum class InputFormat { Csv, Libsvm };

// One selection run as driven from the command line.
struct RunConfig {
    std::string input;
    InputFormat format = InputFormat::Csv;
    CriterionKind criterion = CriterionKind::Mrmr;
    std::size_t ns = 10;          // features to select
    std::size_t npart = 0;        // 0 = 2 x workers
    std::optional<double> beta;   // mifs only
    int label_position = -1;      // csv column of the class; -1 = last
    std::size_t bins = 0;         // 0 = no binning; >= 2 = equal-width bins
    std::size_t workers = 0;      // 0 = auto (ITFS_WORKERS, then hardware)
    std::string output;           // empty = stdout
    bool bits = false;            // report scores in bits instead of nats
    std::uint64_t seed = 1;       // bench data generation
};

// Throws ConfigError on invalid field combinations.
void validate_config(const RunConfig& config);

// Worker count after applying the ITFS_WORKERS override and hardware
// fallback.
std::size_t resolve_workers(const RunConfig& config);

// Rectangular numeric CSV with optional header (auto-detected by a
// non-numeric first row). Integer cells pass through; non-integer cells
// require binning (equal-width per column over the observed min/max, top
// edge inclusive). Class labels map to 0-based values by first occurrence.
RowDataset load_csv(const std::string& path, int label_position, std::size_t bins);

// LibSVM lines: label then strictly increasing 1-based index:value pairs.
// Labels map by first occurrence; indices shift to 0-based; explicit zeros
// are dropped. With binning, non-zero values map per feature to bins 1..B
// over the observed non-zero range, preserving sparsity.
SparseDataset load_libsvm(const std::string& path, std::size_t bins);

void write_libsvm(std::ostream& out, const SparseDataset& data);
void write_libsvm(const std::string& path, const SparseDataset& data);

// Equal-width binning of one raw column (helper shared by both loaders).
std::vector<Value> bin_equal_width(const std::vector<double>& column, std::size_t bins);

// Full selection run: load, transform, select, write one JSON record per
// selected feature. Deterministic except the *_ms timing fields.
void run_select(const RunConfig& config);

}  // namespace itfs
