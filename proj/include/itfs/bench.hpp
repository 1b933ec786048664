#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "itfs/columnar.hpp"
#include "itfs/core.hpp"

namespace itfs {

// Seeded synthetic dense dataset: uniform values in [0, cardinality),
// uniform class in [0, class_cardinality).
RowDataset generate_dense(std::size_t num_instances, std::size_t num_features,
                          Value cardinality, Value class_cardinality, std::uint64_t seed);

// Seeded synthetic sparse dataset: each cell is non-zero with probability
// density, uniform in [1, cardinality).
SparseDataset generate_sparse(std::size_t num_instances, std::size_t num_features,
                              Value cardinality, double density, Value class_cardinality,
                              std::uint64_t seed);

// Timing sweep over the cartesian grid of the list-valued parameters.
struct BenchConfig {
    std::vector<std::size_t> m_list{100000};
    std::size_t n = 100;
    Value cardinality = 4;
    Value class_cardinality = 2;
    double density = 0.0;  // 0 = dense path, > 0 = sparse path
    std::vector<std::size_t> ns_list{10};
    std::vector<std::size_t> npart_list{0};    // 0 = 2 x workers
    std::vector<std::size_t> workers_list{1};
    std::uint64_t seed = 1;
    std::string output;  // empty = stdout
};

// Writes CSV rows (m,n,ns,npart,workers,phase,milliseconds) with phases
// transform, relevance, redundancy and total per grid cell. A cell that
// runs out of resources is reported as an error row and the sweep
// continues.
void run_bench(const BenchConfig& config);

}  // namespace itfs
