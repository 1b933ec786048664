#include "itfs/bench.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>

#include "itfs/selector.hpp"

namespace itfs {

RowDataset generate_dense(std::size_t num_instances, std::size_t num_features,
                          Value cardinality, Value class_cardinality, std::uint64_t seed) {
    if (cardinality < 1 || class_cardinality < 1)
        throw std::invalid_argument("cardinalities must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Value> value(0, cardinality - 1);
    std::uniform_int_distribution<Value> label(0, class_cardinality - 1);

    const std::size_t ncols = num_features + 1;
    std::vector<Value> cells(num_instances * ncols);
    for (std::size_t r = 0; r < num_instances; ++r) {
        for (std::size_t k = 0; k < num_features; ++k) cells[r * ncols + k] = value(rng);
        cells[r * ncols + num_features] = label(rng);
    }
    return RowDataset(num_features, std::move(cells));
}

SparseDataset generate_sparse(std::size_t num_instances, std::size_t num_features,
                              Value cardinality, double density, Value class_cardinality,
                              std::uint64_t seed) {
    if (cardinality < 2) throw std::invalid_argument("sparse values need cardinality >= 2");
    if (density <= 0.0 || density > 1.0) throw std::invalid_argument("density must be in (0, 1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<Value> value(1, cardinality - 1);
    std::uniform_int_distribution<Value> label(0, class_cardinality - 1);

    SparseDataset data;
    data.num_features = num_features;
    data.rows.resize(num_instances);
    data.classes.resize(num_instances);
    for (std::size_t r = 0; r < num_instances; ++r) {
        data.rows[r].index = static_cast<std::uint32_t>(r);
        for (std::size_t k = 0; k < num_features; ++k)
            if (coin(rng) < density)
                data.rows[r].entries.emplace_back(static_cast<FeatureIndex>(k), value(rng));
        data.classes[r] = label(rng);
    }
    return data;
}

void run_bench(const BenchConfig& config) {
    std::ofstream file;
    if (!config.output.empty()) {
        file.open(config.output);
        if (!file) throw IoError("cannot write " + config.output);
    }
    std::ostream& out = config.output.empty() ? std::cout : file;
    out << "m,n,ns,npart,workers,phase,milliseconds\n";

    const auto emit = [&](std::size_t m, std::size_t ns, std::size_t npart,
                          std::size_t workers, const char* phase, double ms) {
        out << m << ',' << config.n << ',' << ns << ',' << npart << ',' << workers << ','
            << phase << ',' << ms << '\n';
    };

    for (const std::size_t m : config.m_list) {
        for (const std::size_t workers : config.workers_list) {
            for (const std::size_t npart_cfg : config.npart_list) {
                const std::size_t npart = npart_cfg > 0 ? npart_cfg : 2 * workers;
                for (const std::size_t ns : config.ns_list) {
                    try {
                        const WorkerPool pool(workers);
                        using clock = std::chrono::steady_clock;

                        const auto t0 = clock::now();
                        ColumnStore store;
                        if (config.density > 0.0) {
                            const auto data =
                                generate_sparse(m, config.n, config.cardinality, config.density,
                                                config.class_cardinality, config.seed);
                            const auto t1 = clock::now();
                            store = sparse_columnar_transform(pool, data, npart);
                            emit(m, ns, npart, workers, "transform",
                                 std::chrono::duration<double, std::milli>(clock::now() - t1)
                                     .count());
                        } else {
                            const auto data =
                                generate_dense(m, config.n, config.cardinality,
                                               config.class_cardinality, config.seed);
                            const auto t1 = clock::now();
                            store = columnar_transform(pool, data, 2 * workers, npart);
                            emit(m, ns, npart, workers, "transform",
                                 std::chrono::duration<double, std::milli>(clock::now() - t1)
                                     .count());
                        }
                        (void)t0;

                        PhaseTimings timings;
                        SelectOptions options;
                        options.timings = &timings;
                        const auto t2 = clock::now();
                        select(pool, store, CriterionKind::Mrmr, ns, options);
                        const double total_ms =
                            std::chrono::duration<double, std::milli>(clock::now() - t2).count();

                        const double redundancy_ms =
                            std::accumulate(timings.iteration_ms.begin(),
                                            timings.iteration_ms.end(), 0.0);
                        emit(m, ns, npart, workers, "relevance", timings.relevance_ms);
                        emit(m, ns, npart, workers, "redundancy", redundancy_ms);
                        emit(m, ns, npart, workers, "total", total_ms);
                    } catch (const std::exception& e) {
                        std::cerr << "itfs: bench cell failed (m=" << m << ", ns=" << ns
                                  << ", workers=" << workers << "): " << e.what() << '\n';
                        emit(m, ns, npart, workers, "error", -1.0);
                    }
                }
            }
        }
    }
    if (!out) throw IoError("failed while writing bench output");
}

}  // namespace itfs
