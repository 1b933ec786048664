#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "itfs/bench.hpp"
#include "itfs/io.hpp"

namespace {

// 0 ok, 1 config, 2 io, 3 data validation.
int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const itfs::ConfigError*>(&e)) return 1;
    if (dynamic_cast<const itfs::IoError*>(&e)) return 2;
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-theoretic filter feature selection"};
    app.require_subcommand(1);

    itfs::RunConfig cfg;
    std::string format = "csv";
    std::string criterion = "mrmr";
    std::string unit = "nats";
    double beta = 1.0;

    CLI::App* sel = app.add_subcommand("select", "Rank features on a dataset");
    sel->add_option("--input", cfg.input, "Input file")->required();
    sel->add_option("--format", format, "Input format")
        ->check(CLI::IsMember({"csv", "libsvm"}));
    sel->add_option("--criterion", criterion,
                    "Criterion: mim mifs jmi cmi mrmr cmim if icap");
    sel->add_option("--ns", cfg.ns, "Number of features to select");
    sel->add_option("--npart", cfg.npart, "Column partitions (0 = 2 x workers)");
    auto* beta_opt = sel->add_option("--beta", beta, "Redundancy weight (mifs only)");
    sel->add_option("--label-position", cfg.label_position,
                    "Class column for csv input (-1 = last)");
    sel->add_option("--bins", cfg.bins, "Equal-width bins for non-integer data (0 = off)");
    sel->add_option("--workers", cfg.workers, "Worker threads (0 = auto)");
    sel->add_option("--output", cfg.output, "Output file (default stdout)");
    sel->add_option("--unit", unit, "Score unit in the output")
        ->check(CLI::IsMember({"nats", "bits"}));

    itfs::BenchConfig bench;
    CLI::App* ben = app.add_subcommand("bench", "Timing sweep on synthetic data");
    ben->add_option("--gen-m", bench.m_list, "Instance counts to sweep");
    ben->add_option("--gen-n", bench.n, "Feature count");
    ben->add_option("--gen-cardinality", bench.cardinality, "Feature cardinality");
    ben->add_option("--gen-class-cardinality", bench.class_cardinality, "Class cardinality");
    ben->add_option("--gen-density", bench.density,
                    "Non-zero density; > 0 uses the sparse path");
    ben->add_option("--ns", bench.ns_list, "Selection thresholds to sweep");
    ben->add_option("--npart", bench.npart_list, "Partition counts to sweep (0 = auto)");
    ben->add_option("--workers", bench.workers_list, "Worker counts to sweep");
    ben->add_option("--seed", bench.seed, "Generator seed");
    ben->add_option("--output", bench.output, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (sel->parsed()) {
            cfg.format = format == "csv" ? itfs::InputFormat::Csv : itfs::InputFormat::Libsvm;
            cfg.criterion = itfs::parse_criterion(criterion);
            cfg.bits = unit == "bits";
            if (beta_opt->count() > 0) cfg.beta = beta;
            itfs::run_select(cfg);
        } else {
            itfs::run_bench(bench);
        }
    } catch (const std::exception& e) {
        std::cerr << "itfs: error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return 0;
}
