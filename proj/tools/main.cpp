// binann: generate synthetic binary-descriptor datasets, benchmark the tree
// forest against the hashing baselines, sweep parameter grids, dump per-bit
// statistics. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "binann/bench_driver.hpp"
#include "binann/bit_metrics.hpp"
#include "binann/datagen.hpp"
#include "binann/eval.hpp"
#include "binann/sweep_config.hpp"

namespace {

struct GenOpts {
    binann::SynthParams params;
    std::uint32_t per_point = 10;
    std::uint32_t per_point_max = 0;  // 0 = same as per_point
    std::string output;
};

struct BenchOpts {
    std::string data;
    std::string method;
    binann::BenchJob job;
    binann::BenchConfig cfg;
    std::string output;  // empty = stdout
    bool json = false;
    bool check_oracle = false;
    bool aggregate_only = false;
};

struct SweepOpts {
    std::string config_path;
    std::string data_override;
    std::string output_override;
    // -1 sentinel: flag absent, keep the config file's value.
    std::int64_t subset = -1, queries = -1, runs = -1, n = -1, seed = -1;
};

struct MetricsOpts {
    std::string data;
    std::string output;
};

// Output stream selection: path or stdout.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int run_gen(const GenOpts& opts) {
    binann::SynthParams p = opts.params;
    p.per_point_min = opts.per_point;
    p.per_point_max = opts.per_point_max == 0 ? opts.per_point : opts.per_point_max;
    const binann::LabeledDataset dataset = binann::generate(p);
    binann::save_descriptors(dataset, opts.output);
    std::cerr << "wrote " << dataset.size() << " descriptors (" << p.num_points << " labels, dim "
              << p.dim << ") to " << opts.output << "\n";
    return 0;
}

bool reports_match(const binann::BenchReport& a, const binann::BenchReport& b) {
    if (a.per_run.size() != b.per_run.size()) return false;
    for (std::size_t i = 0; i < a.per_run.size(); ++i) {
        if (a.per_run[i].precision != b.per_run[i].precision) return false;
        if (a.per_run[i].recall != b.per_run[i].recall) return false;
    }
    return a.aggregate.precision == b.aggregate.precision &&
           a.aggregate.recall == b.aggregate.recall;
}

int run_bench(const BenchOpts& opts) {
    const binann::LabeledDataset dataset = binann::load_descriptors(opts.data);
    const binann::BenchReport report = binann::run_job(dataset, opts.job, opts.cfg);

    std::optional<bool> matches;
    if (opts.check_oracle) {
        const binann::BenchReport oracle =
            binann::run_job(dataset, binann::default_job("oracle"), opts.cfg);
        matches = reports_match(report, oracle);
    }

    OutputTarget out(opts.output);
    if (opts.json) {
        auto doc = nlohmann::json::parse(binann::report_to_json(report));
        if (matches) doc["matches_oracle"] = *matches;
        out.stream() << doc.dump(2) << "\n";
    } else {
        binann::write_csv_header(out.stream(), opts.cfg.n, matches.has_value());
        binann::write_csv_rows(out.stream(), report, !opts.aggregate_only, matches);
    }
    return 0;
}

int run_sweep(const SweepOpts& opts) {
    binann::SweepConfig config = binann::parse_sweep_config_file(opts.config_path);
    if (!opts.data_override.empty()) config.dataset_path = opts.data_override;
    if (!opts.output_override.empty()) config.output_path = opts.output_override;
    if (opts.subset >= 0) config.subset = static_cast<std::size_t>(opts.subset);
    if (opts.queries >= 0) config.queries = static_cast<std::size_t>(opts.queries);
    if (opts.runs >= 0) config.runs = static_cast<std::size_t>(opts.runs);
    if (opts.n >= 0) config.n = static_cast<std::size_t>(opts.n);
    if (opts.seed >= 0) config.seed = static_cast<std::uint64_t>(opts.seed);
    if (config.dataset_path.empty())
        throw binann::ConfigError("no dataset given (config 'dataset' key or --data)");

    const std::vector<binann::BenchJob> jobs = binann::expand_jobs(config);
    const binann::LabeledDataset dataset = binann::load_descriptors(config.dataset_path);

    binann::BenchConfig cfg;
    cfg.subset_size = config.subset;
    cfg.queries_per_run = config.queries;
    cfg.runs = config.runs;
    cfg.n = config.n;
    cfg.base_seed = config.seed;

    OutputTarget out(config.output_path);
    binann::write_csv_header(out.stream(), cfg.n);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const binann::BenchReport report = binann::run_job(dataset, jobs[i], cfg);
        binann::write_csv_rows(out.stream(), report, /*per_run_rows=*/false);
        out.stream().flush();  // interrupts lose at most one configuration
        std::cerr << "[" << (i + 1) << "/" << jobs.size() << "] " << report.method << " done\n";
    }
    return 0;
}

int run_metrics(const MetricsOpts& opts) {
    const binann::LabeledDataset dataset = binann::load_descriptors(opts.data);
    const binann::BitStatistics stats = binann::compute_bit_statistics(dataset);
    OutputTarget out(opts.output);
    out.stream() << "bit,entropy,cond_entropy,stability\n";
    char buf[128];
    for (std::uint32_t j = 0; j < dataset.dim(); ++j) {
        std::snprintf(buf, sizeof(buf), "%u,%.12g,%.12g,%.12g\n", j, stats.entropy[j],
                      stats.cond_entropy[j], stats.stability[j]);
        out.stream() << buf;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark toolkit for approximate nearest-neighbour search over binary "
                 "descriptors in Hamming space"};
    app.require_subcommand(1);

    GenOpts gen;
    CLI::App* cmd_gen = app.add_subcommand("gen", "Generate a synthetic labeled dataset");
    cmd_gen->add_option("--points", gen.params.num_points, "Number of distinct labels")
        ->default_val(100);
    cmd_gen->add_option("--per-point", gen.per_point, "Descriptors per label")->default_val(10);
    cmd_gen->add_option("--per-point-max", gen.per_point_max,
                        "Upper bound when descriptors per label should vary");
    cmd_gen->add_option("--dim", gen.params.dim, "Descriptor width in bits")->default_val(512);
    cmd_gen->add_option("--flip", gen.params.flip_prob, "Per-bit noise probability, in [0, 0.5)")
        ->default_val(0.05);
    cmd_gen->add_option("--seed", gen.params.rng_seed, "RNG seed")->default_val(0);
    cmd_gen->add_option("-o,--output", gen.output, "Output dataset path")->required();

    BenchOpts bench;
    CLI::App* cmd_bench = app.add_subcommand("bench", "Benchmark one index configuration");
    cmd_bench->add_option("--data", bench.data, "Dataset path")->required();
    cmd_bench
        ->add_option("--method", bench.method, "Index type")
        ->required()
        ->check(CLI::IsMember({"rbt", "lsh", "uniform-lsh", "multiprobe-lsh", "oracle"}));
    std::int64_t trees = -1, depth = -1, bits = -1, tables = -1, hash_length = -1, probes = -1;
    std::string bias = "none";
    double sharpening = 1.0;
    cmd_bench->add_option("--trees", trees, "rbt: number of trees");
    cmd_bench->add_option("--depth", depth, "rbt: tree depth");
    cmd_bench->add_option("--bits", bits, "rbt: bit positions available per tree");
    cmd_bench->add_option("--tables", tables, "lsh: number of hash tables");
    cmd_bench->add_option("--hash-length", hash_length, "lsh: key length in bits (max 64)");
    cmd_bench->add_option("--probes", probes, "multiprobe-lsh: single-flip probes per table");
    cmd_bench->add_option("--bias", bias, "rbt: bit-sampling weight metric")
        ->check(CLI::IsMember({"none", "entropy", "cond-entropy", "stability"}))
        ->default_val("none");
    cmd_bench->add_option("--sharpening", sharpening, "rbt: bias weight exponent")
        ->default_val(1.0);
    cmd_bench->add_option("--n", bench.cfg.n, "Neighbours per query")->default_val(10);
    cmd_bench->add_option("--queries", bench.cfg.queries_per_run, "Queries per run")
        ->default_val(1000);
    cmd_bench->add_option("--subset", bench.cfg.subset_size, "Searched subset size (0 = all)")
        ->default_val(0);
    cmd_bench->add_option("--runs", bench.cfg.runs, "Benchmark repetitions")->default_val(10);
    cmd_bench->add_option("--seed", bench.cfg.base_seed, "Base RNG seed")->default_val(0);
    cmd_bench->add_option("-o,--output", bench.output, "Report path (default stdout)");
    cmd_bench->add_flag("--json", bench.json, "Emit JSON instead of CSV");
    cmd_bench->add_flag("--check-oracle", bench.check_oracle,
                        "Also run the exact oracle and report matches_oracle");
    cmd_bench->add_flag("--aggregate-only", bench.aggregate_only, "Skip per-run rows");

    SweepOpts sweep;
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run a parameter-grid sweep from a config");
    cmd_sweep->add_option("--config", sweep.config_path, "Sweep config file")->required();
    cmd_sweep->add_option("--data", sweep.data_override, "Override the config's dataset path");
    cmd_sweep->add_option("-o,--output", sweep.output_override, "Override the config's output");
    cmd_sweep->add_option("--subset", sweep.subset, "Override searched subset size");
    cmd_sweep->add_option("--queries", sweep.queries, "Override queries per run");
    cmd_sweep->add_option("--runs", sweep.runs, "Override run count");
    cmd_sweep->add_option("--n", sweep.n, "Override neighbours per query");
    cmd_sweep->add_option("--seed", sweep.seed, "Override base seed");

    MetricsOpts metrics;
    CLI::App* cmd_metrics = app.add_subcommand("metrics", "Dump per-bit statistics as CSV");
    cmd_metrics->add_option("--data", metrics.data, "Dataset path")->required();
    cmd_metrics->add_option("-o,--output", metrics.output, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits clean, bad usage exits 2
    }

    try {
        if (cmd_gen->parsed()) return run_gen(gen);
        if (cmd_bench->parsed()) {
            bench.job = binann::default_job(bench.method);
            bench.job.bias = bias;
            bench.job.sharpening = sharpening;
            // flag values land on top of the method defaults
            if (bench.job.method == "rbt") {
                if (trees >= 0) bench.job.rbt.num_trees = static_cast<std::uint32_t>(trees);
                if (depth >= 0) bench.job.rbt.max_depth = static_cast<std::uint32_t>(depth);
                if (bits >= 0) bench.job.rbt.max_bits = static_cast<std::uint32_t>(bits);
            } else {
                if (tables >= 0) bench.job.lsh.num_tables = static_cast<std::uint32_t>(tables);
                if (hash_length >= 0)
                    bench.job.lsh.hash_length = static_cast<std::uint32_t>(hash_length);
                if (probes >= 0) bench.job.lsh.probes = static_cast<std::uint32_t>(probes);
            }
            return run_bench(bench);
        }
        if (cmd_sweep->parsed()) return run_sweep(sweep);
        if (cmd_metrics->parsed()) return run_metrics(metrics);
    } catch (const binann::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
