#include "binann/bench_driver.hpp"

#include <memory>
#include <stdexcept>

#include "binann/bit_metrics.hpp"

namespace binann {

namespace {

LshVariant variant_of(const std::string& method) {
    if (method == "lsh") return LshVariant::Classic;
    if (method == "uniform-lsh") return LshVariant::Uniform;
    if (method == "multiprobe-lsh") return LshVariant::MultiProbe;
    throw std::invalid_argument("not an lsh method: " + method);
}

std::vector<double> bias_weights(const LabeledDataset& dataset, const std::string& bias,
                                 double sharpening) {
    const BitStatistics stats = compute_bit_statistics(dataset);
    if (bias == "entropy") return weights_from_metric(stats.entropy, sharpening);
    if (bias == "cond-entropy") return weights_from_metric(stats.cond_entropy, sharpening);
    if (bias == "stability") return stability_weights(stats.stability, sharpening);
    throw std::invalid_argument("unknown bias metric: " + bias);
}

}  // namespace

bool is_known_method(const std::string& method) {
    return method == "rbt" || method == "lsh" || method == "uniform-lsh" ||
           method == "multiprobe-lsh" || method == "oracle";
}

BenchJob default_job(const std::string& method) {
    if (!is_known_method(method)) throw std::invalid_argument("unknown method: " + method);
    BenchJob job;
    job.method = method;
    if (method == "rbt") {
        job.rbt.num_trees = 6;
        job.rbt.max_depth = 40;
        job.rbt.max_bits = 256;
    } else if (method != "oracle") {
        job.lsh = default_lsh_params(variant_of(method));
    }
    return job;
}

std::vector<std::pair<std::string, std::string>> param_record(const BenchJob& job) {
    std::vector<std::pair<std::string, std::string>> rec;
    if (job.method == "rbt") {
        rec.emplace_back("trees", std::to_string(job.rbt.num_trees));
        rec.emplace_back("depth", std::to_string(job.rbt.max_depth));
        rec.emplace_back("bits", std::to_string(job.rbt.max_bits));
    } else if (job.method != "oracle") {
        rec.emplace_back("tables", std::to_string(job.lsh.num_tables));
        rec.emplace_back("hash_length", std::to_string(job.lsh.hash_length));
        if (job.lsh.variant == LshVariant::MultiProbe)
            rec.emplace_back("probes", std::to_string(job.lsh.probes));
    }
    if (job.method == "rbt" && job.bias != "none") {
        rec.emplace_back("bias", job.bias);
        rec.emplace_back("sharpening", std::to_string(job.sharpening));
    }
    return rec;
}

IndexFactory make_factory(const BenchJob& job) {
    if (job.method == "rbt") {
        return [params = job.rbt, bias = job.bias,
                sharpening = job.sharpening](const LabeledDataset& subset,
                                             std::uint64_t seed) -> std::unique_ptr<AnnIndex> {
            RbtParams p = params;
            p.rng_seed = seed;
            if (bias == "none") return std::make_unique<RbtForest>(RbtForest::build(subset, p));
            const auto weights = bias_weights(subset, bias, sharpening);
            return std::make_unique<RbtForest>(RbtForest::build(subset, p, &weights));
        };
    }
    if (job.method == "oracle") {
        return [](const LabeledDataset& subset, std::uint64_t) -> std::unique_ptr<AnnIndex> {
            return std::make_unique<OracleIndex>(subset);
        };
    }
    return [params = job.lsh](const LabeledDataset& subset,
                              std::uint64_t seed) -> std::unique_ptr<AnnIndex> {
        LshParams p = params;
        p.rng_seed = seed;
        return std::make_unique<HashIndex>(HashIndex::build(subset, p));
    };
}

BenchReport run_job(const LabeledDataset& dataset, const BenchJob& job, const BenchConfig& cfg) {
    if (!is_known_method(job.method)) throw std::invalid_argument("unknown method: " + job.method);
    BenchReport report = run_benchmark(dataset, make_factory(job), cfg);
    report.method = job.method;
    report.params = param_record(job);
    return report;
}

}  // namespace binann
