#include "binann/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "binann/rng.hpp"

namespace binann {

namespace {

// Independent seed streams per run: subset choice, index build, query sample.
constexpr std::uint64_t kSubsetTag = 1;
constexpr std::uint64_t kBuildTag = 2;
constexpr std::uint64_t kQueryTag = 3;

std::uint64_t run_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t run) {
    return derive_seed(derive_seed(base, tag), run);
}

std::string format_double(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

std::vector<Neighbor> exact_top_n(const LabeledDataset& dataset, BitView q, std::size_t n,
                                  std::optional<DescriptorId> exclude) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    std::vector<Neighbor> all;
    all.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto id = static_cast<DescriptorId>(i);
        if (exclude && *exclude == id) continue;
        all.push_back({id, hamming(q, dataset.descriptor(i))});
    }
    const std::size_t keep = std::min(n, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                      [](const Neighbor& a, const Neighbor& b) {
                          return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
                      });
    all.resize(keep);
    return all;
}

double precision_at_n(std::span<const Neighbor> retrieved, PointLabel query_label,
                      const LabeledDataset& dataset, std::size_t n) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    const std::size_t considered = std::min(n, retrieved.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < considered; ++i) {
        if (dataset.label(retrieved[i].id) == query_label) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n);
}

std::optional<double> recall_at_n(std::span<const Neighbor> retrieved, PointLabel query_label,
                                  const LabeledDataset& dataset, std::size_t n,
                                  DescriptorId query_id) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    std::size_t population = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (dataset.label(i) == query_label && static_cast<DescriptorId>(i) != query_id)
            ++population;
    }
    if (population == 0) return std::nullopt;
    const std::size_t considered = std::min(n, retrieved.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < considered; ++i) {
        if (dataset.label(retrieved[i].id) == query_label) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(population);
}

std::vector<Neighbor> OracleIndex::query(BitView q, std::size_t n) const {
    return exact_top_n(*dataset_, q, n);
}

std::vector<DescriptorId> OracleIndex::candidates(BitView) const {
    std::vector<DescriptorId> ids(dataset_->size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<DescriptorId>(i);
    return ids;
}

BenchReport run_benchmark(const LabeledDataset& dataset, const IndexFactory& factory,
                          const BenchConfig& cfg) {
    if (dataset.empty()) throw std::invalid_argument("dataset is empty");
    if (cfg.n < 1) throw std::invalid_argument("n must be at least 1");
    if (cfg.runs < 1) throw std::invalid_argument("runs must be at least 1");
    if (cfg.queries_per_run < 1) throw std::invalid_argument("queries_per_run must be at least 1");
    const std::size_t subset_size = cfg.subset_size == 0 ? dataset.size() : cfg.subset_size;
    if (subset_size > dataset.size())
        throw std::invalid_argument("dataset holds " + std::to_string(dataset.size()) +
                                    " descriptors, fewer than subset size " +
                                    std::to_string(subset_size));

    BenchReport report;
    report.n = cfg.n;
    report.per_run.reserve(cfg.runs);

    for (std::size_t run = 0; run < cfg.runs; ++run) {
        // Subset for this run; full-dataset runs skip the copy.
        LabeledDataset subset_storage(dataset.dim());
        const LabeledDataset* subset = &dataset;
        if (subset_size < dataset.size()) {
            Rng subset_rng(run_seed(cfg.base_seed, kSubsetTag, run));
            auto picks = subset_rng.sample_distinct(dataset.size(), subset_size);
            std::sort(picks.begin(), picks.end());
            for (const std::size_t i : picks)
                subset_storage.add(dataset.descriptor(i), dataset.label(i));
            subset = &subset_storage;
        }

        const auto index = factory(*subset, run_seed(cfg.base_seed, kBuildTag, run));

        Rng query_rng(run_seed(cfg.base_seed, kQueryTag, run));
        const std::size_t query_count = std::min(cfg.queries_per_run, subset->size());
        const auto query_ids = query_rng.sample_distinct(subset->size(), query_count);

        std::unordered_map<PointLabel, std::size_t> label_counts;
        for (std::size_t i = 0; i < subset->size(); ++i) ++label_counts[subset->label(i)];

        RunStats stats;
        stats.queries = query_count;
        stats.memory_bytes = index->memory_bytes();

        std::uint64_t candidate_total = 0;
        for (const std::size_t qi : query_ids)
            candidate_total += index->candidates(subset->descriptor(qi)).size();
        stats.mean_candidates =
            static_cast<double>(candidate_total) / static_cast<double>(query_count);

        // Timed loop: query() wall time only, one thread, monotonic clock.
        double precision_sum = 0.0;
        double recall_sum = 0.0;
        std::size_t recall_counted = 0;
        std::chrono::steady_clock::duration query_time{0};
        for (const std::size_t qi : query_ids) {
            const auto qid = static_cast<DescriptorId>(qi);
            const BitView q = subset->descriptor(qi);

            const auto t0 = std::chrono::steady_clock::now();
            auto retrieved = index->query(q, cfg.n + 1);
            query_time += std::chrono::steady_clock::now() - t0;

            // Leave-one-out: the query's own id never counts as a result.
            std::erase_if(retrieved, [qid](const Neighbor& nb) { return nb.id == qid; });
            if (retrieved.size() > cfg.n) retrieved.resize(cfg.n);

            const PointLabel label = subset->label(qi);
            precision_sum += precision_at_n(retrieved, label, *subset, cfg.n);
            const std::size_t others = label_counts[label] - 1;
            if (others == 0) {
                ++stats.recall_skipped;
            } else {
                std::size_t hits = 0;
                for (const Neighbor& nb : retrieved)
                    if (subset->label(nb.id) == label) ++hits;
                recall_sum += static_cast<double>(hits) / static_cast<double>(others);
                ++recall_counted;
            }
        }

        stats.precision = precision_sum / static_cast<double>(query_count);
        stats.recall = recall_counted == 0 ? 0.0 : recall_sum / static_cast<double>(recall_counted);
        const auto micros =
            std::chrono::duration_cast<std::chrono::nanoseconds>(query_time).count() / 1000.0;
        stats.avg_query_us = micros / static_cast<double>(query_count);
        report.per_run.push_back(stats);
    }

    RunStats& agg = report.aggregate;
    for (const RunStats& r : report.per_run) {
        agg.precision += r.precision;
        agg.recall += r.recall;
        agg.avg_query_us += r.avg_query_us;
        agg.memory_bytes += r.memory_bytes;
        agg.mean_candidates += r.mean_candidates;
        agg.queries += r.queries;
        agg.recall_skipped += r.recall_skipped;
    }
    const auto runs = static_cast<double>(cfg.runs);
    agg.precision /= runs;
    agg.recall /= runs;
    agg.avg_query_us /= runs;
    agg.memory_bytes = static_cast<std::uint64_t>(
        static_cast<double>(agg.memory_bytes) / runs + 0.5);
    agg.mean_candidates /= runs;
    return report;
}

namespace {

const char* const kParamColumns[] = {"trees", "depth", "bits", "tables", "hash_length", "probes"};

std::string param_value(const BenchReport& report, const char* key) {
    for (const auto& [k, v] : report.params)
        if (k == key) return v;
    return "";
}

void write_csv_row(std::ostream& out, const BenchReport& report, const std::string& run_cell,
                   const RunStats& stats, std::size_t runs, std::optional<bool> matches_oracle) {
    out << report.method;
    for (const char* key : kParamColumns) out << ',' << param_value(report, key);
    out << ',' << run_cell;
    out << ',' << format_double(stats.precision, 6);
    out << ',' << format_double(stats.recall, 6);
    out << ',' << format_double(stats.avg_query_us, 3);
    out << ',' << stats.memory_bytes;
    out << ',' << format_double(stats.mean_candidates, 2);
    out << ',' << stats.queries;
    out << ',' << stats.recall_skipped;
    out << ',' << runs;
    if (matches_oracle) out << ',' << (*matches_oracle ? "true" : "false");
    out << '\n';
}

}  // namespace

void write_csv_header(std::ostream& out, std::size_t n, bool matches_oracle_column) {
    out << "method";
    for (const char* key : kParamColumns) out << ',' << key;
    out << ",run,precision_at_" << n << ",recall_at_" << n
        << ",avg_query_us,memory_bytes,mean_candidates,queries,recall_skipped,runs";
    if (matches_oracle_column) out << ",matches_oracle";
    out << '\n';
}

void write_csv_rows(std::ostream& out, const BenchReport& report, bool per_run_rows,
                    std::optional<bool> matches_oracle) {
    if (per_run_rows) {
        for (std::size_t i = 0; i < report.per_run.size(); ++i)
            write_csv_row(out, report, std::to_string(i + 1), report.per_run[i],
                          report.per_run.size(), matches_oracle);
    }
    write_csv_row(out, report, "mean", report.aggregate, report.per_run.size(), matches_oracle);
}

std::string report_to_json(const BenchReport& report) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : report.params) params[k] = v;

    const auto stats_json = [](const RunStats& s) {
        return nlohmann::json{{"precision", s.precision},
                              {"recall", s.recall},
                              {"avg_query_us", s.avg_query_us},
                              {"memory_bytes", s.memory_bytes},
                              {"mean_candidates", s.mean_candidates},
                              {"queries", s.queries},
                              {"recall_skipped", s.recall_skipped}};
    };

    nlohmann::json per_run = nlohmann::json::array();
    for (const RunStats& s : report.per_run) per_run.push_back(stats_json(s));

    nlohmann::json doc{{"method", report.method}, {"params", params},     {"n", report.n},
                       {"runs", report.per_run.size()},
                       {"aggregate", stats_json(report.aggregate)},       {"per_run", per_run}};
    return doc.dump(2);
}

}  // namespace binann
