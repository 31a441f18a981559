#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "binann/ann_index.hpp"
#include "binann/dataset.hpp"
#include "binann/neighbors.hpp"

namespace binann {

/// Brute-force ground truth: scan every descriptor, sort by (distance, id),
/// return the first n. `exclude` drops one id before ranking (leave-one-out).
std::vector<Neighbor> exact_top_n(const LabeledDataset& dataset, BitView q, std::size_t n,
                                  std::optional<DescriptorId> exclude = std::nullopt);

/// Fraction of the first min(n, |retrieved|) results whose label matches the
/// query's. The denominator is always n, so short result lists are penalized.
double precision_at_n(std::span<const Neighbor> retrieved, PointLabel query_label,
                      const LabeledDataset& dataset, std::size_t n);

/// Retrieved same-label results in the top n, divided by all same-label
/// descriptors other than the query itself. Empty denominator (the query's
/// label is a singleton) returns nullopt: such queries are skipped.
std::optional<double> recall_at_n(std::span<const Neighbor> retrieved, PointLabel query_label,
                                  const LabeledDataset& dataset, std::size_t n,
                                  DescriptorId query_id);

/// Exhaustive index: query() is a full scan, candidates() is every id.
/// Holds no structure of its own, so memory_bytes() is 0. The dataset must
/// outlive the index.
class OracleIndex final : public AnnIndex {
public:
    explicit OracleIndex(const LabeledDataset& dataset) : dataset_(&dataset) {}

    std::vector<Neighbor> query(BitView q, std::size_t n) const override;
    std::vector<DescriptorId> candidates(BitView q) const override;
    std::uint64_t memory_bytes() const override { return 0; }

private:
    const LabeledDataset* dataset_;
};

struct BenchConfig {
    std::size_t subset_size = 0;  ///< descriptors searched per run; 0 = whole dataset
    std::size_t queries_per_run = 1000;
    std::size_t n = 10;
    std::size_t runs = 10;
    std::uint64_t base_seed = 0;
};

struct RunStats {
    double precision = 0.0;
    double recall = 0.0;
    double avg_query_us = 0.0;
    std::uint64_t memory_bytes = 0;
    double mean_candidates = 0.0;
    std::size_t queries = 0;
    std::size_t recall_skipped = 0;  ///< queries with no other same-label descriptor
};

struct BenchReport {
    std::string method;
    std::vector<std::pair<std::string, std::string>> params;  ///< ordered key/value record
    std::size_t n = 0;
    std::vector<RunStats> per_run;
    RunStats aggregate;  ///< means over runs; queries/recall_skipped are totals
};

/// Builds a fresh index over `subset` with the given seed. The subset
/// reference stays valid for the index's lifetime within one run.
using IndexFactory =
    std::function<std::unique_ptr<AnnIndex>(const LabeledDataset& subset, std::uint64_t seed)>;

/// Leave-one-out protocol: each run draws a subset and a query sample with
/// run-derived seeds, rebuilds the index, asks for n+1 neighbours and drops
/// the query's own id. The query loop is timed single-threaded with a
/// monotonic clock; candidate-set sizes are collected in a separate untimed
/// pass. Run r of a longer schedule reproduces run r of a shorter one.
BenchReport run_benchmark(const LabeledDataset& dataset, const IndexFactory& factory,
                          const BenchConfig& cfg);

/// Fixed column order:
///   method,trees,depth,bits,tables,hash_length,probes,run,
///   precision_at_<n>,recall_at_<n>,avg_query_us,memory_bytes,
///   mean_candidates,queries,recall_skipped,runs[,matches_oracle]
/// Param columns a method does not use stay empty. One row per run
/// (run = 1..R) plus an aggregate row (run = "mean").
void write_csv_header(std::ostream& out, std::size_t n, bool matches_oracle_column = false);
void write_csv_rows(std::ostream& out, const BenchReport& report, bool per_run_rows = true,
                    std::optional<bool> matches_oracle = std::nullopt);

/// Same content as the CSV, nested: {method, params, n, runs, aggregate, per_run}.
std::string report_to_json(const BenchReport& report);

}  // namespace binann
