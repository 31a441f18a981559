#pragma once

#include <string>
#include <utility>
#include <vector>

#include "binann/eval.hpp"
#include "binann/lsh_index.hpp"
#include "binann/rbt_forest.hpp"

namespace binann {

/// One benchmark configuration. `method` selects which parameter block is
/// live: "rbt" uses `rbt`, the lsh variants use `lsh`, "oracle" uses neither.
/// `bias` picks the per-bit statistic used to weight rbt bit sampling:
/// none (uniform), entropy, cond-entropy, or stability.
struct BenchJob {
    std::string method;
    RbtParams rbt;
    LshParams lsh;
    std::string bias = "none";
    double sharpening = 1.0;
};

/// Known method names: rbt, lsh, uniform-lsh, multiprobe-lsh, oracle.
bool is_known_method(const std::string& method);

/// Job with the method's benchmark-default parameters filled in.
BenchJob default_job(const std::string& method);

/// Key/value pairs for report rows, only the axes the method actually has.
std::vector<std::pair<std::string, std::string>> param_record(const BenchJob& job);

/// Index factory for run_benchmark; the run seed overrides the seed stored
/// in the job's parameter block.
IndexFactory make_factory(const BenchJob& job);

/// run_benchmark plus method/params bookkeeping.
BenchReport run_job(const LabeledDataset& dataset, const BenchJob& job, const BenchConfig& cfg);

}  // namespace binann
