#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "binann/bench_driver.hpp"

namespace binann {

/// Malformed sweep config; the CLI maps this to a usage error.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Declarative sweep description, parsed from a sectioned key=value file:
///
///   dataset = descriptors.bdsc
///   subset = 0            # 0 = whole dataset
///   queries = 1000
///   runs = 10
///   n = 10
///   seed = 42
///   output = sweep.csv
///
///   [rbt]                 # one section per method to sweep
///   trees = 1,3,6,9,12    # omitted axes fall back to the default grids
///   depth = 20,30,40,50
///   bits = 64,128,256,512
///
///   [lsh]
///   tables = 1,2,4,8,16
///
/// `#` and `;` start comments. Sections: rbt, lsh, uniform-lsh,
/// multiprobe-lsh, oracle. An explicitly empty axis is an error.
struct SweepConfig {
    std::string dataset_path;
    std::string output_path;  ///< empty = stdout
    std::size_t subset = 0;
    std::size_t queries = 1000;
    std::size_t runs = 10;
    std::size_t n = 10;
    std::uint64_t seed = 0;

    struct MethodGrid {
        std::string method;
        std::map<std::string, std::vector<std::uint64_t>> axes;
    };
    std::vector<MethodGrid> grids;  ///< in file order
};

SweepConfig parse_sweep_config(std::istream& in);
SweepConfig parse_sweep_config_file(const std::string& path);

/// Cartesian product of each method's grid, in file order; absent axes use
/// the default grids (rbt: trees {1,3,6,9,12} x depth {20,30,40,50} x
/// bits {64,128,256,512}; lsh family: tables {1,2,4,8,16} at the variant's
/// default hash length, multi-probe probes default to the hash length).
std::vector<BenchJob> expand_jobs(const SweepConfig& config);

}  // namespace binann
