#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "binann/ann_index.hpp"
#include "binann/dataset.hpp"
#include "binann/descriptor.hpp"
#include "binann/neighbors.hpp"

namespace binann {

enum class LshVariant {
    Classic,    ///< key bits sampled with replacement
    Uniform,    ///< key bits sampled without replacement
    MultiProbe  ///< Uniform sampling plus single-bit-flip probing at query time
};

std::string to_string(LshVariant v);

struct LshParams {
    std::uint32_t num_tables = 1;
    std::uint32_t hash_length = 56;  ///< bits per key; 28 is the usual Multi-probe setting
    LshVariant variant = LshVariant::Classic;
    std::uint32_t probes = 0;  ///< MultiProbe only: single-flip buckets probed per table
    std::uint64_t rng_seed = 0;

    friend bool operator==(const LshParams&, const LshParams&) = default;
};

/// Benchmark defaults per variant: hash length 56 for Classic/Uniform,
/// 28 for MultiProbe with the full single-flip probe set (28 probes).
LshParams default_lsh_params(LshVariant variant);

/// Bit-sampling LSH over binary descriptors. Each table hashes a descriptor
/// to the concatenation of its bits at `hash_length` sampled positions and
/// buckets ids by that key. Keys are packed into a u64, so hash_length is
/// capped at 64 (the benchmark settings use 56 and 28).
class HashIndex : public AnnIndex {
public:
    struct Table {
        std::vector<std::uint32_t> bit_positions;
        std::unordered_map<std::uint64_t, std::vector<DescriptorId>> buckets;
    };

    static HashIndex build(const LabeledDataset& dataset, const LshParams& params);

    std::vector<Neighbor> query(BitView q, std::size_t n) const override;
    std::vector<DescriptorId> candidates(BitView q) const override;

    /// Abstract memory model: nonempty buckets * 32 + stored ids * 4 + tables * 64.
    std::uint64_t memory_bytes() const override;

    const LshParams& params() const { return params_; }
    const std::vector<Table>& tables() const { return tables_; }

    std::uint64_t key_of(BitView d, const Table& table) const;

    /// Versioned "LSHF" snapshot; buckets are written in ascending key order
    /// so save/load round-trips are bit-exact.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static HashIndex load(std::istream& in, const LabeledDataset& dataset);
    static HashIndex load_file(const std::string& path, const LabeledDataset& dataset);

    static constexpr std::uint64_t kBucketBytes = 32;
    static constexpr std::uint64_t kTableBytes = 64;
    static constexpr std::uint64_t kIdBytes = 4;

    bool structurally_equal(const HashIndex& other) const;

private:
    HashIndex(const LabeledDataset& dataset, LshParams params)
        : dataset_(&dataset), params_(std::move(params)) {}

    const LabeledDataset* dataset_;
    LshParams params_;
    std::vector<Table> tables_;
};

}  // namespace binann
