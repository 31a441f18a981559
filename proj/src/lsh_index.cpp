#include "binann/lsh_index.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "binann/binary_io.hpp"
#include "binann/rng.hpp"

namespace binann {

namespace {
constexpr char kMagic[5] = "LSHF";
constexpr std::uint32_t kVersion = 1;
}  // namespace

std::string to_string(LshVariant v) {
    switch (v) {
        case LshVariant::Classic: return "lsh";
        case LshVariant::Uniform: return "uniform-lsh";
        case LshVariant::MultiProbe: return "multiprobe-lsh";
    }
    return "?";
}

LshParams default_lsh_params(LshVariant variant) {
    LshParams p;
    p.variant = variant;
    if (variant == LshVariant::MultiProbe) {
        p.hash_length = 28;
        p.probes = 28;
    }
    return p;
}

HashIndex HashIndex::build(const LabeledDataset& dataset, const LshParams& params) {
    if (params.num_tables < 1) {
        throw std::invalid_argument("HashIndex::build: num_tables must be >= 1");
    }
    if (params.hash_length > 64) {
        throw std::invalid_argument("HashIndex::build: hash_length above 64 is not supported");
    }
    const bool with_replacement = params.variant == LshVariant::Classic;
    if (!with_replacement && params.hash_length > dataset.dim()) {
        throw std::invalid_argument(
            "HashIndex::build: hash_length exceeds dim for sampling without replacement");
    }
    if (with_replacement && params.hash_length > 0 && dataset.dim() == 0) {
        throw std::invalid_argument("HashIndex::build: empty descriptor space");
    }

    HashIndex index(dataset, params);
    index.tables_.resize(params.num_tables);
    for (std::uint32_t t = 0; t < params.num_tables; ++t) {
        Table& table = index.tables_[t];
        Rng rng(derive_seed(params.rng_seed, t));
        if (with_replacement) {
            table.bit_positions.resize(params.hash_length);
            for (auto& pos : table.bit_positions) {
                pos = static_cast<std::uint32_t>(rng.uniform(dataset.dim()));
            }
        } else {
            table.bit_positions = rng.sample_distinct(dataset.dim(), params.hash_length);
        }
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            table.buckets[index.key_of(dataset.descriptor(i), table)].push_back(
                static_cast<DescriptorId>(i));
        }
    }
    return index;
}

std::uint64_t HashIndex::key_of(BitView d, const Table& table) const {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < table.bit_positions.size(); ++k) {
        if (test_bit(d, table.bit_positions[k])) key |= std::uint64_t{1} << k;
    }
    return key;
}

std::vector<DescriptorId> HashIndex::candidates(BitView q) const {
    if (q.dim != dataset_->dim()) {
        throw std::invalid_argument("HashIndex::candidates: dimension mismatch");
    }
    const std::uint32_t probes =
        params_.variant == LshVariant::MultiProbe ? std::min(params_.probes, params_.hash_length)
                                                  : 0;
    std::vector<DescriptorId> ids;
    for (const Table& table : tables_) {
        const std::uint64_t key = key_of(q, table);
        const auto gather = [&](std::uint64_t k) {
            if (auto it = table.buckets.find(k); it != table.buckets.end()) {
                ids.insert(ids.end(), it->second.begin(), it->second.end());
            }
        };
        gather(key);
        for (std::uint32_t j = 0; j < probes; ++j) {
            gather(key ^ (std::uint64_t{1} << j));
        }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<Neighbor> HashIndex::query(BitView q, std::size_t n) const {
    return select_top_n(candidates(q), q, *dataset_, n);
}

std::uint64_t HashIndex::memory_bytes() const {
    std::uint64_t buckets = 0, ids = 0;
    for (const Table& table : tables_) {
        buckets += table.buckets.size();
        for (const auto& [key, list] : table.buckets) ids += list.size();
    }
    return buckets * kBucketBytes + ids * kIdBytes + tables_.size() * kTableBytes;
}

bool HashIndex::structurally_equal(const HashIndex& other) const {
    if (params_ != other.params_ || tables_.size() != other.tables_.size()) return false;
    for (std::size_t t = 0; t < tables_.size(); ++t) {
        if (tables_[t].bit_positions != other.tables_[t].bit_positions) return false;
        if (tables_[t].buckets.size() != other.tables_[t].buckets.size()) return false;
        for (const auto& [key, list] : tables_[t].buckets) {
            auto it = other.tables_[t].buckets.find(key);
            if (it == other.tables_[t].buckets.end() || it->second != list) return false;
        }
    }
    return true;
}

void HashIndex::save(std::ostream& out) const {
    io::write_magic(out, kMagic);
    io::write_u32(out, kVersion);
    io::write_u32(out, dataset_->dim());
    io::write_u64(out, dataset_->size());
    io::write_u32(out, params_.num_tables);
    io::write_u32(out, params_.hash_length);
    io::write_u32(out, static_cast<std::uint32_t>(params_.variant));
    io::write_u32(out, params_.probes);
    io::write_u64(out, params_.rng_seed);
    for (const Table& table : tables_) {
        io::write_u32(out, static_cast<std::uint32_t>(table.bit_positions.size()));
        for (std::uint32_t pos : table.bit_positions) io::write_u32(out, pos);
        std::vector<std::uint64_t> keys;
        keys.reserve(table.buckets.size());
        for (const auto& [key, list] : table.buckets) keys.push_back(key);
        std::sort(keys.begin(), keys.end());
        io::write_u64(out, keys.size());
        for (std::uint64_t key : keys) {
            const auto& list = table.buckets.at(key);
            io::write_u64(out, key);
            io::write_u64(out, list.size());
            for (DescriptorId id : list) io::write_u32(out, id);
        }
    }
}

HashIndex HashIndex::load(std::istream& in, const LabeledDataset& dataset) {
    io::expect_magic(in, kMagic);
    if (const auto version = io::read_u32(in); version != kVersion) {
        throw io::FormatError("unsupported LSHF version " + std::to_string(version));
    }
    if (const auto dim = io::read_u32(in); dim != dataset.dim()) {
        throw io::FormatError("LSHF dim does not match dataset");
    }
    if (const auto count = io::read_u64(in); count != dataset.size()) {
        throw io::FormatError("LSHF descriptor count does not match dataset");
    }
    LshParams params;
    params.num_tables = io::read_u32(in);
    params.hash_length = io::read_u32(in);
    const auto variant = io::read_u32(in);
    if (variant > static_cast<std::uint32_t>(LshVariant::MultiProbe)) {
        throw io::FormatError("LSHF unknown variant");
    }
    params.variant = static_cast<LshVariant>(variant);
    params.probes = io::read_u32(in);
    params.rng_seed = io::read_u64(in);

    HashIndex index(dataset, params);
    index.tables_.resize(params.num_tables);
    for (Table& table : index.tables_) {
        table.bit_positions.resize(io::read_u32(in));
        for (auto& pos : table.bit_positions) pos = io::read_u32(in);
        const std::uint64_t bucket_count = io::read_u64(in);
        table.buckets.reserve(bucket_count);
        for (std::uint64_t b = 0; b < bucket_count; ++b) {
            const std::uint64_t key = io::read_u64(in);
            auto& list = table.buckets[key];
            list.resize(io::read_u64(in));
            for (auto& id : list) id = io::read_u32(in);
        }
    }
    return index;
}

void HashIndex::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save(out);
}

HashIndex HashIndex::load_file(const std::string& path, const LabeledDataset& dataset) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return load(in, dataset);
}

}  // namespace binann
