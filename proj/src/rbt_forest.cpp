#include "binann/rbt_forest.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <stdexcept>

#include "binann/binary_io.hpp"
#include "binann/rng.hpp"

namespace binann {

namespace {

constexpr char kMagic[5] = "RBTF";
constexpr std::uint32_t kVersion = 1;

struct TreeBuilder {
    const LabeledDataset& dataset;
    std::uint32_t max_depth;
    RbtForest::Tree tree;
    Rng rng;
    std::vector<std::uint32_t> available;  // subset bits not yet used on the current path

    TreeBuilder(const LabeledDataset& ds, std::uint32_t depth, std::vector<std::uint32_t> subset,
                std::uint64_t seed)
        : dataset(ds), max_depth(depth), rng(seed) {
        tree.bit_subset = std::move(subset);
        available = tree.bit_subset;
    }

    // Returns the index of the node/leaf created for `ids` at `depth`.
    std::int32_t build(std::vector<DescriptorId>& ids, std::uint32_t depth) {
        if (depth == max_depth) {
            tree.leaves.push_back(std::move(ids));
            return static_cast<std::int32_t>(tree.leaves.size() - 1);
        }

        // Pick this node's bit among the subset bits unused on the path.
        const auto pick = static_cast<std::size_t>(rng.uniform(available.size()));
        std::swap(available[pick], available.back());
        const std::uint32_t bit = available.back();
        available.pop_back();

        const auto node_index = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back({bit, -1, -1});

        std::vector<DescriptorId> left, right;
        left.reserve(ids.size());
        right.reserve(ids.size());
        for (DescriptorId id : ids) {
            (test_bit(dataset.descriptor(id), bit) ? right : left).push_back(id);
        }
        ids.clear();
        ids.shrink_to_fit();

        if (!left.empty()) {
            tree.nodes[node_index].left = build(left, depth + 1);
        }
        if (!right.empty()) {
            tree.nodes[node_index].right = build(right, depth + 1);
        }

        available.push_back(bit);
        std::swap(available[pick], available.back());
        return node_index;
    }
};

RbtForest::Tree build_tree(const LabeledDataset& dataset, const RbtParams& params,
                           const std::vector<double>* bit_weights, std::uint32_t tree_index) {
    Rng subset_rng(derive_seed(params.rng_seed, tree_index));
    std::vector<std::uint32_t> subset =
        bit_weights ? subset_rng.sample_distinct_weighted(*bit_weights, params.max_bits)
                    : subset_rng.sample_distinct(dataset.dim(), params.max_bits);

    TreeBuilder builder(dataset, params.max_depth, std::move(subset),
                        derive_seed(params.rng_seed, 0x100000000ULL + tree_index));
    std::vector<DescriptorId> all(dataset.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<DescriptorId>(i);
    builder.build(all, 0);
    return std::move(builder.tree);
}

}  // namespace

RbtForest RbtForest::build(const LabeledDataset& dataset, const RbtParams& params,
                           const std::vector<double>* bit_weights) {
    if (dataset.empty()) {
        throw std::invalid_argument("RbtForest::build: empty dataset");
    }
    if (params.num_trees < 1) {
        throw std::invalid_argument("RbtForest::build: num_trees must be >= 1");
    }
    if (params.max_bits < 1 || params.max_bits > dataset.dim()) {
        throw std::invalid_argument("RbtForest::build: max_bits must be in [1, dim]");
    }
    if (params.max_depth > params.max_bits) {
        throw std::invalid_argument("RbtForest::build: max_depth must not exceed max_bits");
    }
    if (bit_weights) {
        if (bit_weights->size() != dataset.dim()) {
            throw std::invalid_argument("RbtForest::build: bit_weights length must equal dim");
        }
        double sum = 0.0;
        for (double w : *bit_weights) {
            if (w < 0.0) throw std::invalid_argument("RbtForest::build: negative bit weight");
            sum += w;
        }
        if (sum <= 0.0) throw std::invalid_argument("RbtForest::build: bit_weights sum to zero");
    }

    RbtForest forest(dataset, params);
    forest.trees_.resize(params.num_trees);
    if (params.num_trees == 1) {
        forest.trees_[0] = build_tree(dataset, params, bit_weights, 0);
    } else {
        std::vector<std::future<Tree>> jobs;
        jobs.reserve(params.num_trees);
        for (std::uint32_t t = 0; t < params.num_trees; ++t) {
            jobs.push_back(std::async(std::launch::async, build_tree, std::cref(dataset),
                                      std::cref(params), bit_weights, t));
        }
        for (std::uint32_t t = 0; t < params.num_trees; ++t) {
            forest.trees_[t] = jobs[t].get();
        }
    }
    return forest;
}

const std::vector<DescriptorId>& RbtForest::route_to_leaf(const Tree& tree, BitView q) const {
    if (params_.max_depth == 0) {
        return tree.leaves[0];
    }
    std::int32_t node = 0;
    for (std::uint32_t depth = 0;; ++depth) {
        const Node& n = tree.nodes[static_cast<std::size_t>(node)];
        const bool want_right = test_bit(q, n.bit_pos);
        std::int32_t next = want_right ? n.right : n.left;
        if (next < 0) next = want_right ? n.left : n.right;
        if (depth + 1 == params_.max_depth) {
            return tree.leaves[static_cast<std::size_t>(next)];
        }
        node = next;
    }
}

std::vector<DescriptorId> RbtForest::candidates(BitView q) const {
    if (q.dim != dataset_->dim()) {
        throw std::invalid_argument("RbtForest::candidates: dimension mismatch");
    }
    std::vector<DescriptorId> ids;
    for (const Tree& tree : trees_) {
        const auto& leaf = route_to_leaf(tree, q);
        ids.insert(ids.end(), leaf.begin(), leaf.end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<Neighbor> RbtForest::query(BitView q, std::size_t n) const {
    return select_top_n(candidates(q), q, *dataset_, n);
}

std::uint64_t RbtForest::memory_bytes() const {
    std::uint64_t internal = 0, leaves = 0, ids = 0;
    for (const Tree& tree : trees_) {
        internal += tree.nodes.size();
        leaves += tree.leaves.size();
        for (const auto& leaf : tree.leaves) ids += leaf.size();
    }
    return internal * kNodeBytes + leaves * kLeafBytes + ids * kIdBytes;
}

void RbtForest::save(std::ostream& out) const {
    io::write_magic(out, kMagic);
    io::write_u32(out, kVersion);
    io::write_u32(out, dataset_->dim());
    io::write_u64(out, dataset_->size());
    io::write_u32(out, params_.num_trees);
    io::write_u32(out, params_.max_depth);
    io::write_u32(out, params_.max_bits);
    io::write_u32(out, params_.n_default);
    io::write_u64(out, params_.rng_seed);
    for (const Tree& tree : trees_) {
        io::write_u32(out, static_cast<std::uint32_t>(tree.bit_subset.size()));
        for (std::uint32_t pos : tree.bit_subset) io::write_u32(out, pos);
        io::write_u64(out, tree.nodes.size());
        for (const Node& n : tree.nodes) {
            io::write_u32(out, n.bit_pos);
            io::write_u32(out, static_cast<std::uint32_t>(n.left));
            io::write_u32(out, static_cast<std::uint32_t>(n.right));
        }
        io::write_u64(out, tree.leaves.size());
        for (const auto& leaf : tree.leaves) {
            io::write_u64(out, leaf.size());
            for (DescriptorId id : leaf) io::write_u32(out, id);
        }
    }
}

RbtForest RbtForest::load(std::istream& in, const LabeledDataset& dataset) {
    io::expect_magic(in, kMagic);
    if (const auto version = io::read_u32(in); version != kVersion) {
        throw io::FormatError("unsupported RBTF version " + std::to_string(version));
    }
    if (const auto dim = io::read_u32(in); dim != dataset.dim()) {
        throw io::FormatError("RBTF dim does not match dataset");
    }
    if (const auto count = io::read_u64(in); count != dataset.size()) {
        throw io::FormatError("RBTF descriptor count does not match dataset");
    }
    RbtParams params;
    params.num_trees = io::read_u32(in);
    params.max_depth = io::read_u32(in);
    params.max_bits = io::read_u32(in);
    params.n_default = io::read_u32(in);
    params.rng_seed = io::read_u64(in);

    RbtForest forest(dataset, params);
    forest.trees_.resize(params.num_trees);
    for (Tree& tree : forest.trees_) {
        tree.bit_subset.resize(io::read_u32(in));
        for (auto& pos : tree.bit_subset) pos = io::read_u32(in);
        tree.nodes.resize(io::read_u64(in));
        for (Node& n : tree.nodes) {
            n.bit_pos = io::read_u32(in);
            n.left = static_cast<std::int32_t>(io::read_u32(in));
            n.right = static_cast<std::int32_t>(io::read_u32(in));
        }
        tree.leaves.resize(io::read_u64(in));
        for (auto& leaf : tree.leaves) {
            leaf.resize(io::read_u64(in));
            for (auto& id : leaf) id = io::read_u32(in);
        }
    }
    return forest;
}

void RbtForest::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save(out);
}

RbtForest RbtForest::load_file(const std::string& path, const LabeledDataset& dataset) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return load(in, dataset);
}

}  // namespace binann
