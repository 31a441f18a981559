#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "binann/ann_index.hpp"
#include "binann/dataset.hpp"
#include "binann/descriptor.hpp"
#include "binann/neighbors.hpp"

namespace binann {

/// Build parameters for a random binary tree forest.
struct RbtParams {
    std::uint32_t num_trees = 1;
    std::uint32_t max_depth = 0;   ///< every leaf sits at exactly this depth
    std::uint32_t max_bits = 512;  ///< bit positions a single tree may test
    std::uint32_t n_default = 10;
    std::uint64_t rng_seed = 0;

    friend bool operator==(const RbtParams&, const RbtParams&) = default;
};

/// A forest of fixed-depth binary trees. Each internal node tests one bit of
/// the descriptor (mask-AND, no distance arithmetic) and routes it left on 0,
/// right on 1. Leaves hold descriptor ids; each tree partitions the dataset
/// across its leaves. Queries descend each tree, union the reached leaves and
/// re-rank that candidate set by exact Hamming distance.
class RbtForest : public AnnIndex {
public:
    /// One internal node. Children are indices into the owning tree's `nodes`
    /// while the child depth is below max_depth, and indices into `leaves` at
    /// max_depth. -1 marks an unpopulated branch.
    struct Node {
        std::uint32_t bit_pos = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;

        friend bool operator==(const Node&, const Node&) = default;
    };

    struct Tree {
        std::vector<std::uint32_t> bit_subset;  ///< max_bits distinct positions
        std::vector<Node> nodes;                ///< preorder; index 0 is the root
        std::vector<std::vector<DescriptorId>> leaves;

        friend bool operator==(const Tree&, const Tree&) = default;
    };

    /// Routes every dataset descriptor into every tree. Deterministic given
    /// params.rng_seed: tree t draws from its own stream derive_seed(seed, t),
    /// so build order (trees are built in parallel) never shows in the result.
    /// `bit_weights`, when given, biases each tree's bit-subset sampling and
    /// must hold dim non-negative weights with a positive sum.
    static RbtForest build(const LabeledDataset& dataset, const RbtParams& params,
                           const std::vector<double>* bit_weights = nullptr);

    std::vector<Neighbor> query(BitView q, std::size_t n) const override;
    std::vector<DescriptorId> candidates(BitView q) const override;

    /// Abstract memory model: internal nodes * 24 + leaves * 16 + stored ids * 4.
    std::uint64_t memory_bytes() const override;

    const RbtParams& params() const { return params_; }
    const std::vector<Tree>& trees() const { return trees_; }
    const LabeledDataset& dataset() const { return *dataset_; }

    /// Versioned "RBTF" snapshot of the index structure (not the descriptors).
    /// save/load round-trips are bit-exact.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static RbtForest load(std::istream& in, const LabeledDataset& dataset);
    static RbtForest load_file(const std::string& path, const LabeledDataset& dataset);

    static constexpr std::uint64_t kNodeBytes = 24;
    static constexpr std::uint64_t kLeafBytes = 16;
    static constexpr std::uint64_t kIdBytes = 4;

    friend bool operator==(const RbtForest& a, const RbtForest& b) {
        return a.params_ == b.params_ && a.trees_ == b.trees_;
    }

private:
    RbtForest(const LabeledDataset& dataset, RbtParams params)
        : dataset_(&dataset), params_(std::move(params)) {}

    /// Walk q from the root to a leaf. When the wanted child is missing the
    /// walk follows the populated sibling, so it always ends in a leaf.
    const std::vector<DescriptorId>& route_to_leaf(const Tree& tree, BitView q) const;

    const LabeledDataset* dataset_;
    RbtParams params_;
    std::vector<Tree> trees_;
};

}  // namespace binann
