#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "binann/dataset.hpp"
#include "binann/descriptor.hpp"

namespace binann {

/// One retrieval result: dataset id plus its Hamming distance to the query.
struct Neighbor {
    DescriptorId id;
    std::uint32_t distance;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Rank `candidates` by Hamming distance to `query` and keep the closest n.
/// Ties break on ascending id, so the output is fully deterministic.
inline std::vector<Neighbor> select_top_n(std::span<const DescriptorId> candidates,
                                          BitView query,
                                          const LabeledDataset& dataset,
                                          std::size_t n) {
    if (n < 1) throw std::invalid_argument("select_top_n: n must be >= 1");
    std::vector<Neighbor> ranked;
    ranked.reserve(candidates.size());
    for (DescriptorId id : candidates) {
        if (id >= dataset.size()) {
            throw std::out_of_range("select_top_n: candidate id out of range");
        }
        ranked.push_back({id, hamming(query, dataset.descriptor(id))});
    }
    auto by_distance_then_id = [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
    };
    const std::size_t keep = std::min(n, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + keep, ranked.end(), by_distance_then_id);
    ranked.resize(keep);
    return ranked;
}

}  // namespace binann
