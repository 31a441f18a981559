#pragma once

#include <cstdint>
#include <vector>

#include "binann/descriptor.hpp"
#include "binann/neighbors.hpp"

namespace binann {

/// Query interface shared by every index so the benchmark harness can drive
/// them interchangeably. Implementations are immutable after construction and
/// safe for concurrent queries.
class AnnIndex {
public:
    virtual ~AnnIndex() = default;

    /// Approximate top-n neighbours, sorted by (distance, id).
    virtual std::vector<Neighbor> query(BitView q, std::size_t n) const = 0;

    /// The candidate id set gathered for `q` before exact re-ranking,
    /// deduplicated and sorted ascending.
    virtual std::vector<DescriptorId> candidates(BitView q) const = 0;

    /// Bytes attributed to the index structure itself (never the descriptors).
    virtual std::uint64_t memory_bytes() const = 0;
};

}  // namespace binann
