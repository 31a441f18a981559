#pragma once

#include <cstdint>
#include <string>

#include "binann/dataset.hpp"

namespace binann {

/// Synthetic labeled-descriptor model: one random center per 3D point, each
/// descriptor a noisy copy of its point's center.
struct SynthParams {
    std::uint32_t num_points = 100;
    std::uint32_t per_point_min = 10;  ///< descriptors per point; a range is sampled uniformly
    std::uint32_t per_point_max = 10;
    std::uint32_t dim = 512;
    double flip_prob = 0.05;  ///< per-bit noise, must stay below 0.5
    std::uint64_t rng_seed = 0;
};

/// Deterministic given rng_seed; each label draws from its own derived stream.
LabeledDataset generate(const SynthParams& params);

/// BDSC v1 container:
///   "BDSC" | u32 version | u32 dim | u64 count |
///   count * ( ceil(dim/8) descriptor bytes | u32 label )
/// all integers little-endian, bit i of a descriptor = bit (i mod 8) of
/// byte (i div 8). save/load round-trips are bit-exact.
void save_descriptors(const LabeledDataset& dataset, const std::string& path);

/// `expected_dim` == 0 accepts whatever the file declares; otherwise a
/// differing file dim is an error.
LabeledDataset load_descriptors(const std::string& path, std::uint32_t expected_dim = 0);

}  // namespace binann
