#pragma once

#include <vector>

#include "binann/dataset.hpp"

namespace binann {

/// Per-bit statistics used to bias node bit selection. Entropies are in bits,
/// so every entry lies in [0, 1]; stability lies in [0.5, 1].
struct BitStatistics {
    std::vector<double> entropy;
    std::vector<double> cond_entropy;
    std::vector<double> stability;
};

/// H(p_j) per bit, where p_j is the fraction of descriptors with bit j set.
std::vector<double> shannon_entropy(const LabeledDataset& dataset);

/// H(bit_j | label): label-weighted mean of the per-label bit entropies.
std::vector<double> conditional_entropy(const LabeledDataset& dataset);

/// Majority agreement of bit j within each label's descriptors
/// (max(ones, zeros) / count), averaged over labels weighted by their
/// descriptor counts.
std::vector<double> empirical_stability(const LabeledDataset& dataset);

BitStatistics compute_bit_statistics(const LabeledDataset& dataset);

/// Sampling weights proportional to (value + 1e-9)^sharpening, normalized to
/// sum 1. sharpening == 0 gives uniform weights. Throws when the transformed
/// vector underflows to zero everywhere or when a value is negative.
std::vector<double> weights_from_metric(const std::vector<double>& values, double sharpening);

/// weights_from_metric over stability values shifted by their 0.5 floor
/// (max(value - 0.5, 0)), so uninformative bits carry no weight.
std::vector<double> stability_weights(const std::vector<double>& stability, double sharpening);

}  // namespace binann
