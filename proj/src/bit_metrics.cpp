#include "binann/bit_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace binann {

namespace {

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Per-bit set counts for the given descriptor indices.
std::vector<std::size_t> count_set_bits(const LabeledDataset& dataset,
                                        const std::vector<std::size_t>& rows) {
    std::vector<std::size_t> ones(dataset.dim(), 0);
    for (std::size_t row : rows) {
        const BitView d = dataset.descriptor(row);
        for (std::uint32_t j = 0; j < dataset.dim(); ++j) {
            ones[j] += (d.words[j >> 6] >> (j & 63)) & 1;
        }
    }
    return ones;
}

std::map<PointLabel, std::vector<std::size_t>> group_by_label(const LabeledDataset& dataset) {
    std::map<PointLabel, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        groups[dataset.label(i)].push_back(i);
    }
    return groups;
}

}  // namespace

std::vector<double> shannon_entropy(const LabeledDataset& dataset) {
    if (dataset.empty()) throw std::invalid_argument("shannon_entropy: empty dataset");
    std::vector<std::size_t> rows(dataset.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    const auto ones = count_set_bits(dataset, rows);
    std::vector<double> h(dataset.dim());
    for (std::uint32_t j = 0; j < dataset.dim(); ++j) {
        h[j] = binary_entropy(static_cast<double>(ones[j]) / static_cast<double>(dataset.size()));
    }
    return h;
}

std::vector<double> conditional_entropy(const LabeledDataset& dataset) {
    if (dataset.empty()) throw std::invalid_argument("conditional_entropy: empty dataset");
    std::vector<double> h(dataset.dim(), 0.0);
    for (const auto& [label, rows] : group_by_label(dataset)) {
        const auto ones = count_set_bits(dataset, rows);
        const double weight = static_cast<double>(rows.size()) / static_cast<double>(dataset.size());
        for (std::uint32_t j = 0; j < dataset.dim(); ++j) {
            h[j] += weight * binary_entropy(static_cast<double>(ones[j]) /
                                            static_cast<double>(rows.size()));
        }
    }
    return h;
}

std::vector<double> empirical_stability(const LabeledDataset& dataset) {
    if (dataset.empty()) throw std::invalid_argument("empirical_stability: empty dataset");
    std::vector<double> s(dataset.dim(), 0.0);
    for (const auto& [label, rows] : group_by_label(dataset)) {
        const auto ones = count_set_bits(dataset, rows);
        const double weight = static_cast<double>(rows.size()) / static_cast<double>(dataset.size());
        for (std::uint32_t j = 0; j < dataset.dim(); ++j) {
            const std::size_t majority = std::max(ones[j], rows.size() - ones[j]);
            s[j] += weight * static_cast<double>(majority) / static_cast<double>(rows.size());
        }
    }
    return s;
}

BitStatistics compute_bit_statistics(const LabeledDataset& dataset) {
    return {shannon_entropy(dataset), conditional_entropy(dataset), empirical_stability(dataset)};
}

std::vector<double> weights_from_metric(const std::vector<double>& values, double sharpening) {
    if (sharpening < 0.0) throw std::invalid_argument("weights_from_metric: negative sharpening");
    constexpr double kEpsilon = 1e-9;
    std::vector<double> w(values.size());
    double total = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!std::isfinite(values[j]) || values[j] < 0.0) {
            throw std::invalid_argument("weights_from_metric: values must be finite and >= 0");
        }
        w[j] = std::pow(values[j] + kEpsilon, sharpening);
        total += w[j];
    }
    if (total <= 0.0) {
        throw std::invalid_argument("weights_from_metric: all weights vanished");
    }
    for (double& v : w) v /= total;
    return w;
}

std::vector<double> stability_weights(const std::vector<double>& stability, double sharpening) {
    std::vector<double> shifted(stability.size());
    for (std::size_t j = 0; j < stability.size(); ++j) {
        shifted[j] = std::max(stability[j] - 0.5, 0.0);
    }
    return weights_from_metric(shifted, sharpening);
}

}  // namespace binann
