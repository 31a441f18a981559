#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "binann/descriptor.hpp"

namespace binann {

/// Descriptors plus their ground-truth 3D-point labels, stored contiguously.
/// Descriptor i occupies words [i*words_per_descriptor, (i+1)*words_per_descriptor).
/// Immutable once filled; safe for concurrent reads.
class LabeledDataset {
public:
    explicit LabeledDataset(std::uint32_t dim) : dim_(dim), words_per_(words_for_bits(dim)) {}

    void add(BitView d, PointLabel label) {
        if (d.dim != dim_) {
            throw std::invalid_argument("LabeledDataset::add: dimension mismatch");
        }
        bits_.insert(bits_.end(), d.words, d.words + words_per_);
        labels_.push_back(label);
    }

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    std::uint32_t dim() const { return dim_; }

    BitView descriptor(std::size_t i) const {
        return BitView{bits_.data() + i * words_per_, dim_};
    }

    PointLabel label(std::size_t i) const { return labels_[i]; }
    const std::vector<PointLabel>& labels() const { return labels_; }

    friend bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
        return a.dim_ == b.dim_ && a.bits_ == b.bits_ && a.labels_ == b.labels_;
    }
    friend bool operator!=(const LabeledDataset& a, const LabeledDataset& b) {
        return !(a == b);
    }

private:
    std::uint32_t dim_;
    std::size_t words_per_;
    std::vector<std::uint64_t> bits_;
    std::vector<PointLabel> labels_;
};

}  // namespace binann
