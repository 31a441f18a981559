#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace binann {

using DescriptorId = std::uint32_t;
using PointLabel = std::uint32_t;

/// Non-owning view of a packed bit vector. Bit i lives in word i/64 at
/// position i%64, which matches the on-disk byte layout (bit i = bit
/// (i mod 8) of byte (i div 8)) when words are stored little-endian.
struct BitView {
    const std::uint64_t* words = nullptr;
    std::uint32_t dim = 0;
};

constexpr std::size_t words_for_bits(std::uint32_t dim) {
    return (static_cast<std::size_t>(dim) + 63) / 64;
}

/// Fixed-width binary descriptor, packed into 64-bit words.
/// Bits at positions >= dim are kept zero (canonical padding).
class BinaryDescriptor {
public:
    BinaryDescriptor() = default;

    explicit BinaryDescriptor(std::uint32_t dim)
        : dim_(dim), words_(words_for_bits(dim), 0) {}

    /// Takes ownership of raw words; padding bits are cleared.
    BinaryDescriptor(std::uint32_t dim, std::vector<std::uint64_t> words)
        : dim_(dim), words_(std::move(words)) {
        if (words_.size() != words_for_bits(dim_)) {
            throw std::invalid_argument("BinaryDescriptor: word count does not match dim");
        }
        clear_padding();
    }

    static BinaryDescriptor zeros(std::uint32_t dim) { return BinaryDescriptor(dim); }

    static BinaryDescriptor ones(std::uint32_t dim) {
        BinaryDescriptor d(dim);
        for (auto& w : d.words_) w = ~std::uint64_t{0};
        d.clear_padding();
        return d;
    }

    std::uint32_t dim() const { return dim_; }
    const std::uint64_t* words() const { return words_.data(); }
    std::size_t word_count() const { return words_.size(); }

    void set_bit(std::uint32_t pos, bool value = true) {
        check_pos(pos);
        const std::uint64_t mask = std::uint64_t{1} << (pos & 63);
        if (value) {
            words_[pos >> 6] |= mask;
        } else {
            words_[pos >> 6] &= ~mask;
        }
    }

    bool bit(std::uint32_t pos) const {
        check_pos(pos);
        return (words_[pos >> 6] >> (pos & 63)) & 1;
    }

    operator BitView() const { return BitView{words_.data(), dim_}; }
    BitView view() const { return BitView{words_.data(), dim_}; }

    friend bool operator==(const BinaryDescriptor& a, const BinaryDescriptor& b) {
        return a.dim_ == b.dim_ && a.words_ == b.words_;
    }
    friend bool operator!=(const BinaryDescriptor& a, const BinaryDescriptor& b) {
        return !(a == b);
    }

private:
    void check_pos(std::uint32_t pos) const {
        if (pos >= dim_) throw std::out_of_range("bit position out of range");
    }

    void clear_padding() {
        if (dim_ % 64 != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << (dim_ % 64)) - 1;
        }
    }

    std::uint32_t dim_ = 0;
    std::vector<std::uint64_t> words_;
};

namespace stats {
inline thread_local std::uint64_t hamming_call_count = 0;

/// Count of hamming() invocations on this thread. Lets tests pin down how
/// many distance computations a code path performs.
inline std::uint64_t hamming_calls() { return hamming_call_count; }
inline void reset_hamming_calls() { hamming_call_count = 0; }
}  // namespace stats

/// Number of differing bit positions between two equal-dim descriptors.
inline std::uint32_t hamming(BitView a, BitView b) {
    if (a.dim != b.dim) {
        throw std::invalid_argument("hamming: dimension mismatch");
    }
    ++stats::hamming_call_count;
    std::uint32_t sum = 0;
    const std::size_t n = words_for_bits(a.dim);
    for (std::size_t i = 0; i < n; ++i) {
        sum += static_cast<std::uint32_t>(__builtin_popcountll(a.words[i] ^ b.words[i]));
    }
    return sum;
}

/// True iff bit `pos` of `d` is set. Single mask-AND on the containing word.
inline bool test_bit(BitView d, std::uint32_t pos) {
    if (pos >= d.dim) {
        throw std::out_of_range("test_bit: position out of range");
    }
    return (d.words[pos >> 6] & (std::uint64_t{1} << (pos & 63))) != 0;
}

}  // namespace binann
