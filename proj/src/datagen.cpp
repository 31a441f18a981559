#include "binann/datagen.hpp"

#include <fstream>
#include <stdexcept>
#include <vector>

#include "binann/binary_io.hpp"
#include "binann/rng.hpp"

namespace binann {

namespace {

constexpr char kMagic[5] = "BDSC";
constexpr std::uint32_t kVersion = 1;

BinaryDescriptor random_descriptor(std::uint32_t dim, Rng& rng) {
    BinaryDescriptor d = BinaryDescriptor::zeros(dim);
    for (std::uint32_t i = 0; i < dim; ++i) {
        if (rng.bernoulli(0.5)) d.set_bit(i, true);
    }
    return d;
}

}  // namespace

LabeledDataset generate(const SynthParams& params) {
    if (params.dim == 0) throw std::invalid_argument("dim must be positive");
    if (params.num_points == 0) throw std::invalid_argument("num_points must be positive");
    if (params.per_point_min == 0 || params.per_point_min > params.per_point_max)
        throw std::invalid_argument("per-point descriptor range is empty");
    if (!(params.flip_prob >= 0.0 && params.flip_prob < 0.5))
        throw std::invalid_argument("flip_prob must lie in [0, 0.5)");

    LabeledDataset dataset(params.dim);
    for (std::uint32_t point = 0; point < params.num_points; ++point) {
        // One stream per label: inserting or dropping a point never
        // perturbs the descriptors generated for the others.
        Rng rng(derive_seed(params.rng_seed, point));
        const BinaryDescriptor center = random_descriptor(params.dim, rng);

        const std::uint32_t span = params.per_point_max - params.per_point_min + 1;
        const std::uint32_t copies =
            params.per_point_min + static_cast<std::uint32_t>(rng.uniform(span));
        for (std::uint32_t c = 0; c < copies; ++c) {
            BinaryDescriptor d = center;
            for (std::uint32_t i = 0; i < params.dim; ++i) {
                if (rng.bernoulli(params.flip_prob)) d.set_bit(i, !d.bit(i));
            }
            dataset.add(d, point);
        }
    }
    return dataset;
}

void save_descriptors(const LabeledDataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io::FormatError("cannot open file for writing: " + path);

    io::write_magic(out, kMagic);
    io::write_u32(out, kVersion);
    io::write_u32(out, dataset.dim());
    io::write_u64(out, dataset.size());

    const std::uint32_t bytes_per_desc = (dataset.dim() + 7) / 8;
    std::vector<char> buf(bytes_per_desc);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const BitView view = dataset.descriptor(i);
        std::fill(buf.begin(), buf.end(), 0);
        for (std::uint32_t bit = 0; bit < dataset.dim(); ++bit) {
            if (test_bit(view, bit)) buf[bit / 8] |= static_cast<char>(1u << (bit % 8));
        }
        io::write_bytes(out, buf.data(), buf.size());
        io::write_u32(out, dataset.label(i));
    }
    if (!out) throw io::FormatError("write failed: " + path);
}

LabeledDataset load_descriptors(const std::string& path, std::uint32_t expected_dim) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io::FormatError("cannot open file: " + path);

    io::expect_magic(in, kMagic);
    const std::uint32_t version = io::read_u32(in);
    if (version != kVersion)
        throw io::FormatError("unsupported descriptor file version " + std::to_string(version));
    const std::uint32_t dim = io::read_u32(in);
    if (dim == 0) throw io::FormatError("descriptor file declares dim 0");
    if (expected_dim != 0 && dim != expected_dim)
        throw io::FormatError("descriptor file dim " + std::to_string(dim) +
                              " does not match expected " + std::to_string(expected_dim));
    const std::uint64_t count = io::read_u64(in);

    LabeledDataset dataset(dim);
    const std::uint32_t bytes_per_desc = (dim + 7) / 8;
    std::vector<char> buf(bytes_per_desc);
    BinaryDescriptor d = BinaryDescriptor::zeros(dim);
    for (std::uint64_t i = 0; i < count; ++i) {
        io::read_bytes(in, buf.data(), buf.size());
        for (std::uint32_t bit = 0; bit < dim; ++bit) {
            d.set_bit(bit, (static_cast<unsigned char>(buf[bit / 8]) >> (bit % 8)) & 1u);
        }
        const std::uint32_t label = io::read_u32(in);
        dataset.add(d, label);
    }
    return dataset;
}

}  // namespace binann
