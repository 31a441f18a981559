#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace binann::io {

/// Raised on malformed or truncated files (bad magic, short reads,
/// inconsistent headers).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void write_bytes(std::ostream& out, const void* data, std::size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out) throw FormatError("write failed");
}

inline void read_bytes(std::istream& in, void* data, std::size_t n) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw FormatError("unexpected end of file");
    }
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
    std::array<unsigned char, 4> b;
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    write_bytes(out, b.data(), b.size());
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    write_bytes(out, b.data(), b.size());
}

inline std::uint32_t read_u32(std::istream& in) {
    std::array<unsigned char, 4> b;
    read_bytes(in, b.data(), b.size());
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream& in) {
    std::array<unsigned char, 8> b;
    read_bytes(in, b.data(), b.size());
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline void write_magic(std::ostream& out, const char (&magic)[5]) {
    write_bytes(out, magic, 4);
}

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
    char got[4];
    read_bytes(in, got, 4);
    if (std::memcmp(got, magic, 4) != 0) {
        throw FormatError(std::string("bad magic, expected ") + magic);
    }
}

}  // namespace binann::io
