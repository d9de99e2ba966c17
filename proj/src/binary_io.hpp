// Little-endian fixed-width encoding shared by the dataset and index files.
//
// File layout: 8 magic bytes, u32 format version, payload, u32 crc32 of
// everything that precedes it.
#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msdrec/core.hpp"
#include "msdrec/ingest.hpp"

namespace msdrec::detail {

using Magic = std::array<char, 8>;

class ByteWriter {
public:
    ByteWriter(const Magic& magic, std::uint32_t version);

    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void f64(double v);
    void str(std::string_view s);
    void vocabulary(const Vocabulary& vocab);

    template <class T>
    void array(std::span<const T> values) {
        u64(values.size());
        for (const T& v : values) {
            if constexpr (sizeof(T) == 8 && std::is_floating_point_v<T>)
                f64(v);
            else if constexpr (sizeof(T) == 8)
                u64(v);
            else
                u32(v);
        }
    }

    /// Appends the checksum and writes the buffer to disk.
    void commit(const std::filesystem::path& path);

private:
    std::string buf_;
};

class ByteReader {
public:
    /// Reads the whole file and validates magic, version and checksum.
    ByteReader(const std::filesystem::path& path, const Magic& magic, std::uint32_t version, std::string_view what);

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    double f64();
    std::string str();
    Vocabulary vocabulary();

    template <class T>
    std::vector<T> array() {
        const std::uint64_t n = u64();
        require(n * (sizeof(T) == 8 ? 8 : 4));
        std::vector<T> out;
        out.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            if constexpr (sizeof(T) == 8 && std::is_floating_point_v<T>)
                out.push_back(f64());
            else if constexpr (sizeof(T) == 8)
                out.push_back(u64());
            else
                out.push_back(static_cast<T>(u32()));
        }
        return out;
    }

    /// Throws unless the payload has been consumed exactly.
    void finish() const;

private:
    void require(std::uint64_t n) const;

    std::string buf_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;
    std::string what_;
};

bool has_magic(const std::filesystem::path& path, const Magic& magic);

} // namespace msdrec::detail
