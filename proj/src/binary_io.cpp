#include "binary_io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include <zlib.h>

namespace msdrec::detail {
namespace {

constexpr std::size_t kHeaderSize = 8 + 4;
constexpr std::size_t kTrailerSize = 4;

std::uint32_t crc32_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks.
    constexpr std::size_t kChunk = 1u << 30;
    for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
        const auto len = static_cast<uInt>(std::min(kChunk, bytes.size() - off));
        crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off), len);
    }
    return static_cast<std::uint32_t>(crc);
}

std::uint32_t decode_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
        v = (v << 8) | static_cast<unsigned char>(p[i]);
    return v;
}

} // namespace

ByteWriter::ByteWriter(const Magic& magic, std::uint32_t version) {
    buf_.append(magic.data(), magic.size());
    u32(version);
}

void ByteWriter::u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void ByteWriter::u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::str(std::string_view s) {
    if (s.size() > std::numeric_limits<std::uint32_t>::max())
        throw CapacityOverflow("string too long for dataset encoding");
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
}

void ByteWriter::vocabulary(const Vocabulary& vocab) {
    u64(vocab.size());
    for (const auto& s : vocab.externals())
        str(s);
}

void ByteWriter::commit(const std::filesystem::path& path) {
    u32(crc32_of(buf_));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    out.flush();
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

ByteReader::ByteReader(const std::filesystem::path& path, const Magic& magic, std::uint32_t version,
                       std::string_view what)
    : what_(std::string(what) + " '" + path.string() + "'") {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    buf_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failed for '" + path.string() + "'");

    const std::size_t probe = std::min(buf_.size(), magic.size());
    if (buf_.empty())
        throw ChecksumMismatch(what_ + ": empty file");
    if (std::memcmp(buf_.data(), magic.data(), probe) != 0)
        throw FormatError(what_ + ": bad magic");
    if (buf_.size() < kHeaderSize + kTrailerSize)
        throw ChecksumMismatch(what_ + ": truncated");
    const std::uint32_t found = decode_u32(buf_.data() + magic.size());
    if (found != version)
        throw FormatVersionMismatch(found, version);
    end_ = buf_.size() - kTrailerSize;
    const std::uint32_t stored = decode_u32(buf_.data() + end_);
    if (stored != crc32_of(std::string_view(buf_.data(), end_)))
        throw ChecksumMismatch(what_ + ": checksum mismatch");
    pos_ = kHeaderSize;
}

void ByteReader::require(std::uint64_t n) const {
    if (n > end_ - pos_)
        throw FormatError(what_ + ": payload shorter than declared");
}

std::uint8_t ByteReader::u8() {
    require(1);
    return static_cast<std::uint8_t>(buf_[pos_++]);
}

std::uint32_t ByteReader::u32() {
    require(4);
    const auto v = decode_u32(buf_.data() + pos_);
    pos_ += 4;
    return v;
}

std::uint64_t ByteReader::u64() {
    const std::uint64_t lo = u32();
    const std::uint64_t hi = u32();
    return lo | (hi << 32);
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::string ByteReader::str() {
    const std::uint32_t n = u32();
    require(n);
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
}

Vocabulary ByteReader::vocabulary() {
    const std::uint64_t n = u64();
    require(n * 4);
    Vocabulary vocab;
    vocab.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (vocab.intern(str()) != i)
            throw FormatError(what_ + ": duplicate vocabulary entry");
    }
    return vocab;
}

void ByteReader::finish() const {
    if (pos_ != end_)
        throw FormatError(what_ + ": trailing bytes after payload");
}

bool has_magic(const std::filesystem::path& path, const Magic& magic) {
    std::ifstream in(path, std::ios::binary);
    Magic head{};
    if (!in.read(head.data(), head.size()))
        return false;
    return head == magic;
}

} // namespace msdrec::detail
