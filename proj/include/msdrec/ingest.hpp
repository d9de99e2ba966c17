#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "msdrec/core.hpp"

namespace msdrec {

struct IndexedTriplet {
    UserIndex user;
    TrackIndex track;
    PlayCount play_count;

    friend bool operator==(const IndexedTriplet&, const IndexedTriplet&) = default;
};

/// Parsed listening history: interned triplets plus both vocabularies.
struct TripletBatch {
    std::vector<IndexedTriplet> triplets;
    Vocabulary users;
    Vocabulary tracks;

    [[nodiscard]] std::size_t size() const noexcept { return triplets.size(); }

    friend bool operator==(const TripletBatch&, const TripletBatch&) = default;
};

/// A text line that is not `<user><sep><track><sep><count>` with count >= 1.
class MalformedLine : public Error {
public:
    MalformedLine(std::uint64_t line_no, const std::string& what);
    std::uint64_t line_no;
};

class DuplicatePair : public Error {
public:
    explicit DuplicatePair(std::uint64_t line_no);
    std::uint64_t line_no;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class FormatVersionMismatch : public FormatError {
public:
    FormatVersionMismatch(std::uint32_t found, std::uint32_t expected);
};

class ChecksumMismatch : public FormatError {
public:
    using FormatError::FormatError;
};

/// Parses `user<delim>track<delim>count` lines in one pass. Blank lines are
/// skipped; a trailing '\r' is tolerated. Line numbers in errors are 1-based.
TripletBatch parse_triplets(std::istream& in, char delimiter = '\t');

/// Opens and parses a text triplet file.
TripletBatch parse_triplet_file(const std::filesystem::path& path, char delimiter = '\t');

/// Writes triplets in the text format, one `user\ttrack\tcount\n` per line.
void write_triplets(std::ostream& out, const TripletBatch& batch);

inline constexpr std::uint32_t kDatasetFormatVersion = 1;

void save_dataset(const TripletBatch& batch, const std::filesystem::path& path);
TripletBatch load_dataset(const std::filesystem::path& path);

/// True if the file starts with the binary dataset magic.
bool is_dataset_file(const std::filesystem::path& path);

} // namespace msdrec
