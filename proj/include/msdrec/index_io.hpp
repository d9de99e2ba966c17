#pragma once

#include <filesystem>
#include <optional>

#include "msdrec/core.hpp"
#include "msdrec/idf.hpp"
#include "msdrec/index.hpp"

namespace msdrec {

/// Everything the `recommend` stage needs from disk: external ids for both
/// axes, the interaction index and, optionally, a precomputed idf table.
struct IndexBundle {
    Vocabulary users;
    Vocabulary tracks;
    InteractionIndex index;
    std::optional<IdfTable> idf;

    friend bool operator==(const IndexBundle&, const IndexBundle&) = default;
};

inline constexpr std::uint32_t kIndexFormatVersion = 1;

IndexBundle make_bundle(TripletBatch batch, std::optional<double> idf_log_base);

void save_index(const IndexBundle& bundle, const std::filesystem::path& path);
IndexBundle load_index(const std::filesystem::path& path);

bool is_index_file(const std::filesystem::path& path);

namespace detail {
class ByteWriter;
class ByteReader;
} // namespace detail

/// Serialization access to InteractionIndex internals.
class IndexCodec {
public:
    static void encode(const InteractionIndex& index, detail::ByteWriter& writer);
    static InteractionIndex decode(detail::ByteReader& reader);
};

} // namespace msdrec
