#include "msdrec/index_io.hpp"

#include <algorithm>

#include "binary_io.hpp"

namespace msdrec {
namespace {

constexpr detail::Magic kIndexMagic{'M', 'S', 'D', 'R', 'I', 'N', 'D', 'X'};

bool valid_offsets(const std::vector<std::uint64_t>& offsets, std::size_t rows, std::size_t nnz) {
    return offsets.size() == rows + 1 && offsets.front() == 0 && offsets.back() == nnz &&
           std::is_sorted(offsets.begin(), offsets.end());
}

} // namespace

void IndexCodec::encode(const InteractionIndex& index, detail::ByteWriter& w) {
    w.u32(index.n_users_);
    w.u32(index.n_tracks_);
    w.array(std::span<const std::uint64_t>(index.forward_offsets_));
    w.array(std::span<const TrackIndex>(index.forward_tracks_));
    w.array(std::span<const PlayCount>(index.forward_counts_));
    w.array(std::span<const std::uint64_t>(index.inverted_offsets_));
    w.array(std::span<const UserIndex>(index.inverted_users_));
}

InteractionIndex IndexCodec::decode(detail::ByteReader& r) {
    InteractionIndex idx;
    idx.n_users_ = r.u32();
    idx.n_tracks_ = r.u32();
    idx.forward_offsets_ = r.array<std::uint64_t>();
    idx.forward_tracks_ = r.array<TrackIndex>();
    idx.forward_counts_ = r.array<PlayCount>();
    idx.inverted_offsets_ = r.array<std::uint64_t>();
    idx.inverted_users_ = r.array<UserIndex>();

    const std::size_t nnz = idx.forward_tracks_.size();
    if (idx.forward_counts_.size() != nnz || idx.inverted_users_.size() != nnz ||
        !valid_offsets(idx.forward_offsets_, idx.n_users_, nnz) ||
        !valid_offsets(idx.inverted_offsets_, idx.n_tracks_, nnz))
        throw FormatError("index: inconsistent adjacency arrays");
    if (std::any_of(idx.forward_tracks_.begin(), idx.forward_tracks_.end(),
                    [&](TrackIndex t) { return t >= idx.n_tracks_; }) ||
        std::any_of(idx.inverted_users_.begin(), idx.inverted_users_.end(),
                    [&](UserIndex u) { return u >= idx.n_users_; }))
        throw FormatError("index: adjacency entry out of range");

    idx.total_plays_.assign(idx.n_users_, 0);
    for (UserIndex u = 0; u < idx.n_users_; ++u) {
        for (PlayCount c : idx.counts_of(u))
            idx.total_plays_[u] += c;
    }
    return idx;
}

IndexBundle make_bundle(TripletBatch batch, std::optional<double> idf_log_base) {
    IndexBundle bundle;
    bundle.index = build_index(batch);
    bundle.users = std::move(batch.users);
    bundle.tracks = std::move(batch.tracks);
    if (idf_log_base)
        bundle.idf = compute_idf(bundle.index, *idf_log_base);
    return bundle;
}

void save_index(const IndexBundle& bundle, const std::filesystem::path& path) {
    detail::ByteWriter w(kIndexMagic, kIndexFormatVersion);
    w.vocabulary(bundle.users);
    w.vocabulary(bundle.tracks);
    IndexCodec::encode(bundle.index, w);
    w.u8(bundle.idf ? 1 : 0);
    if (bundle.idf) {
        w.u32(bundle.idf->n_users);
        w.f64(bundle.idf->log_base);
        w.array(std::span<const double>(bundle.idf->values));
    }
    w.commit(path);
}

IndexBundle load_index(const std::filesystem::path& path) {
    detail::ByteReader r(path, kIndexMagic, kIndexFormatVersion, "index");
    IndexBundle bundle;
    bundle.users = r.vocabulary();
    bundle.tracks = r.vocabulary();
    bundle.index = IndexCodec::decode(r);
    if (r.u8() != 0) {
        IdfTable idf;
        idf.n_users = r.u32();
        idf.log_base = r.f64();
        idf.values = r.array<double>();
        if (idf.values.size() != bundle.index.n_tracks() || idf.n_users != bundle.index.n_users())
            throw FormatError("index '" + path.string() + "': idf section does not match index");
        bundle.idf = std::move(idf);
    }
    r.finish();
    if (bundle.users.size() != bundle.index.n_users() || bundle.tracks.size() != bundle.index.n_tracks())
        throw FormatError("index '" + path.string() + "': vocabulary sizes do not match index");
    return bundle;
}

bool is_index_file(const std::filesystem::path& path) { return detail::has_magic(path, kIndexMagic); }

} // namespace msdrec
