#include "msdrec/index.hpp"

#include <algorithm>
#include <numeric>

namespace msdrec {

bool InteractionIndex::has_listened(UserIndex u, TrackIndex t) const {
    const auto row = tracks_of(u);
    return std::binary_search(row.begin(), row.end(), t);
}

std::vector<std::uint32_t> InteractionIndex::df_table() const {
    std::vector<std::uint32_t> out(n_tracks_);
    for (TrackIndex t = 0; t < n_tracks_; ++t)
        out[t] = df(t);
    return out;
}

InteractionIndex build_index(const TripletBatch& batch) {
    if (batch.users.size() > kMaxVocabularySize || batch.tracks.size() > kMaxVocabularySize)
        throw CapacityOverflow("index dimensions exceed 32-bit range");

    InteractionIndex idx;
    idx.n_users_ = static_cast<std::uint32_t>(batch.users.size());
    idx.n_tracks_ = static_cast<std::uint32_t>(batch.tracks.size());
    const std::size_t nnz = batch.triplets.size();

    for (const auto& t : batch.triplets) {
        if (t.user >= idx.n_users_ || t.track >= idx.n_tracks_)
            throw Error("triplet index outside vocabulary bounds");
    }

    // Forward rows via counting sort on user, then sort each row by track.
    idx.forward_offsets_.assign(idx.n_users_ + 1, 0);
    for (const auto& t : batch.triplets)
        ++idx.forward_offsets_[t.user + 1];
    std::partial_sum(idx.forward_offsets_.begin(), idx.forward_offsets_.end(), idx.forward_offsets_.begin());

    std::vector<std::pair<TrackIndex, PlayCount>> rows(nnz);
    {
        std::vector<std::uint64_t> cursor(idx.forward_offsets_.begin(), idx.forward_offsets_.end() - 1);
        for (const auto& t : batch.triplets)
            rows[cursor[t.user]++] = {t.track, t.play_count};
    }
    idx.forward_tracks_.resize(nnz);
    idx.forward_counts_.resize(nnz);
    idx.total_plays_.assign(idx.n_users_, 0);
    for (UserIndex u = 0; u < idx.n_users_; ++u) {
        auto first = rows.begin() + static_cast<std::ptrdiff_t>(idx.forward_offsets_[u]);
        auto last = rows.begin() + static_cast<std::ptrdiff_t>(idx.forward_offsets_[u + 1]);
        std::sort(first, last);
        for (auto it = first; it != last; ++it) {
            const auto pos = static_cast<std::size_t>(it - rows.begin());
            if (it != first && it->first == (it - 1)->first)
                throw Error("batch contains a duplicate (user, track) pair");
            idx.forward_tracks_[pos] = it->first;
            idx.forward_counts_[pos] = it->second;
            idx.total_plays_[u] += it->second;
        }
    }

    // Inverted rows: scanning users in ascending order keeps posting lists sorted.
    idx.inverted_offsets_.assign(idx.n_tracks_ + 1, 0);
    for (TrackIndex t : idx.forward_tracks_)
        ++idx.inverted_offsets_[t + 1];
    std::partial_sum(idx.inverted_offsets_.begin(), idx.inverted_offsets_.end(), idx.inverted_offsets_.begin());
    idx.inverted_users_.resize(nnz);
    std::vector<std::uint64_t> cursor(idx.inverted_offsets_.begin(), idx.inverted_offsets_.end() - 1);
    for (UserIndex u = 0; u < idx.n_users_; ++u) {
        for (TrackIndex t : idx.tracks_of(u))
            idx.inverted_users_[cursor[t]++] = u;
    }
    return idx;
}

} // namespace msdrec
