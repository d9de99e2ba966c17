#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "msdrec/core.hpp"
#include "msdrec/ingest.hpp"

namespace msdrec {

/// Sparse user-track interaction matrix kept in both orientations.
///
/// The forward side lists, per user, the tracks listened to (ascending track
/// index) with their play counts. The inverted side lists, per track, the
/// users who listened (ascending user index). Both are offset arrays over
/// contiguous storage. Immutable once built.
class InteractionIndex {
public:
    InteractionIndex() : forward_offsets_{0}, inverted_offsets_{0} {}

    [[nodiscard]] std::uint32_t n_users() const noexcept { return n_users_; }
    [[nodiscard]] std::uint32_t n_tracks() const noexcept { return n_tracks_; }
    [[nodiscard]] std::uint64_t n_interactions() const noexcept { return forward_tracks_.size(); }

    [[nodiscard]] std::span<const TrackIndex> tracks_of(UserIndex u) const {
        return {forward_tracks_.data() + forward_offsets_[u], forward_tracks_.data() + forward_offsets_[u + 1]};
    }
    [[nodiscard]] std::span<const PlayCount> counts_of(UserIndex u) const {
        return {forward_counts_.data() + forward_offsets_[u], forward_counts_.data() + forward_offsets_[u + 1]};
    }
    /// Posting list of a track.
    [[nodiscard]] std::span<const UserIndex> listeners_of(TrackIndex t) const {
        return {inverted_users_.data() + inverted_offsets_[t], inverted_users_.data() + inverted_offsets_[t + 1]};
    }

    [[nodiscard]] std::uint32_t df(TrackIndex t) const {
        return static_cast<std::uint32_t>(inverted_offsets_[t + 1] - inverted_offsets_[t]);
    }
    /// c_v: the user's summed play count.
    [[nodiscard]] std::uint64_t total_plays(UserIndex u) const { return total_plays_[u]; }

    [[nodiscard]] bool has_listened(UserIndex u, TrackIndex t) const;

    [[nodiscard]] std::vector<std::uint32_t> df_table() const;

    friend bool operator==(const InteractionIndex&, const InteractionIndex&) = default;

    friend InteractionIndex build_index(const TripletBatch& batch);
    friend class IndexCodec;

private:
    std::uint32_t n_users_ = 0;
    std::uint32_t n_tracks_ = 0;
    std::vector<std::uint64_t> forward_offsets_;
    std::vector<TrackIndex> forward_tracks_;
    std::vector<PlayCount> forward_counts_;
    std::vector<std::uint64_t> inverted_offsets_;
    std::vector<UserIndex> inverted_users_;
    std::vector<std::uint64_t> total_plays_;
};

/// Builds both adjacency directions. User and track counts come from the
/// batch vocabularies, so tracks or users without triplets get empty rows.
/// Throws CapacityOverflow if a count exceeds the 32-bit index range.
InteractionIndex build_index(const TripletBatch& batch);

} // namespace msdrec
