#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "msdrec/core.hpp"
#include "msdrec/idf.hpp"
#include "msdrec/index.hpp"
#include "msdrec/similarity.hpp"

namespace msdrec {

struct ScoredTrack {
    TrackIndex track;
    double score;

    friend bool operator==(const ScoredTrack&, const ScoredTrack&) = default;
};

/// One position of a ranked list: a real track index, or a padding marker
/// whose `id` is the 1-based dummy number.
struct Slot {
    std::uint32_t id;
    bool padding = false;

    static constexpr Slot track(TrackIndex t) { return {t, false}; }
    static constexpr Slot dummy(std::uint32_t n) { return {n, true}; }

    friend bool operator==(const Slot&, const Slot&) = default;
};

struct Recommendation {
    UserIndex user = 0;
    /// Exactly k entries; real tracks first, padding after.
    std::vector<Slot> items;
    /// Scores of the scored real items, parallel to the front of `items`.
    std::vector<double> scores;
    /// Popularity padding ran out of tracks and fell back to dummies.
    bool padding_exhausted = false;

    friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

class ScoreScratch {
public:
    explicit ScoreScratch(std::uint32_t n_tracks = 0)
        : score_(n_tracks, 0.0), touched_flag_(n_tracks, 0), excluded_(n_tracks, 0) {}

private:
    friend std::vector<ScoredTrack> score_tracks(const InteractionIndex&, const NeighborSet&, UserIndex, bool,
                                                 ScoreScratch&);
    std::vector<double> score_;
    std::vector<std::uint8_t> touched_flag_;
    std::vector<std::uint8_t> excluded_;
    std::vector<TrackIndex> touched_;
};

/// score[i] = sum over neighbors v who listened to i of w_uv / c_v.
/// Neighbors are visited in NeighborSet order and each neighbor's tracks in
/// ascending order. Returns positive-score tracks sorted by track index.
std::vector<ScoredTrack> score_tracks(const InteractionIndex& index, const NeighborSet& neighbors, UserIndex u,
                                      bool exclude_seen, ScoreScratch& scratch);

std::vector<ScoredTrack> score_tracks(const InteractionIndex& index, const NeighborSet& neighbors, UserIndex u,
                                      bool exclude_seen);

/// Document frequencies plus the tracks ordered by (df descending, index
/// ascending); the tie-break prior and the popularity padding source.
class PopularityPrior {
public:
    PopularityPrior() = default;
    explicit PopularityPrior(const InteractionIndex& index);

    [[nodiscard]] std::uint32_t df(TrackIndex t) const { return df_[t]; }
    [[nodiscard]] std::span<const TrackIndex> order() const { return order_; }

private:
    std::vector<std::uint32_t> df_;
    std::vector<TrackIndex> order_;
};

/// Ranks by score descending, then df descending, then track index ascending;
/// truncates to k and pads. Popularity padding skips tracks already ranked,
/// tracks in `excluded` (sorted) and tracks nobody listened to; when it runs
/// out, the rest is dummy padding and `padding_exhausted` is set.
Recommendation rank_and_pad(UserIndex user, std::vector<ScoredTrack> scores, std::uint32_t k, PadStrategy pad,
                            const PopularityPrior& prior, std::span<const TrackIndex> excluded = {});

/// Full per-user pipeline over shared read-only structures.
class Recommender {
public:
    struct Workspace {
        CandidateScratch candidates;
        ScoreScratch scores;
    };

    Recommender(const InteractionIndex& index, const IdfTable& idf, const Config& config);

    [[nodiscard]] Workspace make_workspace() const;
    [[nodiscard]] Recommendation recommend(UserIndex u, Workspace& ws) const;
    [[nodiscard]] Recommendation recommend(UserIndex u) const;

    [[nodiscard]] NeighborSet neighbors(UserIndex u, Workspace& ws) const;

    [[nodiscard]] const Config& config() const noexcept { return config_; }

private:
    const InteractionIndex* index_;
    const IdfTable* idf_;
    Config config_;
    PopularityPrior prior_;
};

/// Recommends for every user in input order, calling `sink` once per user in
/// that order. Work is spread over `workers` threads; the emitted sequence
/// does not depend on the worker count. Errors name the offending user.
void recommend_all(const InteractionIndex& index, const IdfTable& idf, std::span<const UserIndex> users,
                   const Config& config, unsigned workers, const std::function<void(const Recommendation&)>& sink);

std::vector<Recommendation> recommend_all(const InteractionIndex& index, const IdfTable& idf,
                                          std::span<const UserIndex> users, const Config& config,
                                          unsigned workers = 1);

/// Prefix for dummy ids: empty unless some real track id is one of the
/// decimal literals "1".."k", in which case "pad:".
std::string dummy_prefix(const Vocabulary& tracks, std::uint32_t k);

/// Writes `<user> <item_1> ... <item_k>\n` using external ids.
void write_recommendation(std::ostream& out, const Recommendation& rec, const Vocabulary& users,
                          const Vocabulary& tracks, const std::string& pad_prefix);

} // namespace msdrec
