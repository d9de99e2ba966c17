#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "msdrec/core.hpp"
#include "msdrec/ingest.hpp"
#include "msdrec/recommend.hpp"

namespace msdrec {

/// Sorted, duplicate-free track indexes.
using TrackSet = std::vector<TrackIndex>;

/// Hits among the first k slots, divided by k. Padding never hits; slots
/// beyond the end of a short ranking count as misses.
double precision_at_k(std::span<const Slot> ranking, std::span<const TrackIndex> hidden, std::uint32_t k);

/// Sum of P_j over hit positions j <= min(k, |ranking|), divided by
/// min(k, |hidden|) in challenge mode or min(k, |ranking|) in
/// paper_verbatim mode. 0 when `hidden` is empty.
double average_precision(std::span<const Slot> ranking, std::span<const TrackIndex> hidden, std::uint32_t k,
                         ApMode mode);

struct UserAp {
    UserIndex user;
    double average_precision;
    std::size_t hidden_count;
};

struct EvalReport {
    std::vector<UserAp> per_user;
    double map_score = 0.0;
    std::uint32_t k = 500;
    ApMode ap_mode = ApMode::challenge;
};

class MissingRecommendation : public Error {
public:
    explicit MissingRecommendation(UserIndex u);
    UserIndex user;
};

/// Averages AP over every user in `hidden`, in ascending user order.
/// Recommendations for users outside `hidden` are ignored.
EvalReport mean_average_precision(std::span<const Recommendation> recommendations,
                                  const std::map<UserIndex, TrackSet>& hidden, std::uint32_t k, ApMode mode);

/// A per-user partition of listening history into a visible part (given to
/// the recommender) and a hidden part (to be predicted). Both batches share
/// the source vocabularies.
struct HistorySplit {
    TripletBatch visible;
    TripletBatch hidden;
    /// Users with a non-empty hidden part, ascending.
    std::vector<UserIndex> evaluable;
    std::uint64_t seed = 0;

    [[nodiscard]] std::map<UserIndex, TrackSet> hidden_sets() const;
};

/// For each user, shuffles their distinct tracks with a permutation derived
/// from (seed, user index), sends floor(fraction * count) to visible and the
/// rest to hidden. Users with fewer than two tracks stay fully visible.
HistorySplit split_history(const TripletBatch& batch, double fraction, std::uint64_t seed);

} // namespace msdrec
