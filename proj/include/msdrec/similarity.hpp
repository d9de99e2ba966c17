#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "msdrec/core.hpp"
#include "msdrec/idf.hpp"
#include "msdrec/index.hpp"

namespace msdrec {

struct Neighbor {
    UserIndex user;
    double weight;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Users kept after relative-threshold pruning, ordered by weight descending
/// then user index ascending.
struct NeighborSet {
    UserIndex source_user = 0;
    std::vector<Neighbor> neighbors;
    /// Largest candidate weight before pruning; 0 without candidates.
    double w_max = 0.0;

    friend bool operator==(const NeighborSet&, const NeighborSet&) = default;
};

/// Sum of idf over tracks both users listened to. Play counts are ignored.
double similarity(const InteractionIndex& index, const IdfTable& idf, UserIndex u, UserIndex v);

/// Reusable per-worker accumulator sized to the user count.
class CandidateScratch {
public:
    explicit CandidateScratch(std::uint32_t n_users = 0) : weight_(n_users, 0.0), seen_(n_users, 0) {}

private:
    friend std::vector<Neighbor> candidate_neighbors(const InteractionIndex&, const IdfTable&, UserIndex,
                                                     CandidateScratch&, std::uint64_t);
    std::vector<double> weight_;
    std::vector<std::uint8_t> seen_;
    std::vector<UserIndex> touched_;
};

/// Every user sharing at least one track with `u`, with their similarity,
/// sorted by user index. `u` itself is excluded. Weights accumulate over
/// u's tracks in ascending track order, so each weight is bit-identical to
/// `similarity(u, v)`.
///
/// `max_posting` > 0 skips tracks with more listeners than that.
std::vector<Neighbor> candidate_neighbors(const InteractionIndex& index, const IdfTable& idf, UserIndex u,
                                          CandidateScratch& scratch, std::uint64_t max_posting = 0);

std::vector<Neighbor> candidate_neighbors(const InteractionIndex& index, const IdfTable& idf, UserIndex u);

/// Keeps candidates whose weight is >= s * w_max (boundary inclusive, no epsilon).
NeighborSet prune(UserIndex source_user, std::span<const Neighbor> candidates, double s);

} // namespace msdrec
