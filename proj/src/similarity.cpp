#include "msdrec/similarity.hpp"

#include <algorithm>

namespace msdrec {

double similarity(const InteractionIndex& index, const IdfTable& idf, UserIndex u, UserIndex v) {
    const auto a = index.tracks_of(u);
    const auto b = index.tracks_of(v);
    double w = 0.0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            w += idf[*i];
            ++i;
            ++j;
        }
    }
    return w;
}

std::vector<Neighbor> candidate_neighbors(const InteractionIndex& index, const IdfTable& idf, UserIndex u,
                                          CandidateScratch& scratch, std::uint64_t max_posting) {
    if (scratch.weight_.size() < index.n_users()) {
        scratch.weight_.assign(index.n_users(), 0.0);
        scratch.seen_.assign(index.n_users(), 0);
    }
    auto& weight = scratch.weight_;
    auto& seen = scratch.seen_;
    auto& touched = scratch.touched_;
    touched.clear();

    for (TrackIndex t : index.tracks_of(u)) {
        const auto posting = index.listeners_of(t);
        if (max_posting != 0 && posting.size() > max_posting)
            continue;
        const double w = idf[t];
        for (UserIndex v : posting) {
            if (v == u)
                continue;
            if (!seen[v]) {
                seen[v] = 1;
                touched.push_back(v);
            }
            weight[v] += w;
        }
    }

    std::sort(touched.begin(), touched.end());
    std::vector<Neighbor> out;
    out.reserve(touched.size());
    for (UserIndex v : touched) {
        out.push_back({v, weight[v]});
        weight[v] = 0.0;
        seen[v] = 0;
    }
    return out;
}

std::vector<Neighbor> candidate_neighbors(const InteractionIndex& index, const IdfTable& idf, UserIndex u) {
    CandidateScratch scratch(index.n_users());
    return candidate_neighbors(index, idf, u, scratch);
}

NeighborSet prune(UserIndex source_user, std::span<const Neighbor> candidates, double s) {
    NeighborSet set;
    set.source_user = source_user;
    for (const auto& c : candidates)
        set.w_max = std::max(set.w_max, c.weight);

    const double threshold = s * set.w_max;
    for (const auto& c : candidates) {
        if (c.user != source_user && c.weight > 0.0 && c.weight >= threshold)
            set.neighbors.push_back(c);
    }
    std::sort(set.neighbors.begin(), set.neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.weight != b.weight)
            return a.weight > b.weight;
        return a.user < b.user;
    });
    return set;
}

} // namespace msdrec
