#include "msdrec/recommend.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <ostream>
#include <thread>

namespace msdrec {

std::vector<ScoredTrack> score_tracks(const InteractionIndex& index, const NeighborSet& neighbors, UserIndex u,
                                      bool exclude_seen, ScoreScratch& scratch) {
    if (scratch.score_.size() < index.n_tracks()) {
        scratch.score_.assign(index.n_tracks(), 0.0);
        scratch.touched_flag_.assign(index.n_tracks(), 0);
        scratch.excluded_.assign(index.n_tracks(), 0);
    }
    auto& score = scratch.score_;
    auto& flag = scratch.touched_flag_;
    auto& excluded = scratch.excluded_;
    auto& touched = scratch.touched_;
    touched.clear();

    const auto own = index.tracks_of(u);
    if (exclude_seen) {
        for (TrackIndex t : own)
            excluded[t] = 1;
    }
    for (const auto& n : neighbors.neighbors) {
        const double vote = n.weight / static_cast<double>(index.total_plays(n.user));
        for (TrackIndex t : index.tracks_of(n.user)) {
            if (excluded[t])
                continue;
            if (!flag[t]) {
                flag[t] = 1;
                touched.push_back(t);
            }
            score[t] += vote;
        }
    }
    if (exclude_seen) {
        for (TrackIndex t : own)
            excluded[t] = 0;
    }

    std::sort(touched.begin(), touched.end());
    std::vector<ScoredTrack> out;
    out.reserve(touched.size());
    for (TrackIndex t : touched) {
        if (score[t] > 0.0)
            out.push_back({t, score[t]});
        score[t] = 0.0;
        flag[t] = 0;
    }
    return out;
}

std::vector<ScoredTrack> score_tracks(const InteractionIndex& index, const NeighborSet& neighbors, UserIndex u,
                                      bool exclude_seen) {
    ScoreScratch scratch(index.n_tracks());
    return score_tracks(index, neighbors, u, exclude_seen, scratch);
}

PopularityPrior::PopularityPrior(const InteractionIndex& index) : df_(index.df_table()), order_(index.n_tracks()) {
    for (TrackIndex t = 0; t < index.n_tracks(); ++t)
        order_[t] = t;
    std::stable_sort(order_.begin(), order_.end(), [&](TrackIndex a, TrackIndex b) { return df_[a] > df_[b]; });
}

Recommendation rank_and_pad(UserIndex user, std::vector<ScoredTrack> scores, std::uint32_t k, PadStrategy pad,
                            const PopularityPrior& prior, std::span<const TrackIndex> excluded) {
    if (k == 0)
        throw ConfigError("k must be at least 1");

    const auto better = [&](const ScoredTrack& a, const ScoredTrack& b) {
        if (a.score != b.score)
            return a.score > b.score;
        const auto dfa = prior.df(a.track);
        const auto dfb = prior.df(b.track);
        if (dfa != dfb)
            return dfa > dfb;
        return a.track < b.track;
    };
    const std::size_t keep = std::min<std::size_t>(k, scores.size());
    std::partial_sort(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(keep), scores.end(), better);

    Recommendation rec;
    rec.user = user;
    rec.items.reserve(k);
    rec.scores.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        rec.items.push_back(Slot::track(scores[i].track));
        rec.scores.push_back(scores[i].score);
    }

    if (pad == PadStrategy::popularity && rec.items.size() < k) {
        std::vector<TrackIndex> ranked;
        ranked.reserve(keep);
        for (std::size_t i = 0; i < keep; ++i)
            ranked.push_back(scores[i].track);
        std::sort(ranked.begin(), ranked.end());
        for (TrackIndex t : prior.order()) {
            if (rec.items.size() >= k || prior.df(t) == 0)
                break;
            if (std::binary_search(ranked.begin(), ranked.end(), t) ||
                std::binary_search(excluded.begin(), excluded.end(), t))
                continue;
            rec.items.push_back(Slot::track(t));
        }
        rec.padding_exhausted = rec.items.size() < k;
    }
    for (std::uint32_t n = 1; rec.items.size() < k; ++n)
        rec.items.push_back(Slot::dummy(n));
    return rec;
}

Recommender::Recommender(const InteractionIndex& index, const IdfTable& idf, const Config& config)
    : index_(&index), idf_(&idf), config_(config), prior_(index) {
    config_.validate();
    if (idf.values.size() != index.n_tracks())
        throw Error("idf table does not match index");
}

Recommender::Workspace Recommender::make_workspace() const {
    return {CandidateScratch(index_->n_users()), ScoreScratch(index_->n_tracks())};
}

NeighborSet Recommender::neighbors(UserIndex u, Workspace& ws) const {
    const auto candidates = candidate_neighbors(*index_, *idf_, u, ws.candidates, config_.max_posting);
    return prune(u, candidates, config_.s);
}

Recommendation Recommender::recommend(UserIndex u, Workspace& ws) const {
    if (u >= index_->n_users())
        throw Error("user index " + std::to_string(u) + " out of range");
    const auto set = neighbors(u, ws);
    auto scores = score_tracks(*index_, set, u, config_.exclude_seen, ws.scores);
    const auto excluded = config_.exclude_seen ? index_->tracks_of(u) : std::span<const TrackIndex>{};
    return rank_and_pad(u, std::move(scores), config_.k, config_.pad_strategy, prior_, excluded);
}

Recommendation Recommender::recommend(UserIndex u) const {
    auto ws = make_workspace();
    return recommend(u, ws);
}

void recommend_all(const InteractionIndex& index, const IdfTable& idf, std::span<const UserIndex> users,
                   const Config& config, unsigned workers, const std::function<void(const Recommendation&)>& sink) {
    const Recommender engine(index, idf, config);
    workers = std::max(1u, workers);
    // Bounded batches keep memory flat for large user lists.
    constexpr std::size_t kBatch = 4096;

    std::vector<std::optional<Recommendation>> results;
    std::vector<std::exception_ptr> errors;
    std::vector<Recommender::Workspace> spaces;
    for (unsigned w = 0; w < workers; ++w)
        spaces.push_back(engine.make_workspace());

    for (std::size_t begin = 0; begin < users.size(); begin += kBatch) {
        const std::size_t end = std::min(users.size(), begin + kBatch);
        results.assign(end - begin, std::nullopt);
        errors.assign(end - begin, nullptr);
        std::atomic<std::size_t> next{begin};

        const auto work = [&](Recommender::Workspace& ws) {
            for (std::size_t i = next++; i < end; i = next++) {
                try {
                    results[i - begin] = engine.recommend(users[i], ws);
                } catch (...) {
                    errors[i - begin] = std::current_exception();
                }
            }
        };
        const unsigned active = static_cast<unsigned>(std::min<std::size_t>(workers, end - begin));
        if (active <= 1) {
            work(spaces[0]);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < active; ++w)
                pool.emplace_back([&, w] { work(spaces[w]); });
        }

        for (std::size_t i = begin; i < end; ++i) {
            if (errors[i - begin]) {
                try {
                    std::rethrow_exception(errors[i - begin]);
                } catch (const std::exception& e) {
                    throw Error("recommend failed for user #" + std::to_string(i) + " (index " +
                                std::to_string(users[i]) + "): " + e.what());
                }
            }
            sink(*results[i - begin]);
        }
    }
}

std::vector<Recommendation> recommend_all(const InteractionIndex& index, const IdfTable& idf,
                                          std::span<const UserIndex> users, const Config& config, unsigned workers) {
    std::vector<Recommendation> out;
    out.reserve(users.size());
    recommend_all(index, idf, users, config, workers, [&](const Recommendation& r) { out.push_back(r); });
    return out;
}

std::string dummy_prefix(const Vocabulary& tracks, std::uint32_t k) {
    for (std::uint32_t n = 1; n <= k; ++n) {
        if (tracks.contains(std::to_string(n)))
            return "pad:";
    }
    return {};
}

void write_recommendation(std::ostream& out, const Recommendation& rec, const Vocabulary& users,
                          const Vocabulary& tracks, const std::string& pad_prefix) {
    out << users.lookup(rec.user);
    for (const auto& slot : rec.items) {
        out << ' ';
        if (slot.padding)
            out << pad_prefix << slot.id;
        else
            out << tracks.lookup(slot.id);
    }
    out << '\n';
}

} // namespace msdrec
