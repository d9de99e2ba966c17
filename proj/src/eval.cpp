#include "msdrec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace msdrec {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Unbiased draw in [0, bound) (Lemire). std::uniform_int_distribution is
// implementation-defined, which would make splits library-dependent.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = -bound % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(rng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// Hit flags per ranking position, counting each hidden track once.
template <class F>
void for_each_hit(std::span<const Slot> ranking, std::span<const TrackIndex> hidden, std::size_t limit, F&& on_hit) {
    std::vector<std::uint8_t> found(hidden.size(), 0);
    for (std::size_t j = 0; j < limit; ++j) {
        const Slot& s = ranking[j];
        if (s.padding)
            continue;
        const auto it = std::lower_bound(hidden.begin(), hidden.end(), s.id);
        if (it == hidden.end() || *it != s.id)
            continue;
        auto& f = found[static_cast<std::size_t>(it - hidden.begin())];
        if (f)
            continue;
        f = 1;
        on_hit(j + 1);
    }
}

} // namespace

double precision_at_k(std::span<const Slot> ranking, std::span<const TrackIndex> hidden, std::uint32_t k) {
    if (k == 0)
        throw ConfigError("k must be at least 1");
    std::size_t hits = 0;
    for_each_hit(ranking, hidden, std::min<std::size_t>(k, ranking.size()), [&](std::size_t) { ++hits; });
    return static_cast<double>(hits) / static_cast<double>(k);
}

double average_precision(std::span<const Slot> ranking, std::span<const TrackIndex> hidden, std::uint32_t k,
                         ApMode mode) {
    if (k == 0)
        throw ConfigError("k must be at least 1");
    if (hidden.empty())
        return 0.0;
    const std::size_t depth = std::min<std::size_t>(k, ranking.size());
    const std::size_t norm = mode == ApMode::challenge ? std::min<std::size_t>(k, hidden.size()) : depth;
    if (norm == 0)
        return 0.0;

    double sum = 0.0;
    std::size_t hits = 0;
    for_each_hit(ranking, hidden, depth, [&](std::size_t position) {
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(position);
    });
    return sum / static_cast<double>(norm);
}

MissingRecommendation::MissingRecommendation(UserIndex u)
    : Error("no recommendation for evaluated user " + std::to_string(u)), user(u) {}

EvalReport mean_average_precision(std::span<const Recommendation> recommendations,
                                  const std::map<UserIndex, TrackSet>& hidden, std::uint32_t k, ApMode mode) {
    std::map<UserIndex, const Recommendation*> by_user;
    for (const auto& r : recommendations)
        by_user.emplace(r.user, &r);

    EvalReport report;
    report.k = k;
    report.ap_mode = mode;
    report.per_user.reserve(hidden.size());
    double sum = 0.0;
    for (const auto& [user, tracks] : hidden) {
        const auto it = by_user.find(user);
        if (it == by_user.end())
            throw MissingRecommendation(user);
        const double ap = average_precision(it->second->items, tracks, k, mode);
        report.per_user.push_back({user, ap, tracks.size()});
        sum += ap;
    }
    if (!report.per_user.empty())
        report.map_score = sum / static_cast<double>(report.per_user.size());
    return report;
}

std::map<UserIndex, TrackSet> HistorySplit::hidden_sets() const {
    std::map<UserIndex, TrackSet> out;
    for (const auto& t : hidden.triplets)
        out[t.user].push_back(t.track);
    for (auto& [u, tracks] : out)
        std::sort(tracks.begin(), tracks.end());
    return out;
}

HistorySplit split_history(const TripletBatch& batch, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ConfigError("split fraction must lie in (0, 1)");

    const std::size_t n_users = batch.users.size();
    // Triplet positions grouped per user, ordered by track index.
    std::vector<std::vector<std::size_t>> rows(n_users);
    for (std::size_t i = 0; i < batch.triplets.size(); ++i)
        rows[batch.triplets[i].user].push_back(i);

    std::vector<std::uint8_t> to_hidden(batch.triplets.size(), 0);
    HistorySplit split;
    split.seed = seed;
    for (UserIndex u = 0; u < n_users; ++u) {
        auto& row = rows[u];
        if (row.size() < 2)
            continue;
        std::sort(row.begin(), row.end(),
                  [&](std::size_t a, std::size_t b) { return batch.triplets[a].track < batch.triplets[b].track; });
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(u)));
        for (std::size_t i = row.size() - 1; i > 0; --i)
            std::swap(row[i], row[bounded(rng, i + 1)]);

        const auto n_visible = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(row.size())));
        for (std::size_t i = n_visible; i < row.size(); ++i)
            to_hidden[row[i]] = 1;
        if (n_visible < row.size())
            split.evaluable.push_back(u);
    }

    split.visible.users = batch.users;
    split.visible.tracks = batch.tracks;
    split.hidden.users = batch.users;
    split.hidden.tracks = batch.tracks;
    for (std::size_t i = 0; i < batch.triplets.size(); ++i)
        (to_hidden[i] ? split.hidden : split.visible).triplets.push_back(batch.triplets[i]);
    return split;
}

} // namespace msdrec
