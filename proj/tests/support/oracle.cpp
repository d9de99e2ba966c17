#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace msdrec::testing {

DenseMatrix::DenseMatrix(const TripletBatch& batch)
    : n_users(static_cast<std::uint32_t>(batch.users.size())),
      n_tracks(static_cast<std::uint32_t>(batch.tracks.size())),
      plays(n_users, std::vector<std::uint32_t>(n_tracks, 0)) {
    for (const auto& t : batch.triplets)
        plays[t.user][t.track] = t.play_count;
}

std::uint32_t DenseMatrix::df(std::uint32_t t) const {
    std::uint32_t n = 0;
    for (std::uint32_t u = 0; u < n_users; ++u)
        n += listened(u, t) ? 1 : 0;
    return n;
}

std::uint64_t DenseMatrix::total(std::uint32_t u) const {
    std::uint64_t c = 0;
    for (std::uint32_t t = 0; t < n_tracks; ++t)
        c += plays[u][t];
    return c;
}

std::vector<double> oracle_idf(const DenseMatrix& m, double log_base) {
    std::vector<double> idf(m.n_tracks, 0.0);
    for (std::uint32_t t = 0; t < m.n_tracks; ++t) {
        const std::uint32_t df = m.df(t);
        if (df == 0)
            continue;
        const double ln = std::log(static_cast<double>(m.n_users) / static_cast<double>(df));
        idf[t] = log_base == std::numbers::e ? ln : ln / std::log(log_base);
    }
    return idf;
}

std::vector<std::vector<double>> oracle_similarity(const DenseMatrix& m, const std::vector<double>& idf) {
    std::vector<std::vector<double>> w(m.n_users, std::vector<double>(m.n_users, 0.0));
    for (std::uint32_t u = 0; u < m.n_users; ++u) {
        for (std::uint32_t v = 0; v < m.n_users; ++v) {
            if (u == v)
                continue;
            double sum = 0.0;
            for (std::uint32_t t = 0; t < m.n_tracks; ++t) {
                if (m.listened(u, t) && m.listened(v, t))
                    sum += idf[t];
            }
            w[u][v] = sum;
        }
    }
    return w;
}

OracleNeighbors oracle_neighbors(const std::vector<double>& w_row, std::uint32_t u, double s) {
    OracleNeighbors out;
    for (std::uint32_t v = 0; v < w_row.size(); ++v) {
        if (v != u)
            out.w_max = std::max(out.w_max, w_row[v]);
    }
    for (std::uint32_t v = 0; v < w_row.size(); ++v) {
        if (v != u && w_row[v] > 0.0 && !(w_row[v] < s * out.w_max))
            out.kept.emplace_back(v, w_row[v]);
    }
    std::sort(out.kept.begin(), out.kept.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    return out;
}

std::vector<Slot> oracle_recommend(const DenseMatrix& m, const std::vector<std::vector<double>>& w, std::uint32_t u, const Config& config) {
    const auto neighbors = oracle_neighbors(w[u], u, config.s);

    struct Entry {
        std::uint32_t track;
        double score;
        std::uint32_t df;
    };
    std::vector<Entry> entries;
    for (std::uint32_t i = 0; i < m.n_tracks; ++i) {
        if (config.exclude_seen && m.listened(u, i))
            continue;
        double h = 0.0;
        for (const auto& [v, weight] : neighbors.kept) {
            if (m.listened(v, i))
                h += weight / static_cast<double>(m.total(v));
        }
        if (h > 0.0)
            entries.push_back({i, h, m.df(i)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.score != b.score)
            return a.score > b.score;
        if (a.df != b.df)
            return a.df > b.df;
        return a.track < b.track;
    });

    std::vector<Slot> out;
    for (const auto& e : entries) {
        if (out.size() == config.k)
            break;
        out.push_back(Slot::track(e.track));
    }
    for (std::uint32_t n = 1; out.size() < config.k; ++n)
        out.push_back(Slot::dummy(n));
    return out;
}

double oracle_precision(const std::vector<int>& relevance, std::uint32_t k) {
    int hits = 0;
    for (std::uint32_t j = 0; j < k && j < relevance.size(); ++j)
        hits += relevance[j];
    return static_cast<double>(hits) / k;
}

double oracle_average_precision(const std::vector<int>& relevance, std::size_t n_hidden, std::uint32_t k,
                                bool paper_normalizer) {
    if (n_hidden == 0)
        return 0.0;
    const std::size_t depth = std::min<std::size_t>(k, relevance.size());
    const std::size_t n_u = paper_normalizer ? depth : std::min<std::size_t>(k, n_hidden);
    double sum = 0.0;
    for (std::size_t j = 1; j <= depth; ++j) {
        if (relevance[j - 1])
            sum += oracle_precision(relevance, static_cast<std::uint32_t>(j)) * relevance[j - 1];
    }
    return n_u == 0 ? 0.0 : sum / static_cast<double>(n_u);
}

} // namespace msdrec::testing
