#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "msdrec/similarity.hpp"
#include "support/oracle.hpp"
#include "support/synthetic.hpp"

using namespace msdrec;
using msdrec::testing::DenseMatrix;
using msdrec::testing::Rng;

namespace {

constexpr UserIndex U1 = 0, U2 = 1, U3 = 2, U4 = 3;

struct Toy {
    TripletBatch batch = msdrec::testing::toy_t1();
    InteractionIndex index = build_index(batch);
    IdfTable idf = compute_idf(index);
    DenseMatrix dense{batch};
    std::vector<std::vector<double>> w = msdrec::testing::oracle_similarity(dense, idf.values);
};

std::set<UserIndex> users_of(const NeighborSet& set) {
    std::set<UserIndex> out;
    for (const auto& n : set.neighbors)
        out.insert(n.user);
    return out;
}

std::vector<Neighbor> random_candidates(Rng& rng) {
    std::vector<Neighbor> c;
    const auto n = rng.below(20);
    for (UserIndex v = 1; v <= n; ++v) {
        // Coarse weights so ties and exact boundary hits occur.
        c.push_back({v, static_cast<double>(rng.between(1, 8)) * 0.25});
    }
    return c;
}

} // namespace

TEST_CASE("toy fixture similarities") {
    const Toy toy;
    CHECK(similarity(toy.index, toy.idf, U1, U3) == 0.0);
    CHECK(similarity(toy.index, toy.idf, U1, U2) == toy.w[U1][U2]);
    CHECK(similarity(toy.index, toy.idf, U1, U4) == toy.w[U1][U4]);
    CHECK(similarity(toy.index, toy.idf, U1, U2) == doctest::Approx(0.287682).epsilon(1e-6));
    CHECK(similarity(toy.index, toy.idf, U1, U4) == doctest::Approx(0.980829).epsilon(1e-6));
}

TEST_CASE("toy fixture candidates") {
    const Toy toy;
    const auto c1 = candidate_neighbors(toy.index, toy.idf, U1);
    REQUIRE(c1.size() == 2);
    CHECK(c1[0] == Neighbor{U2, toy.w[U1][U2]});
    CHECK(c1[1] == Neighbor{U4, toy.w[U1][U4]});

    const auto c3 = candidate_neighbors(toy.index, toy.idf, U3);
    REQUIRE(c3.size() == 2);
    CHECK(c3[0].user == U2);
    CHECK(c3[1].user == U4);
    CHECK(c3[0].weight == doctest::Approx(0.287682).epsilon(1e-6));
    CHECK(c3[0].weight == c3[1].weight);
}

TEST_CASE("user with empty history has no candidates") {
    TripletBatch b = msdrec::testing::toy_t1();
    b.users.intern("silent");
    const auto idx = build_index(b);
    const auto idf = compute_idf(idx);
    CHECK(candidate_neighbors(idx, idf, 4).empty());
}

TEST_CASE("toy fixture pruning at s = 0.4") {
    const Toy toy;
    const auto set = prune(U1, candidate_neighbors(toy.index, toy.idf, U1), 0.4);
    CHECK(set.w_max == toy.w[U1][U4]);
    CHECK(0.4 * set.w_max == doctest::Approx(0.392332).epsilon(1e-6));
    REQUIRE(set.neighbors.size() == 1);
    CHECK(set.neighbors[0].user == U4);
}

TEST_CASE("prune edge cases") {
    const auto empty = prune(3, {}, 0.4);
    CHECK(empty.neighbors.empty());
    CHECK(empty.w_max == 0.0);

    const std::vector<Neighbor> c{{1, 0.5}, {2, 2.0}, {3, 0.8}, {4, 0.8}};
    CHECK(prune(0, c, 0.0).neighbors.size() == 4);

    // Boundary is inclusive: 0.8 == 0.4 * 2.0.
    const auto at_boundary = prune(0, c, 0.4);
    CHECK(users_of(at_boundary) == std::set<UserIndex>{2, 3, 4});
    // Sorted by weight desc, then user asc.
    CHECK(at_boundary.neighbors[0].user == 2);
    CHECK(at_boundary.neighbors[1].user == 3);
    CHECK(at_boundary.neighbors[2].user == 4);

    // Zero weights never survive, even when s = 0.
    const std::vector<Neighbor> zeros{{1, 0.0}, {2, 0.0}};
    CHECK(prune(0, zeros, 0.0).neighbors.empty());
}

TEST_CASE("similarity is symmetric and ignores play counts") {
    Rng rng(77);
    for (int round = 0; round < 50; ++round) {
        auto batch = msdrec::testing::random_batch(rng);
        const auto idx = build_index(batch);
        const auto idf = compute_idf(idx);
        for (auto& t : batch.triplets)
            t.play_count = static_cast<PlayCount>(rng.between(1, 100));
        const auto idx2 = build_index(batch);
        for (UserIndex u = 0; u < idx.n_users(); ++u) {
            for (UserIndex v = 0; v < idx.n_users(); ++v) {
                const double w = similarity(idx, idf, u, v);
                CHECK(w == similarity(idx, idf, v, u));
                CHECK(w == similarity(idx2, idf, u, v));
            }
        }
    }
}

TEST_CASE("candidate generation matches the dense pairwise oracle") {
    Rng rng(123);
    for (int round = 0; round < 100; ++round) {
        const auto batch = msdrec::testing::random_batch(rng);
        const auto idx = build_index(batch);
        const auto idf = compute_idf(idx);
        const DenseMatrix dense(batch);
        const auto w = msdrec::testing::oracle_similarity(dense, idf.values);
        CandidateScratch scratch(idx.n_users());

        for (UserIndex u = 0; u < idx.n_users(); ++u) {
            const auto got = candidate_neighbors(idx, idf, u, scratch);
            std::vector<Neighbor> expected;
            for (UserIndex v = 0; v < idx.n_users(); ++v) {
                bool shares = false;
                for (TrackIndex t = 0; t < idx.n_tracks(); ++t)
                    shares = shares || (v != u && dense.listened(u, t) && dense.listened(v, t));
                if (shares)
                    expected.push_back({v, w[u][v]});
            }
            CHECK(got == expected);
        }
    }
}

TEST_CASE("threshold monotonicity and s = 1") {
    Rng rng(8);
    for (int round = 0; round < 200; ++round) {
        const auto c = random_candidates(rng);
        std::set<UserIndex> previous;
        bool first = true;
        for (double s : {1.0, 0.8, 0.4, 0.2, 0.0}) {
            const auto kept = users_of(prune(0, c, s));
            if (!first)
                CHECK(std::includes(kept.begin(), kept.end(), previous.begin(), previous.end()));
            previous = kept;
            first = false;
        }

        double best = 0.0;
        for (const auto& n : c)
            best = std::max(best, n.weight);
        std::set<UserIndex> argmax;
        for (const auto& n : c)
            if (n.weight == best)
                argmax.insert(n.user);
        CHECK(users_of(prune(0, c, 1.0)) == argmax);
    }
}

TEST_CASE("max_posting skips long posting lists") {
    const Toy toy;
    CandidateScratch scratch(4);
    // Only track a (df 2) survives a cap of 2.
    const auto capped = candidate_neighbors(toy.index, toy.idf, U1, scratch, 2);
    REQUIRE(capped.size() == 1);
    CHECK(capped[0].user == U4);
    CHECK(capped[0].weight == toy.idf[0]);
}
