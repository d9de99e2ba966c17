#include <doctest.h>

#include <cmath>

#include "msdrec/idf.hpp"
#include "support/oracle.hpp"
#include "support/synthetic.hpp"

using namespace msdrec;
using msdrec::testing::Rng;

namespace {

/// n users; the first `df` of them listened to track "t", everybody to "all".
TripletBatch users_sharing(std::uint32_t n, std::uint32_t df) {
    TripletBatch b;
    const auto t = b.tracks.intern("t");
    const auto all = b.tracks.intern("all");
    for (std::uint32_t u = 0; u < n; ++u) {
        const auto user = b.users.intern("u" + std::to_string(u));
        b.triplets.push_back({user, all, 1});
        if (u < df)
            b.triplets.push_back({user, t, 1});
    }
    return b;
}

} // namespace

TEST_CASE("idf formula values") {
    const auto idx = build_index(users_sharing(4, 2));
    const auto idf = compute_idf(idx);
    CHECK(idf.n_users == 4);
    CHECK(idf[0] == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(std::abs(idf[0] - std::log(2.0)) < 1e-15);
    CHECK(idf[1] == 0.0); // df = n
}

TEST_CASE("toy fixture idf") {
    const auto idf = compute_idf(build_index(msdrec::testing::toy_t1()));
    CHECK(std::abs(idf[0] - std::log(4.0 / 2.0)) < 1e-15);
    CHECK(std::abs(idf[1] - std::log(4.0 / 3.0)) < 1e-15);
    CHECK(std::abs(idf[2] - std::log(4.0 / 3.0)) < 1e-15);
    CHECK(idf[0] == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(idf[1] == doctest::Approx(0.287682).epsilon(1e-6));
}

TEST_CASE("empty index is rejected") {
    CHECK_THROWS_AS(compute_idf(build_index(TripletBatch{})), EmptyIndex);
}

TEST_CASE("idf invariants on random batches") {
    Rng rng(31);
    for (int round = 0; round < 100; ++round) {
        const auto batch = msdrec::testing::random_batch(rng);
        const auto idx = build_index(batch);
        const auto e = compute_idf(idx);
        const auto two = compute_idf(idx, 2.0);
        const auto ten = compute_idf(idx, 10.0);
        const msdrec::testing::DenseMatrix dense(batch);
        const auto reference = msdrec::testing::oracle_idf(dense, 2.0);

        for (TrackIndex t = 0; t < idx.n_tracks(); ++t) {
            if (idx.df(t) == 0)
                continue;
            CHECK(e[t] >= 0.0);
            CHECK((e[t] == 0.0) == (idx.df(t) == idx.n_users()));
            CHECK(two[t] == reference[t]);
            // Base change is a constant factor ln(b2)/ln(b1).
            const double factor = std::log(10.0) / std::log(2.0);
            CHECK(std::abs(two[t] - ten[t] * factor) <= 1e-12 * std::max(1.0, std::abs(two[t])));
            for (TrackIndex o = 0; o < idx.n_tracks(); ++o) {
                if (idx.df(o) > 0 && idx.df(t) < idx.df(o))
                    CHECK(e[t] > e[o]);
            }
        }
    }
}

TEST_CASE("invalid log base") {
    const auto idx = build_index(msdrec::testing::toy_t1());
    CHECK_THROWS_AS(compute_idf(idx, 1.0), ConfigError);
    CHECK_THROWS_AS(compute_idf(idx, 0.0), ConfigError);
}
