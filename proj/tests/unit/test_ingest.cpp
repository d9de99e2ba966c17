#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "msdrec/ingest.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

using namespace msdrec;

namespace {

TripletBatch parse(const std::string& text, char delim = '\t') {
    std::istringstream in(text);
    return parse_triplets(in, delim);
}

} // namespace

TEST_CASE("parse two triplets") {
    const auto b = parse("u1\tta\t2\nu1\ttb\t1\n");
    REQUIRE(b.size() == 2);
    CHECK(b.users.size() == 1);
    CHECK(b.tracks.size() == 2);
    CHECK(b.triplets[0] == IndexedTriplet{0, 0, 2});
    CHECK(b.triplets[1] == IndexedTriplet{0, 1, 1});
    CHECK(b.tracks.lookup(1) == "tb");
}

TEST_CASE("zero play count is malformed") {
    try {
        parse("u1\tta\t0\n");
        FAIL("expected MalformedLine");
    } catch (const MalformedLine& e) {
        CHECK(e.line_no == 1);
    }
}

TEST_CASE("duplicate pair reports the repeating line") {
    try {
        parse("u1\tta\t2\nu1\tta\t3\n");
        FAIL("expected DuplicatePair");
    } catch (const DuplicatePair& e) {
        CHECK(e.line_no == 2);
    }
}

TEST_CASE("malformed lines") {
    const char* bad[] = {
        "u1\tta\n",          // two fields
        "u1\tta\t2\tx\n",    // four fields
        "u1\tta\tabc\n",     // non-integer
        "u1\tta\t-3\n",      // negative
        "u1\tta\t2.5\n",     // fractional
        "u1\tta\t\n",        // empty count
        "\tta\t1\n",         // empty user
        "u1\tta\t99999999999\n", // overflow
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse(text), MalformedLine);
    }
}

TEST_CASE("line numbers count blank lines") {
    try {
        parse("u1\tta\t1\n\n\nu2\tta\tx\n");
        FAIL("expected MalformedLine");
    } catch (const MalformedLine& e) {
        CHECK(e.line_no == 4);
    }
}

TEST_CASE("CRLF, missing final newline and alternate delimiter") {
    const auto crlf = parse("u1\tta\t2\r\nu2\tta\t1");
    CHECK(crlf.size() == 2);
    CHECK(crlf.triplets[1].play_count == 1);
    const auto csv = parse("u1,ta,2\nu2,tb,7\n", ',');
    CHECK(csv.size() == 2);
    CHECK(csv.triplets[1].play_count == 7);
}

TEST_CASE("write_triplets reproduces the text format") {
    const std::string text = msdrec::testing::toy_t1_text();
    std::ostringstream out;
    write_triplets(out, parse(text));
    CHECK(out.str() == text);
}

TEST_CASE("dataset round trip") {
    msdrec::testing::TempDir dir;
    const auto path = dir.path() / "d.bin";

    SUBCASE("empty batch") {
        TripletBatch empty;
        save_dataset(empty, path);
        CHECK(load_dataset(path) == empty);
    }
    SUBCASE("two triplets") {
        const auto b = parse("u1\tta\t2\nu1\ttb\t1\n");
        save_dataset(b, path);
        CHECK(is_dataset_file(path));
        CHECK(load_dataset(path) == b);
    }
    SUBCASE("random batches keep vocabulary order") {
        msdrec::testing::Rng rng(11);
        for (int i = 0; i < 20; ++i) {
            const auto b = msdrec::testing::random_batch(rng);
            save_dataset(b, path);
            const auto back = load_dataset(path);
            CHECK(back == b);
            CHECK(back.users.externals() == b.users.externals());
        }
    }
}

TEST_CASE("dataset corruption is detected") {
    msdrec::testing::TempDir dir;
    const auto path = dir.path() / "d.bin";
    save_dataset(msdrec::testing::toy_t1(), path);
    const auto size = std::filesystem::file_size(path);

    SUBCASE("truncated") {
        std::filesystem::resize_file(path, size - 5);
        CHECK_THROWS_AS(load_dataset(path), ChecksumMismatch);
    }
    SUBCASE("truncated to a few bytes") {
        std::filesystem::resize_file(path, 6);
        CHECK_THROWS_AS(load_dataset(path), ChecksumMismatch);
    }
    SUBCASE("flipped payload byte") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(20);
        f.put('\x7f');
        f.close();
        CHECK_THROWS_AS(load_dataset(path), ChecksumMismatch);
    }
    SUBCASE("version bump") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(8);
        f.put('\x09');
        f.close();
        CHECK_THROWS_AS(load_dataset(path), FormatVersionMismatch);
    }
    SUBCASE("not a dataset") {
        std::ofstream(path) << "u1\tta\t1\n";
        CHECK_FALSE(is_dataset_file(path));
        CHECK_THROWS_AS(load_dataset(path), FormatError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_dataset(dir.path() / "nope.bin"), IoError);
    }
}
