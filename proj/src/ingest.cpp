#include "msdrec/ingest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "binary_io.hpp"

namespace msdrec {
namespace {

constexpr detail::Magic kDatasetMagic{'M', 'S', 'D', 'R', 'D', 'A', 'T', 'A'};

} // namespace

MalformedLine::MalformedLine(std::uint64_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": malformed triplet (" + what + ")"), line_no(line) {}

DuplicatePair::DuplicatePair(std::uint64_t line)
    : Error("line " + std::to_string(line) + ": duplicate (user, track) pair"), line_no(line) {}

FormatVersionMismatch::FormatVersionMismatch(std::uint32_t found, std::uint32_t expected)
    : FormatError("format version " + std::to_string(found) + ", expected " + std::to_string(expected)) {}

TripletBatch parse_triplets(std::istream& in, char delimiter) {
    TripletBatch batch;
    std::unordered_set<std::uint64_t> seen_pairs;
    std::string line;
    std::uint64_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest(line);
        if (!rest.empty() && rest.back() == '\r')
            rest.remove_suffix(1);
        if (rest.empty())
            continue;

        const auto first = rest.find(delimiter);
        const auto second = first == std::string_view::npos ? first : rest.find(delimiter, first + 1);
        if (second == std::string_view::npos || rest.find(delimiter, second + 1) != std::string_view::npos)
            throw MalformedLine(line_no, "expected 3 fields");

        const auto user = rest.substr(0, first);
        const auto track = rest.substr(first + 1, second - first - 1);
        const auto count_text = rest.substr(second + 1);
        if (user.empty() || track.empty())
            throw MalformedLine(line_no, "empty id");

        PlayCount count = 0;
        const auto* end = count_text.data() + count_text.size();
        const auto [ptr, ec] = std::from_chars(count_text.data(), end, count);
        if (ec != std::errc{} || ptr != end || count_text.empty())
            throw MalformedLine(line_no, "play count is not an unsigned 32-bit integer");
        if (count < 1)
            throw MalformedLine(line_no, "play count must be >= 1");

        const UserIndex u = batch.users.intern(user);
        const TrackIndex t = batch.tracks.intern(track);
        const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | t;
        if (!seen_pairs.insert(key).second)
            throw DuplicatePair(line_no);
        batch.triplets.push_back({u, t, count});
    }
    if (in.bad())
        throw IoError("stream read failed at line " + std::to_string(line_no));
    return batch;
}

TripletBatch parse_triplet_file(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    return parse_triplets(in, delimiter);
}

void write_triplets(std::ostream& out, const TripletBatch& batch) {
    for (const auto& t : batch.triplets) {
        out << batch.users.lookup(t.user) << '\t' << batch.tracks.lookup(t.track) << '\t' << t.play_count
            << '\n';
    }
}

void save_dataset(const TripletBatch& batch, const std::filesystem::path& path) {
    detail::ByteWriter w(kDatasetMagic, kDatasetFormatVersion);
    w.vocabulary(batch.users);
    w.vocabulary(batch.tracks);
    w.u64(batch.triplets.size());
    for (const auto& t : batch.triplets)
        w.u32(t.user);
    for (const auto& t : batch.triplets)
        w.u32(t.track);
    for (const auto& t : batch.triplets)
        w.u32(t.play_count);
    w.commit(path);
}

TripletBatch load_dataset(const std::filesystem::path& path) {
    detail::ByteReader r(path, kDatasetMagic, kDatasetFormatVersion, "dataset");
    TripletBatch batch;
    batch.users = r.vocabulary();
    batch.tracks = r.vocabulary();
    auto users = r.array<std::uint32_t>();
    // The three columns share one declared length.
    const std::size_t n = users.size();
    batch.triplets.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        batch.triplets[i].user = users[i];
    for (std::size_t i = 0; i < n; ++i)
        batch.triplets[i].track = r.u32();
    for (std::size_t i = 0; i < n; ++i)
        batch.triplets[i].play_count = r.u32();
    r.finish();

    for (const auto& t : batch.triplets) {
        if (t.user >= batch.users.size() || t.track >= batch.tracks.size() || t.play_count < 1)
            throw FormatError("dataset '" + path.string() + "': triplet out of range");
    }
    return batch;
}

bool is_dataset_file(const std::filesystem::path& path) { return detail::has_magic(path, kDatasetMagic); }

} // namespace msdrec
