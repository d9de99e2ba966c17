#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "msdrec/msdrec.hpp"

namespace msdrec::cli {
namespace {

namespace fs = std::filesystem;

/// Error carrying the stage and file it happened in.
class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& what, int code = kExitData)
        : std::runtime_error(stage + ": " + what), code(code) {}
    int code;
};

char parse_delimiter(const std::string& text) {
    if (text == "tab" || text == "\\t" || text == "\t")
        return '\t';
    if (text == "space")
        return ' ';
    if (text.size() != 1)
        throw StageError("usage", "delimiter must be a single character, 'tab' or 'space'", kExitUsage);
    return text[0];
}

void require_file(const std::string& stage, const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec))
        throw StageError(stage, "cannot open '" + path.string() + "': no such file");
}

/// Loads a binary dataset or, failing the magic check, parses triplet text.
TripletBatch load_batch(const std::string& stage, const fs::path& path, char delimiter) {
    require_file(stage, path);
    try {
        if (is_dataset_file(path))
            return load_dataset(path);
        return parse_triplet_file(path, delimiter);
    } catch (const MalformedLine& e) {
        throw StageError(stage, path.string() + ":" + std::to_string(e.line_no) + ": " + e.what());
    } catch (const DuplicatePair& e) {
        throw StageError(stage, path.string() + ":" + std::to_string(e.line_no) + ": " + e.what());
    } catch (const Error& e) {
        throw StageError(stage, path.string() + ": " + e.what());
    }
}

std::ofstream open_output(const std::string& stage, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw StageError(stage, "cannot open '" + path.string() + "' for writing");
    return out;
}

struct CommonInput {
    std::string input;
    std::string delimiter = "tab";
};

void add_input(CLI::App* cmd, CommonInput& in, const std::string& help) {
    cmd->add_option("--input,-i", in.input, help)->required()->envname("MSDREC_INPUT");
    cmd->add_option("--delimiter", in.delimiter, "Field separator of text triplets: a character, 'tab' or 'space'")
        ->capture_default_str();
}

struct RecommendArgs {
    CommonInput in;
    std::string users;
    std::string out;
    Config config;
    bool include_seen = false;
    bool exclude_seen = false;
    bool pad_dummy = false;
    bool pad_popularity = false;
    unsigned workers = 1;
};

int do_ingest(const CommonInput& in, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const auto batch = load_batch("ingest", in.input, parse_delimiter(in.delimiter));
    try {
        save_dataset(batch, out_path);
    } catch (const Error& e) {
        throw StageError("ingest", e.what());
    }
    err << "msdrec: ingest: " << batch.size() << " triplets, " << batch.users.size() << " users, "
        << batch.tracks.size() << " tracks\n";
    out << out_path << '\n';
    return kExitOk;
}

int do_build(const CommonInput& in, const std::string& out_path, double log_base, bool with_idf, std::ostream& out,
             std::ostream& err) {
    auto batch = load_batch("build", in.input, parse_delimiter(in.delimiter));
    try {
        std::optional<double> base;
        if (with_idf && !batch.users.empty())
            base = log_base;
        const auto bundle = make_bundle(std::move(batch), base);
        save_index(bundle, out_path);
        err << "msdrec: build: n_users=" << bundle.index.n_users() << " n_tracks=" << bundle.index.n_tracks()
            << " interactions=" << bundle.index.n_interactions() << '\n';
    } catch (const Error& e) {
        throw StageError("build", e.what());
    }
    out << out_path << '\n';
    return kExitOk;
}

IndexBundle load_bundle(const std::string& stage, const fs::path& path, char delimiter) {
    require_file(stage, path);
    try {
        if (is_index_file(path))
            return load_index(path);
    } catch (const Error& e) {
        throw StageError(stage, path.string() + ": " + e.what());
    }
    return make_bundle(load_batch(stage, path, delimiter), std::nullopt);
}

std::vector<UserIndex> read_users(const fs::path& path, const Vocabulary& users) {
    require_file("recommend", path);
    std::ifstream in(path);
    std::vector<UserIndex> out;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string id;
        if (!(fields >> id))
            continue;
        const auto idx = users.find(id);
        if (idx < 0)
            throw StageError("recommend",
                             path.string() + ":" + std::to_string(line_no) + ": unknown user '" + id + "'");
        out.push_back(static_cast<UserIndex>(idx));
    }
    return out;
}

int do_recommend(RecommendArgs& args, std::ostream& out, std::ostream& err) {
    Config& config = args.config;
    if (args.include_seen)
        config.exclude_seen = false;
    if (args.pad_popularity)
        config.pad_strategy = PadStrategy::popularity;
    try {
        config.validate();
    } catch (const ConfigError& e) {
        throw StageError("recommend", e.what(), kExitUsage);
    }
    args.workers = std::max(1u, args.workers);
    err << "msdrec: recommend: config " << config.describe() << " workers=" << args.workers << '\n';

    const auto bundle = load_bundle("recommend", args.in.input, parse_delimiter(args.in.delimiter));
    std::vector<UserIndex> users;
    if (args.users.empty()) {
        users.resize(bundle.index.n_users());
        for (UserIndex u = 0; u < users.size(); ++u)
            users[u] = u;
    } else {
        users = read_users(args.users, bundle.users);
    }

    IdfTable idf;
    try {
        if (bundle.idf && bundle.idf->log_base == config.log_base)
            idf = *bundle.idf;
        else if (bundle.index.n_users() > 0)
            idf = compute_idf(bundle.index, config.log_base);
    } catch (const Error& e) {
        throw StageError("recommend", e.what());
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!args.out.empty()) {
        file = open_output("recommend", args.out);
        sink = &file;
    }
    const std::string prefix = dummy_prefix(bundle.tracks, config.k);
    std::size_t padded = 0;
    try {
        recommend_all(bundle.index, idf, users, config, args.workers, [&](const Recommendation& r) {
            if (r.items.size() != r.scores.size())
                ++padded;
            write_recommendation(*sink, r, bundle.users, bundle.tracks, prefix);
        });
    } catch (const Error& e) {
        throw StageError("recommend", e.what());
    }
    sink->flush();
    if (!*sink)
        throw StageError("recommend", "write failed for '" + args.out + "'");
    err << "msdrec: recommend: " << users.size() << " users, " << padded << " lists padded\n";
    return kExitOk;
}

int do_evaluate(const std::string& recs_path, const CommonInput& hidden_in, std::uint32_t k, ApMode mode,
                const std::string& per_user_path, std::ostream& out, std::ostream& err) {
    if (k == 0)
        throw StageError("evaluate", "k must be at least 1", kExitUsage);
    err << "msdrec: evaluate: config k=" << k << " ap_mode=" << to_string(mode) << '\n';

    const auto hidden = load_batch("evaluate", hidden_in.input, parse_delimiter(hidden_in.delimiter));
    std::map<UserIndex, TrackSet> hidden_sets;
    for (const auto& t : hidden.triplets)
        hidden_sets[t.user].push_back(t.track);
    for (auto& [u, tracks] : hidden_sets)
        std::sort(tracks.begin(), tracks.end());

    require_file("evaluate", recs_path);
    std::ifstream in(recs_path);
    std::vector<Recommendation> recs;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string user;
        if (!(fields >> user))
            continue;
        const auto u = hidden.users.find(user);
        if (u < 0)
            continue;
        Recommendation r;
        r.user = static_cast<UserIndex>(u);
        for (std::string token; fields >> token;) {
            const auto t = hidden.tracks.find(token);
            // Tokens that are not hidden tracks can never hit.
            r.items.push_back(t < 0 ? Slot::dummy(0) : Slot::track(static_cast<TrackIndex>(t)));
        }
        recs.push_back(std::move(r));
    }

    EvalReport report;
    try {
        report = mean_average_precision(recs, hidden_sets, k, mode);
    } catch (const MissingRecommendation& e) {
        throw StageError("evaluate", recs_path + ": no recommendation for user '" +
                                         hidden.users.lookup(e.user) + "'");
    }
    out << "map@" << k << "=" << std::fixed << std::setprecision(6) << report.map_score << '\n';
    out << "users=" << report.per_user.size() << '\n';

    if (!per_user_path.empty()) {
        auto tsv = open_output("evaluate", per_user_path);
        tsv << "user\taverage_precision\thidden_count\n";
        tsv << std::setprecision(17);
        for (const auto& row : report.per_user)
            tsv << hidden.users.lookup(row.user) << '\t' << row.average_precision << '\t' << row.hidden_count
                << '\n';
    }
    return kExitOk;
}

int do_split(const CommonInput& in, double fraction, std::uint64_t seed, const std::string& visible_path,
             const std::string& hidden_path, std::ostream& out, std::ostream& err) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw StageError("split", "fraction must lie in (0, 1)", kExitUsage);
    err << "msdrec: split: config fraction=" << fraction << " seed=" << seed << '\n';
    const auto batch = load_batch("split", in.input, parse_delimiter(in.delimiter));
    const auto split = split_history(batch, fraction, seed);
    {
        auto v = open_output("split", visible_path);
        write_triplets(v, split.visible);
        auto h = open_output("split", hidden_path);
        write_triplets(h, split.hidden);
        if (!v || !h)
            throw StageError("split", "write failed");
    }
    out << "visible=" << split.visible.size() << '\n'
        << "hidden=" << split.hidden.size() << '\n'
        << "evaluable_users=" << split.evaluable.size() << '\n';
    return kExitOk;
}

void print_stats(std::ostream& out, const InteractionIndex& index) {
    std::uint32_t max_df = 0;
    for (TrackIndex t = 0; t < index.n_tracks(); ++t)
        max_df = std::max(max_df, index.df(t));
    std::size_t max_len = 0;
    for (UserIndex u = 0; u < index.n_users(); ++u)
        max_len = std::max(max_len, index.tracks_of(u).size());

    out << "n_users=" << index.n_users() << '\n'
        << "n_tracks=" << index.n_tracks() << '\n'
        << "triplets=" << index.n_interactions() << '\n'
        << "max_df=" << max_df << '\n'
        << "max_history=" << max_len << '\n';
    if (index.n_users() > 0) {
        out << "mean_history=" << std::fixed << std::setprecision(3)
            << static_cast<double>(index.n_interactions()) / index.n_users() << '\n';
        out.unsetf(std::ios::floatfield);
    }
}

int do_stats(const CommonInput& in, std::ostream& out) {
    const auto bundle = load_bundle("stats", in.input, parse_delimiter(in.delimiter));
    print_stats(out, bundle.index);
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"User-based collaborative filtering with idf-weighted user similarity", "msdrec"};
    app.require_subcommand(1);

    CommonInput ingest_in;
    std::string ingest_out;
    auto* ingest = app.add_subcommand("ingest", "Parse a triplet text file into a binary dataset");
    add_input(ingest, ingest_in, "Triplet text file");
    ingest->add_option("--out,-o", ingest_out, "Binary dataset path")->required()->envname("MSDREC_DATASET");

    CommonInput build_in;
    std::string build_out;
    double build_base = std::numbers::e;
    bool build_no_idf = false;
    auto* build = app.add_subcommand("build", "Build the interaction index (and idf table) from a dataset");
    add_input(build, build_in, "Binary dataset or triplet text file");
    build->add_option("--out,-o", build_out, "Index path")->required()->envname("MSDREC_INDEX");
    build->add_option("--log-base", build_base, "Logarithm base of the stored idf table")->capture_default_str();
    build->add_flag("--no-idf", build_no_idf, "Do not store an idf table");

    RecommendArgs rec;
    auto* recommend = app.add_subcommand("recommend", "Produce ranked recommendation lists");
    recommend->add_option("--input,-i", rec.in.input, "Index file (or dataset / triplet text)")
        ->required()
        ->envname("MSDREC_INDEX");
    recommend->add_option("--delimiter", rec.in.delimiter, "Field separator when --input is triplet text")
        ->capture_default_str();
    recommend->add_option("--users,-u", rec.users, "File with one user id per line (default: all users)")
        ->envname("MSDREC_USERS");
    recommend->add_option("--out,-o", rec.out, "Output file (default: stdout)")->envname("MSDREC_RECS");
    recommend->add_option("--s", rec.config.s, "Neighbor pruning ratio in [0, 1]")->capture_default_str();
    recommend->add_option("--k", rec.config.k, "Recommendation list length")->capture_default_str();
    recommend->add_option("--log-base", rec.config.log_base, "Logarithm base for idf")->capture_default_str();
    auto* exclude = recommend->add_flag("--exclude-seen", rec.exclude_seen, "Never recommend known tracks (default)");
    auto* include = recommend->add_flag("--include-seen", rec.include_seen, "Allow recommending known tracks");
    exclude->excludes(include);
    auto* pad_dummy = recommend->add_flag("--pad-dummy", rec.pad_dummy, "Pad short lists with ids 1, 2, ... (default)");
    auto* pad_pop = recommend->add_flag("--pad-popularity", rec.pad_popularity,
                                        "Pad short lists with the most listened unseen tracks");
    pad_dummy->excludes(pad_pop);
    recommend->add_option("--max-posting", rec.config.max_posting,
                          "Skip tracks with more listeners than this when finding neighbors (0 = off)")
        ->capture_default_str();
    recommend->add_option("--workers,-j", rec.workers, "Worker threads")->capture_default_str();

    std::string eval_recs;
    CommonInput eval_hidden;
    std::uint32_t eval_k = 500;
    std::string eval_mode = "challenge";
    std::string eval_per_user;
    auto* evaluate = app.add_subcommand("evaluate", "Score recommendation lists with MAP@k");
    evaluate->add_option("--recs,-r", eval_recs, "Recommendation file")->required()->envname("MSDREC_RECS");
    evaluate->add_option("--hidden", eval_hidden.input, "Hidden-half triplet file")
        ->required()
        ->envname("MSDREC_HIDDEN");
    evaluate->add_option("--delimiter", eval_hidden.delimiter, "Field separator of the hidden triplets")
        ->capture_default_str();
    evaluate->add_option("--k", eval_k, "Truncation depth")->capture_default_str();
    evaluate->add_option("--mode", eval_mode, "AP normalization: challenge or paper")
        ->check(CLI::IsMember({"challenge", "paper"}))
        ->capture_default_str();
    evaluate->add_option("--per-user", eval_per_user, "Write per-user AP as TSV to this path");

    CommonInput split_in;
    double split_fraction = 0.5;
    std::uint64_t split_seed = Config{}.seed;
    std::string split_visible;
    std::string split_hidden;
    auto* split = app.add_subcommand("split", "Split each user's history into visible and hidden parts");
    add_input(split, split_in, "Triplet text file or binary dataset");
    split->add_option("--fraction", split_fraction, "Share of each history kept visible")->capture_default_str();
    split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
    split->add_option("--visible", split_visible, "Output triplet file for the visible part")
        ->required()
        ->envname("MSDREC_VISIBLE");
    split->add_option("--hidden", split_hidden, "Output triplet file for the hidden part")
        ->required()
        ->envname("MSDREC_HIDDEN");

    CommonInput stats_in;
    auto* stats = app.add_subcommand("stats", "Print dataset statistics");
    add_input(stats, stats_in, "Triplet text, binary dataset or index file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "msdrec: usage: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*ingest)
            return do_ingest(ingest_in, ingest_out, out, err);
        if (*build)
            return do_build(build_in, build_out, build_base, !build_no_idf, out, err);
        if (*recommend)
            return do_recommend(rec, out, err);
        if (*evaluate)
            return do_evaluate(eval_recs, eval_hidden, eval_k,
                               eval_mode == "paper" ? ApMode::paper_verbatim : ApMode::challenge, eval_per_user, out, err);
        if (*split)
            return do_split(split_in, split_fraction, split_seed, split_visible, split_hidden, out, err);
        if (*stats)
            return do_stats(stats_in, out);
    } catch (const StageError& e) {
        err << "msdrec: " << e.what() << '\n';
        return e.code;
    } catch (const std::exception& e) {
        err << "msdrec: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

} // namespace msdrec::cli
