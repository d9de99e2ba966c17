#pragma once

#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace msdrec {

using UserIndex = std::uint32_t;
using TrackIndex = std::uint32_t;
using PlayCount = std::uint32_t;

/// Largest number of distinct ids a vocabulary may hold; indexes are 32-bit.
inline constexpr std::uint64_t kMaxVocabularySize = std::numeric_limits<std::uint32_t>::max();

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class CapacityOverflow : public Error {
public:
    using Error::Error;
};

namespace detail {

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

} // namespace detail

/// Bidirectional map between opaque external ids and dense indexes, in first-seen order.
class Vocabulary {
public:
    std::uint32_t intern(std::string_view id);

    /// Index of a known id, or -1 if absent.
    [[nodiscard]] std::int64_t find(std::string_view id) const;
    [[nodiscard]] const std::string& lookup(std::uint32_t index) const { return externals_.at(index); }
    [[nodiscard]] bool contains(std::string_view id) const { return find(id) >= 0; }
    [[nodiscard]] std::size_t size() const noexcept { return externals_.size(); }
    [[nodiscard]] bool empty() const noexcept { return externals_.empty(); }
    [[nodiscard]] const std::vector<std::string>& externals() const noexcept { return externals_; }

    void reserve(std::size_t n);

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.externals_ == b.externals_; }

private:
    std::vector<std::string> externals_;
    std::unordered_map<std::string, std::uint32_t, detail::StringHash, std::equal_to<>> index_;
};

enum class PadStrategy { dummy, popularity };
enum class ApMode { challenge, paper_verbatim };

std::string_view to_string(PadStrategy p);
std::string_view to_string(ApMode m);

/// Run configuration. Defaults reproduce the published system: s = 0.4, k = 500,
/// identity transfer on similarities, dummy padding.
struct Config {
    double s = 0.4;
    std::uint32_t k = 500;
    double log_base = std::numbers::e;
    bool exclude_seen = true;
    PadStrategy pad_strategy = PadStrategy::dummy;
    ApMode ap_mode = ApMode::challenge;
    std::uint64_t seed = 42;
    /// Skip tracks whose posting list is longer than this during candidate
    /// generation. 0 disables the cap.
    std::uint64_t max_posting = 0;

    /// Throws ConfigError on out-of-range fields.
    void validate() const;

    /// Single-line `key=value` rendering of every field.
    [[nodiscard]] std::string describe() const;
};

} // namespace msdrec
