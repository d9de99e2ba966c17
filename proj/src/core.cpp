#include "msdrec/core.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace msdrec {

std::uint32_t Vocabulary::intern(std::string_view id) {
    if (auto it = index_.find(id); it != index_.end())
        return it->second;
    if (externals_.size() >= kMaxVocabularySize)
        throw CapacityOverflow("vocabulary exceeds 32-bit index range");
    const auto next = static_cast<std::uint32_t>(externals_.size());
    externals_.emplace_back(id);
    index_.emplace(externals_.back(), next);
    return next;
}

std::int64_t Vocabulary::find(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

void Vocabulary::reserve(std::size_t n) {
    externals_.reserve(n);
    index_.reserve(n);
}

std::string_view to_string(PadStrategy p) {
    return p == PadStrategy::dummy ? "dummy" : "popularity";
}

std::string_view to_string(ApMode m) {
    return m == ApMode::challenge ? "challenge" : "paper";
}

void Config::validate() const {
    if (!(s >= 0.0 && s <= 1.0))
        throw ConfigError("s must lie in [0, 1]");
    if (k == 0)
        throw ConfigError("k must be at least 1");
    if (!(log_base > 0.0) || log_base == 1.0 || !std::isfinite(log_base))
        throw ConfigError("log_base must be positive, finite and != 1");
}

std::string Config::describe() const {
    // Shortest round-trip rendering so the line reproduces the run exactly.
    const auto real = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::ostringstream os;
    os << "s=" << real(s) << " k=" << k << " log_base=" << real(log_base)
       << " exclude_seen=" << (exclude_seen ? "true" : "false")
       << " pad=" << to_string(pad_strategy) << " ap_mode=" << to_string(ap_mode)
       << " seed=" << seed << " max_posting=" << max_posting;
    return os.str();
}

} // namespace msdrec
