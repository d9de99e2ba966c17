#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "msdrec/core.hpp"
#include "msdrec/index.hpp"

namespace msdrec {

class EmptyIndex : public Error {
public:
    EmptyIndex() : Error("index has no users") {}
};

/// Per-track inverse document frequency, idf_t = log_base(n_users / df_t).
struct IdfTable {
    std::vector<double> values;
    std::uint32_t n_users = 0;
    double log_base = std::numbers::e;

    [[nodiscard]] double operator[](TrackIndex t) const { return values[t]; }

    friend bool operator==(const IdfTable&, const IdfTable&) = default;
};

/// Tracks with no listeners get 0; they never take part in scoring.
IdfTable compute_idf(const InteractionIndex& index, double log_base = std::numbers::e);

} // namespace msdrec
