#include "msdrec/idf.hpp"

#include <cmath>

namespace msdrec {

IdfTable compute_idf(const InteractionIndex& index, double log_base) {
    if (index.n_users() == 0)
        throw EmptyIndex();
    if (!(log_base > 0.0) || log_base == 1.0 || !std::isfinite(log_base))
        throw ConfigError("log_base must be positive, finite and != 1");

    IdfTable table;
    table.n_users = index.n_users();
    table.log_base = log_base;
    table.values.resize(index.n_tracks());

    const bool natural = log_base == std::numbers::e;
    const double ln_base = std::log(log_base);
    const auto n = static_cast<double>(index.n_users());
    for (TrackIndex t = 0; t < index.n_tracks(); ++t) {
        const std::uint32_t df = index.df(t);
        if (df == 0) {
            table.values[t] = 0.0;
            continue;
        }
        const double ln = std::log(n / static_cast<double>(df));
        table.values[t] = natural ? ln : ln / ln_base;
    }
    return table;
}

} // namespace msdrec
