#pragma once

#include <iosfwd>

namespace msdrec::cli {

/// Exit codes: 0 success, 1 data or IO error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `msdrec` invocation. Normal output goes to `out`, diagnostics
/// and the effective-configuration log line to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace msdrec::cli
