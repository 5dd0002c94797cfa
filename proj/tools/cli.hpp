#pragma once

#include <iosfwd>

namespace skintone::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one `skintone` command line. Normal output goes to `out`, diagnostics
/// and usage text for bad invocations to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skintone::cli
