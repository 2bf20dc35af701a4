#pragma once

#include <iosfwd>

namespace flee::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadFlags = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitInternal = 4;

/// Entry point of the `flee` tool. Failures print one JSON error line to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flee::cli
