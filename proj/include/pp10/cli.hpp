#pragma once

#include <iosfwd>

namespace pp10::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kResourceLimit = 3 };

/// Environment variable that overrides the pipeline output directory.
inline constexpr const char *kOutputDirEnv = "PP10_OUTPUT_DIR";

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace pp10::cli
