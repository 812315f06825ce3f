#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tomoscope::cli {

/// Exit codes: 0 pass or success, 2 fail or hypothesis failed, 1 usage or
/// input error (one diagnostic line on err).
enum ExitCode { kExitPass = 0, kExitUsage = 1, kExitFail = 2 };

/// args excludes the program name. The JSON report goes to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tomoscope::cli
