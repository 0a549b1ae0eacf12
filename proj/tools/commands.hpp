#pragma once
// Command-line front end; run() is the whole program minus process exit.

#include <iosfwd>
#include <string>
#include <vector>

namespace unfold::cli {

enum ExitCode : int {
    kOk = 0,
    kFailed = 1,        // verification or continuation checks failed
    kNoConvergence = 2,
    kInfeasible = 3,    // Fuchs condition violated
    kPathLeftBH = 4,
    kUsage = 64,
    kData = 65,
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unfold::cli
