#pragma once

#include <iosfwd>

namespace mats::cli {

// Stable exit codes.
enum Exit : int {
    kOk = 0,
    kViolated = 1,
    kInvalid = 2,  // bad config, bad flags, malformed trace
    kIo = 3,
    kUnclassified = 4,
    kInconclusive = 5,  // inapplicable, pending, budget-bounded
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mats::cli
