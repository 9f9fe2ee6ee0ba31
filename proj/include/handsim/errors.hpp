#pragma once

#include <stdexcept>
#include <string>

namespace handsim {

// Error categories map 1:1 onto CLI exit codes (see docs/spec_format.md):
// validation -> 2, unreachable -> 3, singular -> 4, parse -> 5.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnreachableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace handsim
