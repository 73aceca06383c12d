#pragma once

#include <stdexcept>
#include <string>

namespace jetlift {

// Thrown on domain violations: dimension/arity mismatches, bad axes,
// unsupported operator classes, unsolvable inputs.
struct JetliftError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void check_arg(bool ok, const std::string& msg) {
    if (!ok) throw JetliftError(msg);
}

} // namespace jetlift
