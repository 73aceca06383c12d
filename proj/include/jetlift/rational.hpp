#pragma once

#include <gmpxx.h>

#include <string>

namespace jetlift {

// Exact rational coefficients. mpq_class keeps values canonicalized
// (reduced, positive denominator) through arithmetic.
using Rat = mpq_class;

// Canonical text form: "p" when the denominator is 1, else "p/q".
inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Parses "p", "-p", "p/q", "-p/q". Throws JetliftError on anything else.
Rat rat_parse(const std::string& s);

} // namespace jetlift
