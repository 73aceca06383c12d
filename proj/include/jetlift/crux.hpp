#pragma once

#include "jetlift/ldo.hpp"

#include <vector>

namespace jetlift {

struct CruxReport {
    bool all_ok = true;
    // crux_ok[i-1]: sum_j Theta^i_j chi' = d/dx^i chi'
    std::vector<bool> crux_ok;
    // crux2_ok[i-1][j-2]: Theta^i_j chi' = -xi^i_j * chi' (slots j >= 2)
    std::vector<std::vector<bool>> crux2_ok;
};

// Evaluates the symbol-character relations on chi' = characteristic(A).
// All-true is equivalent to chi(A o d/dx^i_j) = 0 for every axis and slot.
// Arity must be >= 2 (the linear analogue is chi-constancy).
CruxReport check_crux(const Ldo& A);

struct ExtendResult {
    Ldo chi; // polarized, diagonal-letter-free
    bool consistent = true;
    bool underdetermined = false;
    std::string detail;
};

// Extends a weight-0 character part (all eta letters of jet order 0) to
// the unique solution of the character relations, truncated at total
// eta-weight <= bound. Inconsistent data is reported, not thrown.
ExtendResult extend_minimal(const Ldo& minimal, int bound);

} // namespace jetlift
