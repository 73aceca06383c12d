#pragma once

#include "jetlift/lifting.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace jetlift {

// Truncated variational derivative sum_{|I| <= order} (-1)^|I| D^I d/du_I
// as an arity-1 operator. Agrees with the exact Euler operator on every
// input of jet order <= order; no finite operator matches it everywhere.
Ldo euler_ldo(int dim, int order);

// The bilinear bracket (f, g) |-> E(f) (d/dx E(g)) dx on one independent
// variable, with E the truncated variational derivative. Its symmetry
// condition holds exactly. The truncation obstructs the other two
// conditions: the insertion characteristics have drop floor exactly
// `order`, the Jacobi characteristic has drop floor ceil(order/2), so
// the bracket passes check_poisson_conditions on any window strictly
// below ceil(order/2) and on no larger window.
OperatorForm kdv_bracket(int order);

// Windowed death certificate: true when every term of every component
// keeps an eta letter of order above the window, so the operator kills
// all argument tuples of jet order <= window. window < 0 demands zero.
bool dies_on_window(const Ldo& a, int window);
bool dies_on_window(const OperatorForm& f, int window);
bool dies_on_window(const DEndElement& f, int window);

// The three bracket conditions with their characteristic obstructions:
// liftability of chi(A o D^i_j) for every axis and slot, symmetry
// chi(A + A tau), and the three-term unshuffle Jacobi sum. A is the top
// component of the bilinear operator form.
struct PoissonCheck {
    bool liftable = false;
    bool antisymmetric = false;
    bool jacobi = false;
    std::vector<std::vector<Ldo>> chi_insert; // [axis-1][slot-1]
    Ldo chi_sym;
    Ldo chi_jacobi;
    bool all() const { return liftable && antisymmetric && jacobi; }
    std::string str() const;
};

PoissonCheck check_poisson_conditions(const OperatorForm& lt2, int window = -1);

// Subtracts d_op of half the symmetrized top reduction of lt2 + lt2 tau,
// changing the bracket by exact terms only. When the symmetrization has
// an exactly vanishing characteristic (as the truncated KdV bracket does)
// the output satisfies out + out tau = 0 exactly; a surviving-but-dying
// characteristic leaves a symmetric remainder that dies on the window.
// The lifting obstructions of lt2 are preserved exactly. Throws when the
// symmetrization characteristic survives the window.
OperatorForm skew_symmetrize(const OperatorForm& lt2, int window = -1);

// Unshuffles of type (k, p): permutations of 1..k+p increasing on the
// first k and on the last p values, listed as images sigma(1), ...
std::vector<std::vector<int>> unshuffles(int k, int p);

// Average of the signed symmetric-group action: projects onto
// antisymmetric elements and commutes with delta.
DEndElement alternate(const DEndElement& f);

// Three-term unshuffle alternation of l2 o_1 l2, a degree-0 arity-3
// element; it is a cycle whenever l2 is one. Gate: delta l2 must die on
// the window.
DEndElement jacobiator(const DEndElement& l2, int window = -1);

struct ShLieTower {
    int dim = 0;
    int kmax = 1;
    int window = -1;
    // Arity k -> the bracket l_k, for 2 <= k <= kmax. The unary bracket
    // is the horizontal differential and is not stored.
    std::map<int, DEndElement> brackets;
    // Arity k -> delta l_k + defect_k, the defect of the k-th structure
    // identity. Zero for an exact tower; for a windowed tower every term
    // must die on the window.
    std::map<int, DEndElement> residuals;

    const DEndElement& bracket(int k) const;
    // Largest jet order the structure identities are certified on: one
    // below the smallest drop floor over all residual terms. INT_MAX when
    // every residual vanishes identically, -1 when nothing is certified.
    int certified_order() const;
};

// The arity-n quadratic defect
//   sum_{i+j=n+1, i,j>=2} (-1)^{i(j-1)}
//     sum_{sigma in unshuffles(i, n-i)} sign(sigma) sigma^{-1} . (l_j o_1 l_i);
// the n-th structure identity reads delta l_n = -defect_n.
DEndElement shlie_defect(const ShLieTower& t, int n);

// l_2 is the alternation of a lift of the skew-symmetrized bracket; each
// higher bracket bounds its negated defect (a defect that dies on the
// window yields the zero bracket). Throws with the failing characteristic
// when a gate fails.
ShLieTower build_tower(const OperatorForm& lt2, int kmax, int window = -1);

// The arity-n structure identity evaluated on one tuple: the signed sum
// over (i, j) splittings and unshuffles of l_j(l_i(args...), args...),
// with the unary bracket acting as the horizontal differential. The
// common target degree N - sum(N - deg args) - (n - 3) must lie in
// [0, N]; other tuples satisfy the identity for degree reasons.
HorizontalForm shlie_relation(const ShLieTower& t, int n,
                              const std::vector<HorizontalForm>& args);

struct ShLieVerifyEntry {
    int arity = 0;
    int checked = 0;
    int failures = 0;
};

struct ShLieVerifyReport {
    int nmax = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<ShLieVerifyEntry> entries;
    bool ok() const;
    std::string str() const;
};

// Evaluates the structure identities for n = 1..nmax on random tuples of
// horizontal forms with admissible degrees, in exact arithmetic. Radius
// of trust: inputs drawn with the given generator parameters, so a
// windowed tower should be checked with max_jet_order <= window.
ShLieVerifyReport verify_shlie(const ShLieTower& t, int nmax, int trials,
                               std::uint64_t seed, const LfGenParams& p = {});

} // namespace jetlift
