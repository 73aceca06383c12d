#pragma once

#include "jetlift/horiforms.hpp"
#include "jetlift/opcomplex.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace jetlift {

// Degree-k element of the endomorphism operad of the regraded horizontal
// complex (the regraded degree of a classical p-form is dim - p, so d_H
// has degree -1). An element is a family of operator-valued forms
// F^{eps_1..eps_n} indexed by one wedge subset per slot; the family at
// level s = n*dim - sum|eps_j| is a map from level-s inputs to level
// s + k outputs and is stored as an OperatorForm of form degree
// dim - s - k. Admissible levels are max(-k,0) <= s <= min(n*dim, dim-k).
// Zero families are dropped.
class DEndElement {
public:
    DEndElement() : dim_(0), arity_(0), degree_(0) {}
    DEndElement(int dim, int arity, int degree);

    int dim() const { return dim_; }
    int arity() const { return arity_; }
    int degree() const { return degree_; }
    bool is_zero() const { return families_.empty(); }

    int min_level() const;
    int max_level() const;
    // Form degree of the family at level s.
    int form_degree(int s) const { return dim_ - s - degree_; }
    int level_of(const std::vector<std::uint32_t>& eps) const;

    const std::map<std::vector<std::uint32_t>, OperatorForm>& families() const {
        return families_;
    }
    // Zero form of the right shape when the key carries no family.
    OperatorForm family(const std::vector<std::uint32_t>& eps) const;

    void add_family(const std::vector<std::uint32_t>& eps, const OperatorForm& f);

    DEndElement operator+(const DEndElement& o) const;
    DEndElement operator-(const DEndElement& o) const;
    DEndElement scaled(const Rat& c) const;
    bool operator==(const DEndElement& o) const;
    bool operator!=(const DEndElement& o) const { return !(*this == o); }

    std::string str() const;

private:
    int dim_;
    int arity_;
    int degree_;
    std::map<std::vector<std::uint32_t>, OperatorForm> families_;

    void check_key(const std::vector<std::uint32_t>& eps) const;
};

// Sign of reordering graded symbols of the given degrees into the order
// (degs[sigma(1)-1], ...): product of (-1)^(d_a d_b) over crossings.
// sigma[m-1] = sigma(m), values 1-based.
Rat koszul_sign(const std::vector<int>& sigma, const std::vector<int>& degs);
// Plain signature of the permutation.
int perm_sign(const std::vector<int>& sigma);

// The differential: (delta f)_s = d_H f_s - (-1)^k f_{s-1} d_H^{(x)n}.
// Componentwise, (delta f)^{eps} = d_op F^{eps}
//   - (-1)^k sum_{j, i not in eps_j}
//       (-1)^{sum_{l<j}(dim - |eps_l|) + pos(i, eps_j)} F^{..,i eps_j,..} o D^i_j,
// where pos is the wedge insertion position. Squares to zero.
DEndElement dend_delta(const DEndElement& f);

// Evaluate on one horizontal form per slot. The target form degree
// dim - s - k must lie in [0, dim]; out-of-range applications are
// grading violations and throw.
HorizontalForm dend_apply(const DEndElement& f,
                          const std::vector<HorizontalForm>& args);

// Operadic composite plugging g into the given slot of f. Each family
// picks up the Koszul sign (-1)^{|g| (m_1+..+m_{slot-1})} for carrying g
// past the arguments left of the slot, m_l being the regraded key degree.
DEndElement dend_compose(const DEndElement& f, int slot, const DEndElement& g);

// Slot relabeling with Koszul signs from the regraded input degrees:
// (sigma . f)(w_1..w_n) = e(sigma^-1; degrees) f(w_{sigma^-1(1)}..).
DEndElement dend_sym_action(const std::vector<int>& sigma, const DEndElement& f);

// The lifting obstructions chi(A o D^i_j), indexed [axis-1][slot-1].
std::vector<std::vector<Ldo>> a0(const Ldo& a);
// With window < 0 the obstructions must vanish exactly. A window W >= 0
// accepts obstructions whose every term keeps an eta letter of order
// above W: those annihilate all argument tuples of jet order <= W, so
// the lift is exact on that window.
bool is_liftable(const Ldo& a, int window = -1);

// Degree-0 cycle f with bottom component A, built level by level: the
// first level by top reduction, deeper levels by the staircase solver.
// Throws when some chi(A o D^i_j) survives the window, naming the
// offending pair.
DEndElement lift(const Ldo& a, int window = -1);

// Cheap lift for chi(A) = 0: the top reduction writes A = d_op(tilde),
// level 1 is tilde composed into each slot derivative, all deeper levels
// vanish. The bounding element of degree 1 whose delta is this lift is
// the single family tilde at the all-full key.
DEndElement lift_null(const Ldo& a);

// Arity-1 lift choosing every level s >= 2 diagonal, equal to the
// characteristic of A (a constant-coefficient chain map once all
// chi(A o D^i) vanish); level 1 is the diagonal plus tilde o D^i.
DEndElement lift_diagonal(const Ldo& a);

// Solves delta h = g for g of degree k >= 1 with delta g = 0 (checked),
// by induction over levels; every step is one staircase solve.
DEndElement solve_delta(const DEndElement& g);

// Degree-0 analogue of solve_delta: the top level is a top reduction, so
// a characteristic obstruction can survive there and the window decides
// whether it is accepted (then delta h = g holds up to terms that kill
// every argument tuple of jet order <= window) or fatal.
DEndElement bound_cycle(const DEndElement& g, int window = -1);

// Bottom projection of a degree-0 element: the top component of the
// all-full family.
Ldo ladder_b0(const DEndElement& f);
// Degree-1 elements: the top component of d_op of the all-full family.
// Its characteristic vanishes.
Ldo ladder_b1(const DEndElement& h);
// Degree-(-1) elements: signed characteristics of the level-1 families,
// indexed [axis-1][slot-1]; makes the square with a0 and delta commute.
std::vector<std::vector<Ldo>> ladder_bm1(const DEndElement& g);

DEndElement random_dend(Rng& rng, int dim, int arity, int degree,
                        const LdoGenParams& p = {});

} // namespace jetlift
