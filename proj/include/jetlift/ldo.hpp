#pragma once

#include "jetlift/localfunction.hpp"
#include "jetlift/rng.hpp"

#include <map>
#include <string>
#include <vector>

namespace jetlift {

// Letter exponents of one slot inside a normal-form term.
//
// Unpolarized mode: slot j (1-based) stores the exponents of the total-
// derivative letters acting on argument j (xi) and the vertical letters
// (eta: jet index -> power).
//
// Polarized mode: slot 1's xi holds the diagonal letter exponents (the
// substitution xi_1 = zeta - xi_2 - ... - xi_n has been performed); slots
// j >= 2 keep their own xi letters. Eta letters are unaffected by the mode.
struct SlotWord {
    MultiIndex xi;
    std::map<MultiIndex, int> eta;

    bool operator==(const SlotWord& o) const { return xi == o.xi && eta == o.eta; }
    bool operator<(const SlotWord& o) const {
        if (!(xi == o.xi)) return xi < o.xi;
        return eta < o.eta;
    }
};

struct LdoKey {
    std::vector<SlotWord> slots;

    bool operator==(const LdoKey& o) const { return slots == o.slots; }
    bool operator<(const LdoKey& o) const { return slots < o.slots; }
};

// Multilinear local differential operator in canonical normal form:
// finite sum of coefficient * (xi letters) * (eta letters), eta applied
// first. Terms with equal letter words are merged; zero coefficients
// are dropped, so equality is map equality.
class Ldo {
public:
    Ldo() : dim_(0), arity_(0), polarized_(false) {}
    Ldo(int dim, int arity, bool polarized = false);

    static Ldo identity(int dim); // arity 1, empty word
    // Coefficient operator: f * (product of all arguments).
    static Ldo coefficient(int dim, int arity, const LocalFunction& f);
    static Ldo xi(int dim, int arity, int slot, int axis);
    static Ldo eta(int dim, int arity, int slot, const MultiIndex& J);

    int dim() const { return dim_; }
    int arity() const { return arity_; }
    bool polarized() const { return polarized_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<LdoKey, LocalFunction>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    void add_term(const LdoKey& key, const LocalFunction& coeff);

    Ldo operator+(const Ldo& b) const;
    Ldo operator-(const Ldo& b) const;
    Ldo operator-() const;
    Ldo& operator+=(const Ldo& b);
    Ldo scaled(const Rat& c) const;
    bool operator==(const Ldo& b) const;
    bool operator!=(const Ldo& b) const { return !(*this == b); }

    // Normal-ordering prepends: the letter (or coefficient) is multiplied
    // onto the left of the whole operator and rewritten to normal form.
    // xi past a coefficient: xi^i_j q = (dq/dx^i) + q xi^i_j.
    // eta past a coefficient: eta^j_J q = (dq/du_J) + q eta^j_J.
    // eta past same-slot xi^K: binomial lowering (iterated commutator).
    Ldo prepend_xi(int slot, int axis) const;
    Ldo prepend_eta(int slot, const MultiIndex& J) const;
    Ldo premultiply(const LocalFunction& f) const;

    // Evaluation per the normal form: slot-wise (D^I on (d/du)^alpha f).
    LocalFunction apply(const std::vector<LocalFunction>& args) const;

    // Operadic composition gamma(outer; inner[0..l-1]); arity of the
    // result is the sum of inner arities. All operands unpolarized.
    static Ldo compose(const Ldo& outer, const std::vector<Ldo>& inner);
    // gamma(this; id, .., B at position slot, .., id).
    Ldo compose_slot(int slot, const Ldo& b) const;

    // Slot relabeling: sym_action(sigma, A)(f_1..f_n) = A(f_{sigma^-1(1)}..).
    // sigma[m-1] = sigma(m), values 1-based.
    Ldo sym_action(const std::vector<int>& sigma) const;

    Ldo polarized_form() const;
    Ldo depolarized_form() const;

    // chi: in polarized letters, q zeta^I xi eta -> (-1)^|I| (D^I q) xi eta.
    // Output has no diagonal letters; returned in the input's mode.
    Ldo characteristic() const;

    // Formal adjoint; restricted to arity 1 operators with no eta letters.
    Ldo adjoint() const;

    // Derivation sending eta^j_J to eta^j_{J/i} (zero when J_i = 0).
    Ldo theta(int axis, int slot) const;

    // d/dx^i applied to every coefficient (letters untouched).
    Ldo coeff_total_derivative(int axis) const;

    // Left multiplication by a single letter without rewriting: bumps the
    // letter's exponent. In polarized mode, letter_bump on slot 1 bumps
    // the diagonal (zeta) exponent.
    Ldo letter_bump(int slot, int axis) const;

    // A composed with the total derivative D_i acting on argument `slot`:
    // A o D^i_j = (xi^i_j * A) + Theta^i_j A, written in A's mode.
    Ldo compose_total_derivative(int axis, int slot) const;

    // D_i o A = (coefficient derivative) + (sum of slot bumps; zeta bump
    // when polarized).
    Ldo total_derivative_compose(int axis) const;

    // Largest diagonal-letter order over terms (polarized mode).
    int max_zeta_order() const;
    // min over terms of (largest |J| among the term's eta letters);
    // -1 if some term carries no eta letter at all; INT_MAX when zero.
    int drop_floor() const;
    int max_eta_order() const;

    std::string str() const;

private:
    int dim_;
    int arity_;
    bool polarized_;
    std::map<LdoKey, LocalFunction> terms_;

    void check_same_shape(const Ldo& b) const;
};

struct LdoGenParams {
    LfGenParams coeff;
    int max_terms = 3;
    int max_xi_order = 2;
    int max_eta_letters = 2;
    int max_eta_order = 2;
};

Ldo random_ldo(Rng& rng, int dim, int arity, const LdoGenParams& p = {});

} // namespace jetlift
