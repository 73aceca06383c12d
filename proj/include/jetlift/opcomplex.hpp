#pragma once

#include "jetlift/horiforms.hpp"
#include "jetlift/ldo.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace jetlift {

// Operator-valued horizontal k-form: wedge components carry arity-n local
// differential operators, kept in polarized mode internally. The bigrade
// of a term is (p, q) with q its diagonal-letter degree and p = k - q.
class OperatorForm {
public:
    OperatorForm() : dim_(0), arity_(0), degree_(0) {}
    OperatorForm(int dim, int arity, int degree);

    int dim() const { return dim_; }
    int arity() const { return arity_; }
    int degree() const { return degree_; }
    bool is_zero() const { return comps_.empty(); }
    const std::map<uint32_t, Ldo>& components() const { return comps_; }
    // Zero operator when the subset carries no component.
    Ldo component(uint32_t mask) const;

    // Accepts either mode; stores the polarized form.
    void add_component(uint32_t mask, const Ldo& a);

    OperatorForm operator+(const OperatorForm& o) const;
    OperatorForm operator-(const OperatorForm& o) const;
    OperatorForm scaled(const Rat& c) const;
    bool operator==(const OperatorForm& o) const;
    bool operator!=(const OperatorForm& o) const { return !(*this == o); }

    // Highest diagonal-letter degree over all terms; -1 when zero.
    int max_zeta_degree() const;
    // The sub-form of terms with diagonal-letter degree exactly q.
    OperatorForm zeta_block(int q) const;

    std::string str() const;

private:
    int dim_;
    int arity_;
    int degree_;
    std::map<uint32_t, Ldo> comps_;
};

// Coefficient-derivative part: preserves the diagonal degree q.
OperatorForm d1(const OperatorForm& f);
// Diagonal-letter part: raises q by one.
OperatorForm d2(const OperatorForm& f);
// Full differential d1 + d2; componentwise d/dx^i composition with wedge
// signs. Top degree maps to the zero top-degree form.
OperatorForm d_op(const OperatorForm& f);

// Contracting homotopy for d2 on a block of fixed bigrade (p, q) with
// p < N and q >= 1: returns alpha of degree k-1 with d2(alpha) = z for
// d2-closed z. Throws when z is not closed, mixes diagonal degrees, has
// q = 0 nonzero data, or sits at p = N.
OperatorForm koszul_solve(const OperatorForm& z);

struct TopReduction {
    OperatorForm tilde; // degree N-1
    OperatorForm chi;   // degree N, free of diagonal letters
};

// Splits a top-degree form as A = d_op(tilde) + chi by stripping diagonal
// letters one at a time (smallest axis first); chi is the componentwise
// characteristic embedded in top degree.
TopReduction reduce_top(const OperatorForm& a);

// Solves d_op(X) = Y for closed Y of degree 1 <= k < N by descending the
// diagonal-degree staircase with koszul_solve. Closed degree-0 forms are
// necessarily zero (the complex is acyclic there); the zero form of
// degree 0 is returned for them.
OperatorForm solve_d(const OperatorForm& y);

OperatorForm random_opform(Rng& rng, int dim, int arity, int degree,
                           const LdoGenParams& p = {});

// Feed one local function per slot to every wedge component.
HorizontalForm opform_apply(const OperatorForm& a,
                            const std::vector<LocalFunction>& args);

} // namespace jetlift
