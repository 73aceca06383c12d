#pragma once

#include "jetlift/multiindex.hpp"
#include "jetlift/rational.hpp"

#include <map>
#include <set>

namespace jetlift {

// One monomial in the differential polynomial ring: x-exponents plus a
// finitely supported exponent map on the jet variables u_J.
struct Monomial {
    MultiIndex x;
    std::map<MultiIndex, int> u;

    bool operator==(const Monomial& o) const { return x == o.x && u == o.u; }
    bool operator<(const Monomial& o) const {
        if (x != o.x) return x < o.x;
        return u < o.u;
    }
};

// Element of Loc(E): a polynomial in x^1..x^N and the jet variables u_J
// with exact rational coefficients. Zero coefficients are never stored.
class LocalFunction {
public:
    LocalFunction() : dim_(0) {}
    explicit LocalFunction(int dim) : dim_(dim) {}

    static LocalFunction constant(int dim, const Rat& c);
    static LocalFunction x(int dim, int axis);
    static LocalFunction u(int dim, const MultiIndex& J);
    static LocalFunction monomial(int dim, const Monomial& m, const Rat& c);

    int dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_value() const; // requires is_constant()

    const std::map<Monomial, Rat>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    void add_term(const Monomial& m, const Rat& c);

    LocalFunction operator+(const LocalFunction& g) const;
    LocalFunction operator-(const LocalFunction& g) const;
    LocalFunction operator-() const;
    LocalFunction operator*(const LocalFunction& g) const;
    LocalFunction& operator+=(const LocalFunction& g);
    LocalFunction scaled(const Rat& c) const;
    bool operator==(const LocalFunction& g) const;
    bool operator!=(const LocalFunction& g) const { return !(*this == g); }

    LocalFunction partial_x(int axis) const;
    LocalFunction partial_u(const MultiIndex& J) const;
    // d/dx^i = ∂/∂x^i + Σ_J u_{iJ} ∂/∂u_J (finite on polynomials).
    LocalFunction total_derivative(int axis) const;
    LocalFunction total_derivative_multi(const MultiIndex& I) const;

    // Canonical text form (grammar-compatible, deterministic term order).
    std::string str() const;

    // Distinct jet variables appearing in some term.
    std::set<MultiIndex> jet_vars() const;
    // Highest |J| over jet variables present; -1 when none.
    int max_jet_order() const;
    int max_x_degree() const;

private:
    int dim_;
    std::map<Monomial, Rat> terms_;
};

} // namespace jetlift
