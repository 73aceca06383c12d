#include "jetlift/localfunction.hpp"

#include "jetlift/errors.hpp"

namespace jetlift {

Rat rat_parse(const std::string& s) {
    check_arg(!s.empty(), "empty rational literal");
    size_t i = 0;
    if (s[0] == '-') i = 1;
    bool seen_digit = false, seen_slash = false;
    for (size_t k = i; k < s.size(); ++k) {
        char c = s[k];
        if (c >= '0' && c <= '9') {
            seen_digit = true;
        } else if (c == '/' && !seen_slash && seen_digit && k + 1 < s.size()) {
            seen_slash = true;
        } else {
            throw JetliftError("bad rational literal: " + s);
        }
    }
    check_arg(seen_digit, "bad rational literal: " + s);
    Rat q(s);
    q.canonicalize();
    check_arg(!seen_slash || q != 0 || s.find("/0") == std::string::npos,
              "zero denominator: " + s);
    return q;
}

LocalFunction LocalFunction::constant(int dim, const Rat& c) {
    LocalFunction f(dim);
    f.add_term(Monomial{MultiIndex(dim), {}}, c);
    return f;
}

LocalFunction LocalFunction::x(int dim, int axis) {
    check_arg(axis >= 1 && axis <= dim, "x axis out of range");
    LocalFunction f(dim);
    f.add_term(Monomial{MultiIndex(dim).raised(axis), {}}, Rat(1));
    return f;
}

LocalFunction LocalFunction::u(int dim, const MultiIndex& J) {
    check_arg(J.dim() == dim, "jet index dimension mismatch");
    LocalFunction f(dim);
    f.add_term(Monomial{MultiIndex(dim), {{J, 1}}}, Rat(1));
    return f;
}

LocalFunction LocalFunction::monomial(int dim, const Monomial& m, const Rat& c) {
    LocalFunction f(dim);
    f.add_term(m, c);
    return f;
}

bool LocalFunction::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    const Monomial& m = terms_.begin()->first;
    return m.x.order() == 0 && m.u.empty();
}

Rat LocalFunction::constant_value() const {
    if (terms_.empty()) return Rat(0);
    check_arg(is_constant(), "not a constant");
    return terms_.begin()->second;
}

void LocalFunction::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LocalFunction LocalFunction::operator+(const LocalFunction& g) const {
    check_arg(dim_ == g.dim_ || is_zero() || g.is_zero(), "dimension mismatch in +");
    LocalFunction r = *this;
    r += g;
    return r;
}

LocalFunction& LocalFunction::operator+=(const LocalFunction& g) {
    if (dim_ == 0 && !g.is_zero()) dim_ = g.dim_;
    check_arg(dim_ == g.dim_ || g.is_zero(), "dimension mismatch in +=");
    for (const auto& [m, c] : g.terms_) add_term(m, c);
    return *this;
}

LocalFunction LocalFunction::operator-(const LocalFunction& g) const {
    return *this + (-g);
}

LocalFunction LocalFunction::operator-() const { return scaled(Rat(-1)); }

LocalFunction LocalFunction::scaled(const Rat& c) const {
    LocalFunction r(dim_);
    if (c == 0) return r;
    for (const auto& [m, q] : terms_) r.terms_.emplace(m, q * c);
    return r;
}

LocalFunction LocalFunction::operator*(const LocalFunction& g) const {
    check_arg(dim_ == g.dim_ || is_zero() || g.is_zero(), "dimension mismatch in *");
    LocalFunction r(is_zero() ? g.dim_ : dim_);
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : g.terms_) {
            Monomial m;
            m.x = m1.x;
            for (int i = 1; i <= dim_; ++i) m.x.at(i) += m2.x[i];
            m.u = m1.u;
            for (const auto& [J, e] : m2.u) m.u[J] += e;
            r.add_term(m, c1 * c2);
        }
    }
    return r;
}

bool LocalFunction::operator==(const LocalFunction& g) const {
    return terms_ == g.terms_;
}

LocalFunction LocalFunction::partial_x(int axis) const {
    check_arg(axis >= 1 && axis <= dim_, "x axis out of range");
    LocalFunction r(dim_);
    for (const auto& [m, c] : terms_) {
        int e = m.x[axis];
        if (e == 0) continue;
        Monomial d = m;
        d.x.at(axis) -= 1;
        r.add_term(d, c * e);
    }
    return r;
}

LocalFunction LocalFunction::partial_u(const MultiIndex& J) const {
    check_arg(J.dim() == dim_, "jet index dimension mismatch");
    LocalFunction r(dim_);
    for (const auto& [m, c] : terms_) {
        auto it = m.u.find(J);
        if (it == m.u.end()) continue;
        Monomial d = m;
        int e = it->second;
        if (e == 1) {
            d.u.erase(J);
        } else {
            d.u[J] = e - 1;
        }
        r.add_term(d, c * e);
    }
    return r;
}

LocalFunction LocalFunction::total_derivative(int axis) const {
    LocalFunction r = partial_x(axis);
    for (const MultiIndex& J : jet_vars()) {
        r += partial_u(J) * u(dim_, J.raised(axis));
    }
    return r;
}

LocalFunction LocalFunction::total_derivative_multi(const MultiIndex& I) const {
    LocalFunction r = *this;
    for (int i = 1; i <= I.dim(); ++i) {
        for (int k = 0; k < I[i]; ++k) r = r.total_derivative(i);
    }
    return r;
}

std::set<MultiIndex> LocalFunction::jet_vars() const {
    std::set<MultiIndex> vars;
    for (const auto& [m, c] : terms_) {
        for (const auto& [J, e] : m.u) vars.insert(J);
    }
    return vars;
}

int LocalFunction::max_jet_order() const {
    int best = -1;
    for (const auto& [m, c] : terms_) {
        for (const auto& [J, e] : m.u) best = std::max(best, J.order());
    }
    return best;
}

int LocalFunction::max_x_degree() const {
    int best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, m.x.order());
    return best;
}

} // namespace jetlift
