#include "jetlift/horiforms.hpp"

#include "jetlift/errors.hpp"

#include <bit>

namespace jetlift {

HorizontalForm::HorizontalForm(int dim, int degree) : dim_(dim), degree_(degree) {
    check_arg(dim >= 1, "dimension must be positive");
    check_arg(degree >= 0 && degree <= dim, "form degree out of range");
}

LocalFunction HorizontalForm::component(uint32_t mask) const {
    auto it = comps_.find(mask);
    return it == comps_.end() ? LocalFunction(dim_) : it->second;
}

void HorizontalForm::add_component(uint32_t mask, const LocalFunction& f) {
    check_arg(mask < (1u << dim_), "subset outside the base axes");
    check_arg(std::popcount(mask) == degree_, "subset size must match the degree");
    if (f.is_zero()) return;
    check_arg(f.dim() == dim_, "component dimension mismatch");
    auto it = comps_.find(mask);
    if (it == comps_.end()) {
        comps_.emplace(mask, f);
    } else {
        it->second += f;
        if (it->second.is_zero()) comps_.erase(it);
    }
}

HorizontalForm HorizontalForm::operator+(const HorizontalForm& o) const {
    check_arg(dim_ == o.dim_ && degree_ == o.degree_, "form shape mismatch");
    HorizontalForm r = *this;
    for (const auto& [m, f] : o.comps_) r.add_component(m, f);
    return r;
}

HorizontalForm HorizontalForm::operator-(const HorizontalForm& o) const {
    return *this + o.scaled(Rat(-1));
}

HorizontalForm HorizontalForm::scaled(const Rat& c) const {
    HorizontalForm r(dim_, degree_);
    if (c == 0) return r;
    for (const auto& [m, f] : comps_) r.comps_.emplace(m, f.scaled(c));
    return r;
}

bool HorizontalForm::operator==(const HorizontalForm& o) const {
    return dim_ == o.dim_ && degree_ == o.degree_ && comps_ == o.comps_;
}

std::string HorizontalForm::str() const {
    if (comps_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, f] : comps_) {
        if (!first) s += " + ";
        first = false;
        std::string cs = f.str();
        if (degree_ == 0) {
            s += cs;
            continue;
        }
        if (f.term_count() > 1) cs = "(" + cs + ")";
        s += cs + "*dx[";
        bool fa = true;
        for (int i = 1; i <= dim_; ++i) {
            if (!(m & (1u << (i - 1)))) continue;
            if (!fa) s += ",";
            fa = false;
            s += std::to_string(i);
        }
        s += "]";
    }
    return s;
}

uint32_t full_mask(int dim) { return (1u << dim) - 1u; }

int wedge_pos(int axis, uint32_t mask) {
    return std::popcount(mask & ((1u << (axis - 1)) - 1u));
}

HorizontalForm dH(const HorizontalForm& w) {
    int N = w.dim();
    if (w.degree() == N) return HorizontalForm(N, N);
    HorizontalForm r(N, w.degree() + 1);
    for (const auto& [mask, f] : w.components()) {
        for (int i = 1; i <= N; ++i) {
            uint32_t bit = 1u << (i - 1);
            if (mask & bit) continue;
            LocalFunction df = f.total_derivative(i);
            if (wedge_pos(i, mask) % 2 == 1) df = -df;
            r.add_component(mask | bit, df);
        }
    }
    return r;
}

LocalFunction euler(const HorizontalForm& top) {
    check_arg(top.degree() == top.dim(), "euler needs a top-degree form");
    LocalFunction L = top.component(full_mask(top.dim()));
    LocalFunction r(top.dim());
    for (const MultiIndex& I : L.jet_vars()) {
        LocalFunction t = L.partial_u(I).total_derivative_multi(I);
        r += (I.order() % 2 == 1) ? -t : t;
    }
    return r;
}

namespace {

// Antiderivative in the single base variable; defined on u-free functions.
LocalFunction x_antiderivative(const LocalFunction& f) {
    LocalFunction r(f.dim());
    for (const auto& [m, c] : f.terms()) {
        Monomial n = m;
        n.x.at(1) += 1;
        r.add_term(n, c / Rat(n.x[1]));
    }
    return r;
}

// Antiderivative in the jet variable u_J, all other variables fixed.
LocalFunction u_antiderivative(const LocalFunction& f, const MultiIndex& J) {
    LocalFunction r(f.dim());
    for (const auto& [m, c] : f.terms()) {
        Monomial n = m;
        int d = n.u[J] += 1;
        r.add_term(n, c / Rat(d));
    }
    return r;
}

} // namespace

HorizontalForm invert_dH_1d(const HorizontalForm& alpha) {
    check_arg(alpha.dim() == 1, "constructive inversion is one-dimensional");
    check_arg(alpha.degree() == 1, "expected a degree-1 form");
    if (!euler(alpha).is_zero())
        throw JetliftError("form is not exact: nonzero variational derivative");
    LocalFunction f = alpha.component(1);
    LocalFunction g(1);
    while (!f.is_zero()) {
        int k = f.max_jet_order();
        if (k < 0) {
            g += x_antiderivative(f);
            break;
        }
        MultiIndex Jk({k});
        LocalFunction A = f.partial_u(Jk);
        if (k == 0 || !A.partial_u(Jk).is_zero())
            throw JetliftError("form is not exact: top jet structure");
        LocalFunction P = u_antiderivative(A, MultiIndex({k - 1}));
        g += P;
        f = f - P.total_derivative(1);
    }
    HorizontalForm r(1, 0);
    r.add_component(0, g);
    return r;
}

HorizontalForm random_hform(Rng& rng, int dim, int degree, const LfGenParams& p) {
    HorizontalForm r(dim, degree);
    for (uint32_t m = 0; m < (1u << dim); ++m) {
        if (std::popcount(m) != degree) continue;
        r.add_component(m, random_lf(rng, dim, p));
    }
    return r;
}

} // namespace jetlift
