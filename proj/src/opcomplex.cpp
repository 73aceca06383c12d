#include "jetlift/opcomplex.hpp"

#include "jetlift/errors.hpp"
#include "jetlift/horiforms.hpp"

#include <bit>

namespace jetlift {

OperatorForm::OperatorForm(int dim, int arity, int degree)
    : dim_(dim), arity_(arity), degree_(degree) {
    check_arg(dim >= 1, "dimension must be positive");
    check_arg(arity >= 1, "arity must be positive");
    check_arg(degree >= 0 && degree <= dim, "form degree out of range");
}

Ldo OperatorForm::component(uint32_t mask) const {
    auto it = comps_.find(mask);
    return it == comps_.end() ? Ldo(dim_, arity_, true) : it->second;
}

void OperatorForm::add_component(uint32_t mask, const Ldo& a) {
    check_arg(mask < (1u << dim_), "subset outside the base axes");
    check_arg(std::popcount(mask) == degree_, "subset size must match the degree");
    if (a.is_zero()) return;
    check_arg(a.dim() == dim_ && a.arity() == arity_, "component shape mismatch");
    Ldo p = a.polarized() ? a : a.polarized_form();
    auto it = comps_.find(mask);
    if (it == comps_.end()) {
        comps_.emplace(mask, p);
    } else {
        it->second += p;
        if (it->second.is_zero()) comps_.erase(it);
    }
}

OperatorForm OperatorForm::operator+(const OperatorForm& o) const {
    check_arg(dim_ == o.dim_ && arity_ == o.arity_ && degree_ == o.degree_,
              "form shape mismatch");
    OperatorForm r = *this;
    for (const auto& [m, a] : o.comps_) r.add_component(m, a);
    return r;
}

OperatorForm OperatorForm::operator-(const OperatorForm& o) const {
    return *this + o.scaled(Rat(-1));
}

OperatorForm OperatorForm::scaled(const Rat& c) const {
    OperatorForm r(dim_, arity_, degree_);
    if (c == 0) return r;
    for (const auto& [m, a] : comps_) r.comps_.emplace(m, a.scaled(c));
    return r;
}

bool OperatorForm::operator==(const OperatorForm& o) const {
    return dim_ == o.dim_ && arity_ == o.arity_ && degree_ == o.degree_ &&
           comps_ == o.comps_;
}

int OperatorForm::max_zeta_degree() const {
    int q = -1;
    for (const auto& [m, a] : comps_) {
        for (const auto& [key, c] : a.terms()) {
            int d = key.slots[0].xi.order();
            if (d > q) q = d;
        }
    }
    return q;
}

OperatorForm OperatorForm::zeta_block(int q) const {
    OperatorForm r(dim_, arity_, degree_);
    for (const auto& [m, a] : comps_) {
        Ldo b(dim_, arity_, true);
        for (const auto& [key, c] : a.terms()) {
            if (key.slots[0].xi.order() == q) b.add_term(key, c);
        }
        r.add_component(m, b);
    }
    return r;
}

std::string OperatorForm::str() const {
    if (comps_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, a] : comps_) {
        if (!first) s += " + ";
        first = false;
        std::string cs = a.str();
        if (degree_ == 0) {
            s += cs;
            continue;
        }
        if (a.term_count() > 1) cs = "(" + cs + ")";
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

namespace {

template <typename Step>
OperatorForm wedge_map(const OperatorForm& f, Step step) {
    int N = f.dim();
    if (f.degree() == N) return OperatorForm(N, f.arity(), N);
    OperatorForm r(N, f.arity(), f.degree() + 1);
    for (const auto& [mask, a] : f.components()) {
        for (int i = 1; i <= N; ++i) {
            uint32_t bit = 1u << (i - 1);
            if (mask & bit) continue;
            Ldo g = step(a, i);
            if (wedge_pos(i, mask) % 2 == 1) g = -g;
            r.add_component(mask | bit, g);
        }
    }
    return r;
}

} // namespace

OperatorForm d1(const OperatorForm& f) {
    return wedge_map(f, [](const Ldo& a, int i) {
        return a.coeff_total_derivative(i);
    });
}

OperatorForm d2(const OperatorForm& f) {
    return wedge_map(f, [](const Ldo& a, int i) { return a.letter_bump(1, i); });
}

OperatorForm d_op(const OperatorForm& f) {
    return wedge_map(f, [](const Ldo& a, int i) {
        return a.total_derivative_compose(i);
    });
}

OperatorForm koszul_solve(const OperatorForm& z) {
    int N = z.dim();
    int k = z.degree();
    OperatorForm out(N, z.arity(), k > 0 ? k - 1 : 0);
    if (z.is_zero()) return out;
    int q = z.max_zeta_degree();
    for (const auto& [m, a] : z.components()) {
        for (const auto& [key, c] : a.terms()) {
            (void)m;
            (void)c;
            check_arg(key.slots[0].xi.order() == q,
                      "koszul_solve needs a block of fixed diagonal degree");
        }
    }
    if (q == 0)
        throw JetliftError(
            "koszul_solve: nonzero data without diagonal letters has no preimage");
    int p = k - q;
    check_arg(p < N, "koszul_solve: bigrade out of range");
    if (!d2(z).is_zero()) throw JetliftError("koszul_solve: block is not closed");

    Rat factor(1, N - p);
    for (const auto& [mask, a] : z.components()) {
        for (int i = 1; i <= N; ++i) {
            uint32_t bit = 1u << (i - 1);
            if (!(mask & bit)) continue;
            Ldo g(N, z.arity(), true);
            for (const auto& [key, c] : a.terms()) {
                int e = key.slots[0].xi[i];
                if (e == 0) continue;
                LdoKey low = key;
                low.slots[0].xi.at(i) -= 1;
                g.add_term(low, c.scaled(Rat(e)));
            }
            if (g.is_zero()) continue;
            if (wedge_pos(i, mask) % 2 == 1) g = -g;
            out.add_component(mask & ~bit, g.scaled(factor));
        }
    }
    return out;
}

TopReduction reduce_top(const OperatorForm& a) {
    int N = a.dim();
    check_arg(a.degree() == N, "reduce_top needs a top-degree form");
    uint32_t full = full_mask(N);
    Ldo w = a.component(full);
    TopReduction r;
    r.tilde = OperatorForm(N, a.arity(), N - 1);
    while (true) {
        LdoKey key;
        LocalFunction c;
        bool found = false;
        for (const auto& [kk, cc] : w.terms()) {
            if (kk.slots[0].xi.order() >= 1) {
                key = kk;
                c = cc;
                found = true;
                break;
            }
        }
        if (!found) break;
        int i = 1;
        while (key.slots[0].xi[i] == 0) ++i;
        LdoKey low = key;
        low.slots[0].xi.at(i) -= 1;
        Ldo b(N, a.arity(), true);
        b.add_term(low, (i % 2 == 1) ? c : -c);
        r.tilde.add_component(full & ~(1u << (i - 1)), b);
        w.add_term(key, -c);
        w.add_term(low, -c.total_derivative(i));
    }
    r.chi = OperatorForm(N, a.arity(), N);
    r.chi.add_component(full, w);
    return r;
}

OperatorForm solve_d(const OperatorForm& y) {
    int N = y.dim();
    int k = y.degree();
    check_arg(k < N, "top degree has an obstruction: use reduce_top");
    if (!d_op(y).is_zero()) throw JetliftError("solve_d: form is not closed");
    OperatorForm x(N, y.arity(), k > 0 ? k - 1 : 0);
    OperatorForm rest = y;
    while (!rest.is_zero()) {
        int q = rest.max_zeta_degree();
        if (q <= 0)
            throw JetliftError(
                "solve_d: closed diagonal-free residual should be impossible");
        OperatorForm alpha = koszul_solve(rest.zeta_block(q));
        x = x + alpha;
        rest = rest - d_op(alpha);
    }
    return x;
}

OperatorForm random_opform(Rng& rng, int dim, int arity, int degree,
                           const LdoGenParams& p) {
    OperatorForm r(dim, arity, degree);
    for (uint32_t m = 0; m < (1u << dim); ++m) {
        if (std::popcount(m) != degree) continue;
        r.add_component(m, random_ldo(rng, dim, arity, p));
    }
    return r;
}

HorizontalForm opform_apply(const OperatorForm& a,
                            const std::vector<LocalFunction>& args) {
    check_arg(static_cast<int>(args.size()) == a.arity(),
              "apply needs one function per slot");
    HorizontalForm out(a.dim(), a.degree());
    for (const auto& [mask, op] : a.components())
        out.add_component(mask, op.apply(args));
    return out;
}

} // namespace jetlift
