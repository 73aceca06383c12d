#include "jetlift/shlie.hpp"

#include "jetlift/errors.hpp"

#include <algorithm>
#include <bit>
#include <climits>

namespace jetlift {

namespace {

Rat parity(int e) { return (e % 2) ? Rat(-1) : Rat(1); }

// Componentwise slot swap of a bilinear operator form.
OperatorForm swap_slots(const OperatorForm& f) {
    OperatorForm out(f.dim(), f.arity(), f.degree());
    for (const auto& [mask, a] : f.components())
        out.add_component(mask, a.depolarized_form().sym_action({2, 1}));
    return out;
}

} // namespace

Ldo euler_ldo(int dim, int order) {
    check_arg(dim >= 1, "euler operator needs a positive dimension");
    check_arg(order >= 0, "euler operator needs a non-negative order");
    Ldo out(dim, 1);
    MultiIndex I(dim);
    while (true) {
        if (I.order() <= order) {
            LdoKey key;
            key.slots.assign(1, SlotWord{I, {{I, 1}}});
            out.add_term(key, LocalFunction::constant(dim, parity(I.order())));
        }
        int c = 1;
        while (c <= dim && ++I.at(c) > order) {
            I.at(c) = 0;
            ++c;
        }
        if (c > dim) break;
    }
    return out;
}

OperatorForm kdv_bracket(int order) {
    Ldo e = euler_ldo(1, order);
    Ldo de = e.total_derivative_compose(1);
    Ldo mult = Ldo::coefficient(1, 2, LocalFunction::constant(1, Rat(1)));
    OperatorForm lt2(1, 2, 1);
    lt2.add_component(1u, Ldo::compose(mult, {e, de}));
    return lt2;
}

bool dies_on_window(const Ldo& a, int window) {
    if (window < 0) return a.is_zero();
    return a.drop_floor() > window;
}

bool dies_on_window(const OperatorForm& f, int window) {
    for (const auto& [mask, a] : f.components())
        if (!dies_on_window(a, window)) return false;
    return true;
}

bool dies_on_window(const DEndElement& f, int window) {
    for (const auto& [eps, F] : f.families())
        if (!dies_on_window(F, window)) return false;
    return true;
}

std::string PoissonCheck::str() const {
    std::string out = liftable ? "liftability: pass" : "liftability: FAIL";
    if (!liftable) {
        for (size_t i = 0; i < chi_insert.size(); ++i)
            for (size_t j = 0; j < chi_insert[i].size(); ++j)
                if (!chi_insert[i][j].is_zero())
                    out += "\n  chi(A o D^" + std::to_string(i + 1) + "_" +
                           std::to_string(j + 1) + ") = " + chi_insert[i][j].str();
    }
    out += antisymmetric ? "\nsymmetry: pass" : "\nsymmetry: FAIL";
    if (!antisymmetric && !chi_sym.is_zero())
        out += "\n  chi(A + A tau) = " + chi_sym.str();
    out += jacobi ? "\njacobi: pass" : "\njacobi: FAIL";
    if (!jacobi && !chi_jacobi.is_zero())
        out += "\n  chi(jacobi sum) = " + chi_jacobi.str();
    return out;
}

PoissonCheck check_poisson_conditions(const OperatorForm& lt2, int window) {
    const int N = lt2.dim();
    check_arg(N >= 1 && lt2.arity() == 2, "the bracket must be a bilinear operator form");
    check_arg(lt2.degree() == N, "the bracket must have top form degree");
    Ldo A = lt2.component(full_mask(N)).depolarized_form();
    PoissonCheck out;
    out.chi_insert = a0(A);
    out.liftable = true;
    for (const auto& row : out.chi_insert)
        for (const auto& x : row)
            if (!dies_on_window(x, window)) out.liftable = false;
    Ldo S = A + A.sym_action({2, 1});
    out.chi_sym = S.characteristic();
    out.antisymmetric = dies_on_window(out.chi_sym, window);
    Ldo h = A.compose_slot(1, A);
    Ldo jac = h - h.sym_action({1, 3, 2}) + h.sym_action({3, 1, 2});
    out.chi_jacobi = jac.characteristic();
    out.jacobi = dies_on_window(out.chi_jacobi, window);
    return out;
}

OperatorForm skew_symmetrize(const OperatorForm& lt2, int window) {
    const int N = lt2.dim();
    check_arg(N >= 1 && lt2.arity() == 2, "skew_symmetrize needs a bilinear operator form");
    check_arg(lt2.degree() == N, "skew_symmetrize needs a top-degree operator form");
    OperatorForm S = lt2 + swap_slots(lt2);
    TopReduction tr = reduce_top(S);
    if (!dies_on_window(tr.chi, window))
        throw JetliftError(
            "skew_symmetrize: surviving characteristic of the symmetrization: " +
            tr.chi.str());
    OperatorForm msym = (tr.tilde + swap_slots(tr.tilde)).scaled(Rat(1, 2));
    return lt2 - d_op(msym).scaled(Rat(1, 2));
}

std::vector<std::vector<int>> unshuffles(int k, int p) {
    check_arg(k >= 0 && p >= 0, "unshuffle type must be non-negative");
    const int n = k + p;
    check_arg(n >= 1 && n < 31, "unshuffle size out of range");
    std::vector<std::vector<int>> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        if (std::popcount(m) != k) continue;
        std::vector<int> sigma;
        sigma.reserve(static_cast<size_t>(n));
        for (int c = 1; c <= n; ++c)
            if (m & (1u << (c - 1))) sigma.push_back(c);
        for (int c = 1; c <= n; ++c)
            if (!(m & (1u << (c - 1)))) sigma.push_back(c);
        out.push_back(std::move(sigma));
    }
    return out;
}

DEndElement alternate(const DEndElement& f) {
    const int n = f.arity();
    check_arg(n >= 1, "alternation needs a shaped element");
    std::vector<int> sigma(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) sigma[static_cast<size_t>(c)] = c + 1;
    int fact = 1;
    for (int c = 2; c <= n; ++c) fact *= c;
    DEndElement acc(f.dim(), n, f.degree());
    do {
        acc = acc + dend_sym_action(sigma, f).scaled(Rat(perm_sign(sigma)));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return acc.scaled(Rat(1, fact));
}

DEndElement jacobiator(const DEndElement& l2, int window) {
    check_arg(l2.arity() == 2 && l2.degree() == 0,
              "jacobiator needs a degree-0 binary element");
    if (!dies_on_window(dend_delta(l2), window))
        throw JetliftError("jacobiator: the input is not a cycle");
    DEndElement h = dend_compose(l2, 1, l2);
    return h - dend_sym_action({1, 3, 2}, h) + dend_sym_action({3, 1, 2}, h);
}

const DEndElement& ShLieTower::bracket(int k) const {
    auto it = brackets.find(k);
    check_arg(it != brackets.end(), "no bracket of that arity in the tower");
    return it->second;
}

int ShLieTower::certified_order() const {
    int best = INT_MAX;
    for (const auto& [k, r] : residuals)
        for (const auto& [eps, F] : r.families())
            for (const auto& [mask, a] : F.components())
                best = std::min(best, a.drop_floor());
    if (best == INT_MAX) return INT_MAX;
    return std::max(best - 1, -1);
}

DEndElement shlie_defect(const ShLieTower& t, int n) {
    check_arg(n >= 2, "defects start at arity 2");
    DEndElement out(t.dim, n, n - 3);
    for (int i = 2; i <= n - 1; ++i) {
        const int j = n + 1 - i;
        const DEndElement& li = t.bracket(i);
        const DEndElement& lj = t.bracket(j);
        if (li.is_zero() || lj.is_zero()) continue;
        DEndElement h = dend_compose(lj, 1, li);
        Rat outer = parity(i * (j - 1));
        for (const auto& sigma : unshuffles(i, n - i)) {
            std::vector<int> inv(sigma.size());
            for (int c = 1; c <= n; ++c)
                inv[static_cast<size_t>(sigma[static_cast<size_t>(c - 1)] - 1)] = c;
            out = out + dend_sym_action(inv, h).scaled(outer * Rat(perm_sign(sigma)));
        }
    }
    return out;
}

ShLieTower build_tower(const OperatorForm& lt2, int kmax, int window) {
    check_arg(kmax >= 2, "the tower starts at the binary bracket");
    PoissonCheck pc = check_poisson_conditions(lt2, window);
    if (!pc.all())
        throw JetliftError("build_tower: bracket conditions fail\n" + pc.str());
    const int N = lt2.dim();
    ShLieTower t;
    t.dim = N;
    t.kmax = kmax;
    t.window = window;
    OperatorForm skew = skew_symmetrize(lt2, window);
    DEndElement l2 =
        alternate(lift(skew.component(full_mask(N)).depolarized_form(), window));
    t.brackets[2] = l2;
    t.residuals[2] = dend_delta(l2);
    if (!dies_on_window(t.residuals[2], window))
        throw JetliftError("build_tower: the binary bracket residual survives the window");
    for (int k = 3; k <= kmax; ++k) {
        DEndElement d = shlie_defect(t, k);
        DEndElement lk(N, k, k - 2);
        if (!dies_on_window(d, window)) {
            lk = (k == 3) ? alternate(bound_cycle(d.scaled(Rat(-1)), window))
                          : alternate(solve_delta(d.scaled(Rat(-1))));
        }
        t.brackets[k] = lk;
        t.residuals[k] = dend_delta(lk) + d;
        if (!dies_on_window(t.residuals[k], window))
            throw JetliftError("build_tower: the arity-" + std::to_string(k) +
                               " residual survives the window");
    }
    return t;
}

HorizontalForm shlie_relation(const ShLieTower& t, int n,
                              const std::vector<HorizontalForm>& args) {
    const int N = t.dim;
    check_arg(n >= 1, "the relation arity must be positive");
    check_arg(static_cast<int>(args.size()) == n, "one form per slot");
    for (const auto& w : args)
        check_arg(w.dim() == N, "argument dimension mismatch");
    std::vector<int> m(static_cast<size_t>(n));
    int msum = 0;
    for (int c = 0; c < n; ++c) {
        m[static_cast<size_t>(c)] = N - args[static_cast<size_t>(c)].degree();
        msum += m[static_cast<size_t>(c)];
    }
    const int target = N - msum - (n - 3);
    check_arg(target >= 0 && target <= N, "the relation target degree is out of range");
    HorizontalForm acc(N, target);
    for (int i = 1; i <= n; ++i) {
        const int j = n + 1 - i;
        for (const auto& sigma : unshuffles(i, n - i)) {
            int s_in = 0;
            for (int c = 0; c < i; ++c)
                s_in += m[static_cast<size_t>(sigma[static_cast<size_t>(c)] - 1)];
            const int t_in = N - s_in - (i - 2);
            // Terms whose inner value sits outside the form degrees are
            // zero by grading.
            if (t_in < 0 || t_in > N) continue;
            std::vector<HorizontalForm> inner_args;
            inner_args.reserve(static_cast<size_t>(i));
            for (int c = 0; c < i; ++c)
                inner_args.push_back(args[static_cast<size_t>(sigma[static_cast<size_t>(c)] - 1)]);
            HorizontalForm inner =
                (i == 1) ? dH(inner_args[0]) : dend_apply(t.bracket(i), inner_args);
            HorizontalForm val;
            if (j == 1) {
                val = dH(inner);
            } else {
                std::vector<HorizontalForm> outer_args;
                outer_args.reserve(static_cast<size_t>(j));
                outer_args.push_back(inner);
                for (int c = i; c < n; ++c)
                    outer_args.push_back(args[static_cast<size_t>(sigma[static_cast<size_t>(c)] - 1)]);
                val = dend_apply(t.bracket(j), outer_args);
            }
            Rat sign = koszul_sign(sigma, m) * Rat(perm_sign(sigma)) * parity(i * (j - 1));
            acc = acc + val.scaled(sign);
        }
    }
    return acc;
}

bool ShLieVerifyReport::ok() const {
    for (const auto& e : entries)
        if (e.failures != 0) return false;
    return true;
}

std::string ShLieVerifyReport::str() const {
    std::string out = "structure identities up to arity " + std::to_string(nmax) +
                      " (seed " + std::to_string(seed) + "):";
    for (const auto& e : entries) {
        out += "\n  arity " + std::to_string(e.arity) + ": ";
        if (e.checked == 0)
            out += "no admissible degree tuples, vacuous";
        else
            out += std::to_string(e.checked) + " tuples, " +
                   std::to_string(e.failures) + " failures";
    }
    return out;
}

ShLieVerifyReport verify_shlie(const ShLieTower& t, int nmax, int trials,
                               std::uint64_t seed, const LfGenParams& p) {
    check_arg(nmax >= 1, "verification needs a positive arity bound");
    check_arg(nmax <= std::max(t.kmax, 1), "the tower has no brackets beyond kmax");
    check_arg(trials >= 1, "verification needs at least one trial");
    const int N = t.dim;
    Rng rng(seed);
    ShLieVerifyReport r;
    r.nmax = nmax;
    r.trials = trials;
    r.seed = seed;
    for (int n = 1; n <= nmax; ++n) {
        std::vector<std::vector<int>> tuples;
        std::vector<int> d(static_cast<size_t>(n), 0);
        while (true) {
            int msum = 0;
            for (int c = 0; c < n; ++c) msum += N - d[static_cast<size_t>(c)];
            int target = N - msum - (n - 3);
            if (target >= 0 && target <= N) tuples.push_back(d);
            int c = 0;
            while (c < n && ++d[static_cast<size_t>(c)] > N) {
                d[static_cast<size_t>(c)] = 0;
                ++c;
            }
            if (c == n) break;
        }
        ShLieVerifyEntry e;
        e.arity = n;
        if (!tuples.empty()) {
            for (int s = 0; s < trials; ++s) {
                const auto& degs = tuples[static_cast<size_t>(
                    rng.uniform(0, static_cast<int>(tuples.size()) - 1))];
                std::vector<HorizontalForm> args;
                args.reserve(static_cast<size_t>(n));
                for (int c = 0; c < n; ++c)
                    args.push_back(random_hform(rng, N, degs[static_cast<size_t>(c)], p));
                ++e.checked;
                if (!shlie_relation(t, n, args).is_zero()) ++e.failures;
            }
        }
        r.entries.push_back(e);
    }
    return r;
}

} // namespace jetlift
