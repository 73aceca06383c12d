#include "jetlift/lifting.hpp"

#include "jetlift/errors.hpp"

#include <algorithm>
#include <bit>

namespace jetlift {

namespace {

int mask_bits(std::uint32_t m) { return std::popcount(m); }

std::string mask_str(std::uint32_t m) {
    std::string out = "{";
    bool first = true;
    for (int i = 1; m != 0; ++i, m >>= 1) {
        if (!(m & 1u)) continue;
        if (!first) out += ",";
        out += std::to_string(i);
        first = false;
    }
    return out + "}";
}

// F with slot `slot` composed with the total derivative D_axis,
// componentwise over the wedge.
OperatorForm compose_slot_derivative(const OperatorForm& f, int axis, int slot) {
    OperatorForm out(f.dim(), f.arity(), f.degree());
    for (const auto& [mask, op] : f.components())
        out.add_component(mask, op.compose_total_derivative(axis, slot));
    return out;
}

// Exponent of the sign picked up when d_H lands on slot `slot` of a key:
// the regraded degrees of the earlier slots plus the wedge insertion
// position of dx^axis inside that slot's subset.
int insertion_exponent(int dim, const std::vector<std::uint32_t>& eps,
                       int axis, int slot) {
    int e = 0;
    for (int l = 1; l < slot; ++l) e += dim - mask_bits(eps[l - 1]);
    e += wedge_pos(axis, eps[slot - 1]);
    return e;
}

void collect_keys(int dim, int arity, int idx, int remaining,
                  std::vector<std::uint32_t>& cur,
                  std::vector<std::vector<std::uint32_t>>& out) {
    if (idx == arity) {
        if (remaining == 0) out.push_back(cur);
        return;
    }
    int rest = (arity - idx - 1) * dim;
    for (std::uint32_t m = 0; m <= full_mask(dim); ++m) {
        int b = mask_bits(m);
        if (b > remaining || remaining - b > rest) continue;
        cur.push_back(m);
        collect_keys(dim, arity, idx + 1, remaining - b, cur, out);
        cur.pop_back();
    }
}

// All keys at level s: slotwise subsets with arity*dim - s bits in total.
std::vector<std::vector<std::uint32_t>> level_keys(int dim, int arity, int s) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    collect_keys(dim, arity, 0, arity * dim - s, cur, out);
    return out;
}

OperatorForm embed_top(const Ldo& a) {
    OperatorForm f(a.dim(), a.arity(), a.dim());
    f.add_component(full_mask(a.dim()), a);
    return f;
}

std::vector<std::uint32_t> all_full_key(int dim, int arity) {
    return std::vector<std::uint32_t>(static_cast<size_t>(arity), full_mask(dim));
}

void check_shaped(const DEndElement& f, const char* who) {
    check_arg(f.dim() >= 1 && f.arity() >= 1, std::string(who) + " needs a shaped element");
}

void check_perm(const std::vector<int>& sigma, int n) {
    check_arg(static_cast<int>(sigma.size()) == n, "permutation size mismatch");
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (int v : sigma) {
        check_arg(v >= 1 && v <= n && !seen[static_cast<size_t>(v - 1)],
                  "not a permutation");
        seen[static_cast<size_t>(v - 1)] = 1;
    }
}

Rat parity(int e) { return e % 2 == 0 ? Rat(1) : Rat(-1); }

} // namespace

DEndElement::DEndElement(int dim, int arity, int degree)
    : dim_(dim), arity_(arity), degree_(degree) {
    check_arg(dim >= 1, "element needs dim >= 1");
    check_arg(arity >= 1, "element needs arity >= 1");
}

int DEndElement::min_level() const { return std::max(-degree_, 0); }

int DEndElement::max_level() const { return std::min(arity_ * dim_, dim_ - degree_); }

void DEndElement::check_key(const std::vector<std::uint32_t>& eps) const {
    check_arg(static_cast<int>(eps.size()) == arity_, "key arity mismatch");
    for (std::uint32_t m : eps)
        check_arg((m & ~full_mask(dim_)) == 0, "key subset out of range");
}

int DEndElement::level_of(const std::vector<std::uint32_t>& eps) const {
    check_key(eps);
    int total = 0;
    for (std::uint32_t m : eps) total += mask_bits(m);
    return arity_ * dim_ - total;
}

OperatorForm DEndElement::family(const std::vector<std::uint32_t>& eps) const {
    int s = level_of(eps);
    check_arg(s >= min_level() && s <= max_level(), "family level out of range");
    auto it = families_.find(eps);
    if (it != families_.end()) return it->second;
    return OperatorForm(dim_, arity_, form_degree(s));
}

void DEndElement::add_family(const std::vector<std::uint32_t>& eps,
                             const OperatorForm& f) {
    int s = level_of(eps);
    check_arg(s >= min_level() && s <= max_level(), "family level out of range");
    check_arg(f.dim() == dim_ && f.arity() == arity_, "family shape mismatch");
    check_arg(f.degree() == form_degree(s), "family form degree mismatch");
    auto it = families_.find(eps);
    if (it == families_.end()) {
        if (!f.is_zero()) families_.emplace(eps, f);
        return;
    }
    it->second = it->second + f;
    if (it->second.is_zero()) families_.erase(it);
}

DEndElement DEndElement::operator+(const DEndElement& o) const {
    check_arg(dim_ == o.dim_ && arity_ == o.arity_ && degree_ == o.degree_,
              "element shape mismatch");
    DEndElement out = *this;
    for (const auto& [eps, f] : o.families_) out.add_family(eps, f);
    return out;
}

DEndElement DEndElement::operator-(const DEndElement& o) const {
    return *this + o.scaled(Rat(-1));
}

DEndElement DEndElement::scaled(const Rat& c) const {
    DEndElement out(dim_, arity_, degree_);
    if (c == Rat(0)) return out;
    for (const auto& [eps, f] : families_) out.families_.emplace(eps, f.scaled(c));
    return out;
}

bool DEndElement::operator==(const DEndElement& o) const {
    return dim_ == o.dim_ && arity_ == o.arity_ && degree_ == o.degree_ &&
           families_ == o.families_;
}

std::string DEndElement::str() const {
    if (families_.empty()) return "0";
    std::string out;
    for (const auto& [eps, f] : families_) {
        if (!out.empty()) out += "\n";
        out += "s=" + std::to_string(level_of(eps)) + " (";
        for (size_t j = 0; j < eps.size(); ++j) {
            if (j) out += "|";
            out += mask_str(eps[j]);
        }
        out += "): " + f.str();
    }
    return out;
}

Rat koszul_sign(const std::vector<int>& sigma, const std::vector<int>& degs) {
    check_perm(sigma, static_cast<int>(degs.size()));
    int e = 0;
    for (size_t a = 0; a < sigma.size(); ++a)
        for (size_t b = a + 1; b < sigma.size(); ++b)
            if (sigma[a] > sigma[b])
                e += degs[static_cast<size_t>(sigma[a] - 1)] *
                     degs[static_cast<size_t>(sigma[b] - 1)];
    return parity(e);
}

int perm_sign(const std::vector<int>& sigma) {
    check_perm(sigma, static_cast<int>(sigma.size()));
    int inv = 0;
    for (size_t a = 0; a < sigma.size(); ++a)
        for (size_t b = a + 1; b < sigma.size(); ++b)
            if (sigma[a] > sigma[b]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

DEndElement dend_delta(const DEndElement& f) {
    check_shaped(f, "delta");
    const int dim = f.dim(), arity = f.arity(), k = f.degree();
    DEndElement out(dim, arity, k - 1);
    for (const auto& [eps, F] : f.families()) {
        OperatorForm dF = d_op(F);
        if (!dF.is_zero()) out.add_family(eps, dF);
        // F plays the raised role F^{..,i eps_j,..} for every bit it carries.
        for (int j = 1; j <= arity; ++j) {
            for (int i = 1; i <= dim; ++i) {
                std::uint32_t bit = 1u << (i - 1);
                if (!(eps[static_cast<size_t>(j - 1)] & bit)) continue;
                std::vector<std::uint32_t> low = eps;
                low[static_cast<size_t>(j - 1)] &= ~bit;
                int e = k + insertion_exponent(dim, low, i, j);
                OperatorForm comp = compose_slot_derivative(F, i, j);
                if (comp.is_zero()) continue;
                out.add_family(low, comp.scaled(-parity(e)));
            }
        }
    }
    return out;
}

HorizontalForm dend_apply(const DEndElement& f,
                          const std::vector<HorizontalForm>& args) {
    check_shaped(f, "apply");
    const int dim = f.dim(), arity = f.arity();
    check_arg(static_cast<int>(args.size()) == arity, "argument count mismatch");
    int s = 0;
    for (const auto& w : args) {
        check_arg(w.dim() == dim, "argument dim mismatch");
        s += dim - w.degree();
    }
    int target = dim - s - f.degree();
    check_arg(target >= 0 && target <= dim,
              "application lands outside the form degrees");
    HorizontalForm out(dim, target);
    for (const auto& [eps, F] : f.families()) {
        if (f.level_of(eps) != s) continue;
        std::vector<LocalFunction> comps;
        comps.reserve(static_cast<size_t>(arity));
        bool dead = false;
        for (int j = 0; j < arity; ++j) {
            LocalFunction g = args[static_cast<size_t>(j)].component(eps[static_cast<size_t>(j)]);
            if (g.is_zero()) { dead = true; break; }
            comps.push_back(g);
        }
        if (dead) continue;
        for (const auto& [mask, op] : F.components())
            out.add_component(mask, op.apply(comps));
    }
    return out;
}

DEndElement dend_compose(const DEndElement& f, int slot, const DEndElement& g) {
    check_shaped(f, "compose");
    check_shaped(g, "compose");
    check_arg(f.dim() == g.dim(), "dim mismatch");
    const int m = f.arity(), r = g.arity(), dim = f.dim();
    check_arg(slot >= 1 && slot <= m, "slot out of range");
    DEndElement out(f.dim(), m + r - 1, f.degree() + g.degree());
    for (const auto& [feps, F] : f.families()) {
        std::uint32_t mu = feps[static_cast<size_t>(slot - 1)];
        // Koszul sign for moving g past the arguments left of the slot.
        int passed = 0;
        for (int l = 0; l < slot - 1; ++l)
            passed += dim - std::popcount(feps[static_cast<size_t>(l)]);
        Rat sign = parity(g.degree() * passed);
        for (const auto& [geps, G] : g.families()) {
            Ldo b = G.component(mu);
            if (b.is_zero()) continue;
            Ldo bd = b.depolarized_form();
            std::vector<std::uint32_t> key;
            key.reserve(static_cast<size_t>(m + r - 1));
            key.insert(key.end(), feps.begin(), feps.begin() + (slot - 1));
            key.insert(key.end(), geps.begin(), geps.end());
            key.insert(key.end(), feps.begin() + slot, feps.end());
            OperatorForm comp(f.dim(), m + r - 1, F.degree());
            for (const auto& [nu, a] : F.components())
                comp.add_component(nu, a.depolarized_form().compose_slot(slot, bd));
            out.add_family(key, comp.scaled(sign));
        }
    }
    return out;
}

DEndElement dend_sym_action(const std::vector<int>& sigma, const DEndElement& f) {
    check_shaped(f, "sym action");
    const int n = f.arity(), dim = f.dim();
    check_perm(sigma, n);
    std::vector<int> inv(static_cast<size_t>(n));
    for (int c = 1; c <= n; ++c) inv[static_cast<size_t>(sigma[static_cast<size_t>(c - 1)] - 1)] = c;
    DEndElement out(dim, n, f.degree());
    for (const auto& [mu, F] : f.families()) {
        std::vector<std::uint32_t> kappa(static_cast<size_t>(n));
        std::vector<int> degs(static_cast<size_t>(n));
        for (int c = 1; c <= n; ++c) {
            kappa[static_cast<size_t>(c - 1)] = mu[static_cast<size_t>(sigma[static_cast<size_t>(c - 1)] - 1)];
            degs[static_cast<size_t>(c - 1)] = dim - mask_bits(kappa[static_cast<size_t>(c - 1)]);
        }
        Rat e = koszul_sign(inv, degs);
        OperatorForm comp(dim, n, F.degree());
        for (const auto& [nu, a] : F.components())
            comp.add_component(nu, a.depolarized_form().sym_action(sigma));
        out.add_family(kappa, comp.scaled(e));
    }
    return out;
}

std::vector<std::vector<Ldo>> a0(const Ldo& a) {
    check_arg(a.dim() >= 1 && a.arity() >= 1, "a0 needs a shaped operator");
    std::vector<std::vector<Ldo>> out;
    out.reserve(static_cast<size_t>(a.dim()));
    for (int i = 1; i <= a.dim(); ++i) {
        std::vector<Ldo> row;
        row.reserve(static_cast<size_t>(a.arity()));
        for (int j = 1; j <= a.arity(); ++j)
            row.push_back(a.compose_total_derivative(i, j).characteristic());
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

// True when the obstruction is harmless for the window: identically zero,
// or (window >= 0) every term keeps an eta letter of order above the
// window, so it kills all argument tuples of jet order <= window.
bool obstruction_dies(const Ldo& x, int window) {
    if (window < 0) return x.is_zero();
    return x.drop_floor() > window;
}

bool obstruction_dies(const OperatorForm& x, int window) {
    for (const auto& [mask, a] : x.components())
        if (!obstruction_dies(a, window)) return false;
    return true;
}

} // namespace

bool is_liftable(const Ldo& a, int window) {
    for (const auto& row : a0(a))
        for (const auto& x : row)
            if (!obstruction_dies(x, window)) return false;
    return true;
}

namespace {

void check_liftable(const Ldo& a, int window, const char* who) {
    for (int i = 1; i <= a.dim(); ++i)
        for (int j = 1; j <= a.arity(); ++j)
            if (!obstruction_dies(a.compose_total_derivative(i, j).characteristic(), window))
                throw JetliftError(std::string(who) +
                                   ": not liftable, characteristic obstruction at axis " +
                                   std::to_string(i) + ", slot " + std::to_string(j));
}

} // namespace

DEndElement lift(const Ldo& a, int window) {
    check_arg(a.dim() >= 1 && a.arity() >= 1, "lift needs a shaped operator");
    check_liftable(a, window, "lift");
    const int dim = a.dim(), n = a.arity();
    DEndElement f(dim, n, 0);
    if (a.is_zero()) return f;
    f.add_family(all_full_key(dim, n), embed_top(a));
    for (int s = 1; s <= std::min(n * dim, dim); ++s) {
        for (const auto& eps : level_keys(dim, n, s)) {
            OperatorForm rhs(dim, n, dim - s + 1);
            for (int j = 1; j <= n; ++j) {
                for (int i = 1; i <= dim; ++i) {
                    std::uint32_t bit = 1u << (i - 1);
                    if (eps[static_cast<size_t>(j - 1)] & bit) continue;
                    std::vector<std::uint32_t> raised = eps;
                    raised[static_cast<size_t>(j - 1)] |= bit;
                    OperatorForm prev = f.family(raised);
                    if (prev.is_zero()) continue;
                    Rat sign = parity(insertion_exponent(dim, eps, i, j));
                    rhs = rhs + compose_slot_derivative(prev, i, j).scaled(sign);
                }
            }
            if (rhs.is_zero()) continue;
            OperatorForm sol;
            if (s == 1) {
                TopReduction tr = reduce_top(rhs);
                if (!obstruction_dies(tr.chi, window))
                    throw JetliftError("lift: unexpected obstruction at the first level");
                sol = tr.tilde;
            } else {
                sol = solve_d(rhs);
            }
            if (!sol.is_zero()) f.add_family(eps, sol);
        }
    }
    return f;
}

DEndElement lift_null(const Ldo& a) {
    check_arg(a.dim() >= 1 && a.arity() >= 1, "null lift needs a shaped operator");
    if (!a.characteristic().is_zero())
        throw JetliftError("null lift needs a vanishing characteristic");
    const int dim = a.dim(), n = a.arity();
    DEndElement f(dim, n, 0);
    if (a.is_zero()) return f;
    f.add_family(all_full_key(dim, n), embed_top(a));
    TopReduction tr = reduce_top(embed_top(a));
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= dim; ++i) {
            std::vector<std::uint32_t> eps = all_full_key(dim, n);
            eps[static_cast<size_t>(j - 1)] &= ~(1u << (i - 1));
            Rat sign = parity(insertion_exponent(dim, eps, i, j));
            OperatorForm comp = compose_slot_derivative(tr.tilde, i, j).scaled(sign);
            if (!comp.is_zero()) f.add_family(eps, comp);
        }
    }
    return f;
}

DEndElement lift_diagonal(const Ldo& a) {
    check_arg(a.arity() == 1, "diagonal lift is an arity-1 construction");
    check_arg(a.dim() >= 1, "diagonal lift needs a shaped operator");
    check_liftable(a, -1, "diagonal lift");
    const int dim = a.dim();
    DEndElement f(dim, 1, 0);
    if (a.is_zero()) return f;
    f.add_family(all_full_key(dim, 1), embed_top(a));
    TopReduction tr = reduce_top(embed_top(a));
    Ldo chi = tr.chi.component(full_mask(dim));
    for (int s = 1; s <= dim; ++s) {
        for (const auto& eps : level_keys(dim, 1, s)) {
            OperatorForm fam(dim, 1, dim - s);
            if (!chi.is_zero()) fam.add_component(eps[0], chi);
            if (s == 1) {
                int i = 1;
                while (eps[0] & (1u << (i - 1))) ++i;
                Rat sign = parity(insertion_exponent(dim, eps, i, 1));
                fam = fam + compose_slot_derivative(tr.tilde, i, 1).scaled(sign);
            }
            if (!fam.is_zero()) f.add_family(eps, fam);
        }
    }
    return f;
}

DEndElement solve_delta(const DEndElement& g) {
    check_shaped(g, "solve_delta");
    const int k = g.degree();
    check_arg(k >= 1, "solve_delta needs a positive-degree input");
    if (!dend_delta(g).is_zero())
        throw JetliftError("solve_delta: the input is not a cycle");
    const int dim = g.dim(), n = g.arity();
    DEndElement h(dim, n, k + 1);
    for (int s = 0; s <= std::min(n * dim, dim - k - 1); ++s) {
        for (const auto& eps : level_keys(dim, n, s)) {
            OperatorForm rhs = g.family(eps);
            for (int j = 1; j <= n; ++j) {
                for (int i = 1; i <= dim; ++i) {
                    std::uint32_t bit = 1u << (i - 1);
                    if (eps[static_cast<size_t>(j - 1)] & bit) continue;
                    std::vector<std::uint32_t> raised = eps;
                    raised[static_cast<size_t>(j - 1)] |= bit;
                    OperatorForm prev = h.family(raised);
                    if (prev.is_zero()) continue;
                    Rat sign = parity(k + 1 + insertion_exponent(dim, eps, i, j));
                    rhs = rhs + compose_slot_derivative(prev, i, j).scaled(sign);
                }
            }
            if (rhs.is_zero()) continue;
            OperatorForm sol = solve_d(rhs);
            if (!sol.is_zero()) h.add_family(eps, sol);
        }
    }
    return h;
}

DEndElement bound_cycle(const DEndElement& g, int window) {
    check_shaped(g, "bound_cycle");
    check_arg(g.degree() == 0, "bound_cycle needs a degree-0 input");
    DEndElement dg = dend_delta(g);
    for (const auto& [eps, F] : dg.families())
        if (!obstruction_dies(F, window))
            throw JetliftError("bound_cycle: the input is not a cycle");
    const int dim = g.dim(), n = g.arity();
    DEndElement h(dim, n, 1);
    for (int s = 0; s <= std::min(n * dim, dim - 1); ++s) {
        for (const auto& eps : level_keys(dim, n, s)) {
            OperatorForm rhs = g.family(eps);
            for (int j = 1; j <= n; ++j) {
                for (int i = 1; i <= dim; ++i) {
                    std::uint32_t bit = 1u << (i - 1);
                    if (eps[static_cast<size_t>(j - 1)] & bit) continue;
                    std::vector<std::uint32_t> raised = eps;
                    raised[static_cast<size_t>(j - 1)] |= bit;
                    OperatorForm prev = h.family(raised);
                    if (prev.is_zero()) continue;
                    Rat sign = parity(1 + insertion_exponent(dim, eps, i, j));
                    rhs = rhs + compose_slot_derivative(prev, i, j).scaled(sign);
                }
            }
            if (rhs.is_zero()) continue;
            OperatorForm sol;
            if (s == 0) {
                TopReduction tr = reduce_top(rhs);
                if (!obstruction_dies(tr.chi, window))
                    throw JetliftError(
                        "bound_cycle: characteristic obstruction at the top level: " +
                        tr.chi.str());
                sol = tr.tilde;
            } else {
                sol = solve_d(rhs);
            }
            if (!sol.is_zero()) h.add_family(eps, sol);
        }
    }
    return h;
}

Ldo ladder_b0(const DEndElement& f) {
    check_shaped(f, "bottom projection");
    check_arg(f.degree() == 0, "bottom projection needs degree 0");
    return f.family(all_full_key(f.dim(), f.arity())).component(full_mask(f.dim()));
}

Ldo ladder_b1(const DEndElement& h) {
    check_shaped(h, "ladder b1");
    check_arg(h.degree() == 1, "ladder b1 needs degree 1");
    return d_op(h.family(all_full_key(h.dim(), h.arity()))).component(full_mask(h.dim()));
}

std::vector<std::vector<Ldo>> ladder_bm1(const DEndElement& g) {
    check_shaped(g, "ladder b-1");
    check_arg(g.degree() == -1, "ladder b-1 needs degree -1");
    const int dim = g.dim(), n = g.arity();
    std::vector<std::vector<Ldo>> out;
    out.reserve(static_cast<size_t>(dim));
    for (int i = 1; i <= dim; ++i) {
        std::vector<Ldo> row;
        row.reserve(static_cast<size_t>(n));
        for (int j = 1; j <= n; ++j) {
            std::vector<std::uint32_t> eps = all_full_key(dim, n);
            eps[static_cast<size_t>(j - 1)] &= ~(1u << (i - 1));
            Ldo chi = g.family(eps).component(full_mask(dim)).characteristic();
            row.push_back(chi.scaled(-parity(i - 1)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

DEndElement random_dend(Rng& rng, int dim, int arity, int degree,
                        const LdoGenParams& p) {
    DEndElement f(dim, arity, degree);
    int kept = 0;
    for (int s = f.min_level(); s <= f.max_level() && kept < 3; ++s) {
        for (const auto& eps : level_keys(dim, arity, s)) {
            if (kept >= 3) break;
            if (rng.uniform(0, 2) != 0) continue;
            OperatorForm x = random_opform(rng, dim, arity, f.form_degree(s), p);
            if (x.is_zero()) continue;
            f.add_family(eps, x);
            ++kept;
        }
    }
    return f;
}

} // namespace jetlift
