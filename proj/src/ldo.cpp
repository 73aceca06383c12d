#include "jetlift/ldo.hpp"

#include "jetlift/errors.hpp"

#include <algorithm>
#include <climits>

namespace jetlift {

namespace {

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// eta_J entering a slot word from the left, crossing the slot's xi^K:
// eta_J xi^K = sum_{L <= min(J,K)} prod_i C(K_i, L_i) xi^{K-L} eta_{J-L}.
struct EtaCross {
    long long mult;
    MultiIndex xi;  // K - L
    MultiIndex jet; // J - L
};

void enumerate_eta_cross(const MultiIndex& J, const MultiIndex& K,
                         std::vector<EtaCross>& out) {
    int N = J.dim();
    std::vector<EtaCross> acc{{1, K, J}};
    for (int i = 1; i <= N; ++i) {
        std::vector<EtaCross> next;
        for (const EtaCross& e : acc) {
            int top = std::min(e.jet[i], e.xi[i]);
            for (int L = 0; L <= top; ++L) {
                EtaCross f = e;
                f.mult *= binom(e.xi[i], L);
                f.xi.at(i) -= L;
                f.jet.at(i) -= L;
                next.push_back(f);
            }
        }
        acc = std::move(next);
    }
    out = std::move(acc);
}

} // namespace

Ldo::Ldo(int dim, int arity, bool polarized)
    : dim_(dim), arity_(arity), polarized_(polarized) {
    check_arg(dim >= 1 && arity >= 1, "Ldo needs dim >= 1, arity >= 1");
}

Ldo Ldo::identity(int dim) {
    Ldo a(dim, 1);
    LdoKey key;
    key.slots.assign(1, SlotWord{MultiIndex(dim), {}});
    a.add_term(key, LocalFunction::constant(dim, Rat(1)));
    return a;
}

Ldo Ldo::coefficient(int dim, int arity, const LocalFunction& f) {
    Ldo a(dim, arity);
    LdoKey key;
    key.slots.assign(static_cast<size_t>(arity), SlotWord{MultiIndex(dim), {}});
    a.add_term(key, f);
    return a;
}

Ldo Ldo::xi(int dim, int arity, int slot, int axis) {
    check_arg(slot >= 1 && slot <= arity, "slot out of range");
    check_arg(axis >= 1 && axis <= dim, "axis out of range");
    Ldo a = coefficient(dim, arity, LocalFunction::constant(dim, Rat(1)));
    return a.letter_bump(slot, axis);
}

Ldo Ldo::eta(int dim, int arity, int slot, const MultiIndex& J) {
    check_arg(slot >= 1 && slot <= arity, "slot out of range");
    check_arg(J.dim() == dim, "jet index dimension mismatch");
    Ldo a(dim, arity);
    LdoKey key;
    key.slots.assign(static_cast<size_t>(arity), SlotWord{MultiIndex(dim), {}});
    key.slots[static_cast<size_t>(slot - 1)].eta[J] = 1;
    a.add_term(key, LocalFunction::constant(dim, Rat(1)));
    return a;
}

void Ldo::add_term(const LdoKey& key, const LocalFunction& coeff) {
    if (coeff.is_zero()) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void Ldo::check_same_shape(const Ldo& b) const {
    check_arg(dim_ == b.dim_ && arity_ == b.arity_ && polarized_ == b.polarized_,
              "Ldo shape mismatch");
}

Ldo Ldo::operator+(const Ldo& b) const {
    if (is_zero() && terms_.empty() && dim_ == 0) return b;
    Ldo r = *this;
    r += b;
    return r;
}

Ldo& Ldo::operator+=(const Ldo& b) {
    if (dim_ == 0) {
        *this = b;
        return *this;
    }
    check_same_shape(b);
    for (const auto& [k, c] : b.terms_) add_term(k, c);
    return *this;
}

Ldo Ldo::operator-(const Ldo& b) const { return *this + b.scaled(Rat(-1)); }

Ldo Ldo::operator-() const { return scaled(Rat(-1)); }

Ldo Ldo::scaled(const Rat& c) const {
    Ldo r(dim_, arity_, polarized_);
    if (c == 0) return r;
    for (const auto& [k, q] : terms_) r.terms_.emplace(k, q.scaled(c));
    return r;
}

bool Ldo::operator==(const Ldo& b) const {
    if (is_zero() && b.is_zero()) return true;
    return dim_ == b.dim_ && arity_ == b.arity_ && polarized_ == b.polarized_ &&
           terms_ == b.terms_;
}

Ldo Ldo::prepend_xi(int slot, int axis) const {
    check_arg(!polarized_, "prepend_xi needs unpolarized operand");
    check_arg(slot >= 1 && slot <= arity_, "slot out of range");
    Ldo r = coeff_total_derivative(axis);
    r += letter_bump(slot, axis);
    return r;
}

Ldo Ldo::prepend_eta(int slot, const MultiIndex& J) const {
    check_arg(!polarized_, "prepend_eta needs unpolarized operand");
    check_arg(slot >= 1 && slot <= arity_, "slot out of range");
    Ldo r(dim_, arity_, polarized_);
    size_t sj = static_cast<size_t>(slot - 1);
    for (const auto& [key, q] : terms_) {
        // coefficient branch of the Leibniz crossing
        r.add_term(key, q.partial_u(J));
        // crossing the slot's xi letters
        std::vector<EtaCross> crosses;
        enumerate_eta_cross(J, key.slots[sj].xi, crosses);
        for (const EtaCross& c : crosses) {
            LdoKey nk = key;
            nk.slots[sj].xi = c.xi;
            nk.slots[sj].eta[c.jet] += 1;
            r.add_term(nk, q.scaled(Rat(static_cast<long>(c.mult))));
        }
    }
    return r;
}

Ldo Ldo::premultiply(const LocalFunction& f) const {
    Ldo r(dim_, arity_, polarized_);
    for (const auto& [k, q] : terms_) r.add_term(k, q * f);
    return r;
}

LocalFunction Ldo::apply(const std::vector<LocalFunction>& args) const {
    if (polarized_) return depolarized_form().apply(args);
    check_arg(static_cast<int>(args.size()) == arity_, "arity mismatch in apply");
    for (const auto& a : args)
        check_arg(a.dim() == dim_ || a.is_zero(), "dimension mismatch in apply");
    LocalFunction out(dim_);
    for (const auto& [key, p] : terms_) {
        LocalFunction val = p;
        for (int j = 0; j < arity_; ++j) {
            LocalFunction g = args[static_cast<size_t>(j)];
            for (const auto& [J, e] : key.slots[static_cast<size_t>(j)].eta) {
                for (int k = 0; k < e; ++k) g = g.partial_u(J);
            }
            g = g.total_derivative_multi(key.slots[static_cast<size_t>(j)].xi);
            val = val * g;
        }
        out += val;
    }
    return out;
}

// One eta letter of the outer operator entering a composite block: the
// chain rule distributes it over the block's coefficient and every slot.
static Ldo eta_enter(const Ldo& b, const MultiIndex& J) {
    Ldo r(b.dim(), b.arity(), false);
    for (const auto& [key, q] : b.terms()) {
        r.add_term(key, q.partial_u(J));
        for (int s = 0; s < b.arity(); ++s) {
            std::vector<EtaCross> crosses;
            enumerate_eta_cross(J, key.slots[static_cast<size_t>(s)].xi, crosses);
            for (const EtaCross& c : crosses) {
                LdoKey nk = key;
                nk.slots[static_cast<size_t>(s)].xi = c.xi;
                nk.slots[static_cast<size_t>(s)].eta[c.jet] += 1;
                r.add_term(nk, q.scaled(Rat(static_cast<long>(c.mult))));
            }
        }
    }
    return r;
}

Ldo Ldo::compose(const Ldo& outer, const std::vector<Ldo>& inner) {
    check_arg(!outer.polarized_, "compose needs unpolarized operands");
    check_arg(static_cast<int>(inner.size()) == outer.arity_,
              "compose: inner count must equal outer arity");
    int dim = outer.dim_;
    int m = 0;
    for (const Ldo& b : inner) {
        check_arg(!b.polarized_, "compose needs unpolarized operands");
        check_arg(b.dim_ == dim, "compose: dimension mismatch");
        m += b.arity_;
    }
    Ldo result(dim, m);
    for (const auto& [akey, p] : outer.terms_) {
        std::vector<Ldo> blocks;
        blocks.reserve(inner.size());
        for (size_t t = 0; t < inner.size(); ++t) {
            Ldo cur = inner[t];
            // outer letters act innermost-first: eta, then xi
            for (const auto& [J, e] : akey.slots[t].eta) {
                for (int k = 0; k < e; ++k) cur = eta_enter(cur, J);
            }
            for (int i = 1; i <= dim; ++i) {
                for (int k = 0; k < akey.slots[t].xi[i]; ++k)
                    cur = cur.total_derivative_compose(i);
            }
            blocks.push_back(std::move(cur));
        }
        // cartesian product of block terms
        std::vector<std::pair<LdoKey, LocalFunction>> partial;
        partial.emplace_back(LdoKey{}, p);
        for (const Ldo& blk : blocks) {
            std::vector<std::pair<LdoKey, LocalFunction>> next;
            for (const auto& [k0, c0] : partial) {
                for (const auto& [bk, bc] : blk.terms()) {
                    LdoKey nk = k0;
                    nk.slots.insert(nk.slots.end(), bk.slots.begin(), bk.slots.end());
                    next.emplace_back(std::move(nk), c0 * bc);
                }
            }
            partial = std::move(next);
        }
        for (auto& [k, c] : partial) result.add_term(k, c);
    }
    return result;
}

Ldo Ldo::compose_slot(int slot, const Ldo& b) const {
    check_arg(slot >= 1 && slot <= arity_, "slot out of range");
    std::vector<Ldo> inner;
    inner.reserve(static_cast<size_t>(arity_));
    for (int j = 1; j <= arity_; ++j) {
        inner.push_back(j == slot ? b : Ldo::identity(dim_));
    }
    return compose(*this, inner);
}

Ldo Ldo::sym_action(const std::vector<int>& sigma) const {
    check_arg(!polarized_, "sym_action needs unpolarized operand");
    check_arg(static_cast<int>(sigma.size()) == arity_, "permutation size mismatch");
    Ldo r(dim_, arity_, false);
    for (const auto& [key, q] : terms_) {
        LdoKey nk;
        nk.slots.resize(static_cast<size_t>(arity_));
        for (int m = 1; m <= arity_; ++m) {
            int src = sigma[static_cast<size_t>(m - 1)];
            nk.slots[static_cast<size_t>(m - 1)] = key.slots[static_cast<size_t>(src - 1)];
        }
        r.add_term(nk, q);
    }
    return r;
}

// Expand exponent e of one axis over several target letters with given
// signs; emits (multinomial coefficient * sign, split) pairs.
namespace {
struct Split {
    long long mult;
    std::vector<int> parts;
};

void enumerate_splits(int e, int nparts, std::vector<Split>& out) {
    out.clear();
    std::vector<int> cur(static_cast<size_t>(nparts), 0);
    // recursive composition enumeration with running binomial coefficient
    struct Rec {
        int nparts;
        std::vector<Split>& out;
        std::vector<int>& cur;
        void go(int pos, int rem, long long mult) {
            if (pos == nparts - 1) {
                cur[static_cast<size_t>(pos)] = rem;
                out.push_back({mult, cur});
                return;
            }
            for (int c = 0; c <= rem; ++c) {
                cur[static_cast<size_t>(pos)] = c;
                go(pos + 1, rem - c, mult * binom(rem, c));
            }
        }
    } rec{nparts, out, cur};
    rec.go(0, e, 1);
}
} // namespace

Ldo Ldo::polarized_form() const {
    check_arg(!polarized_, "already polarized");
    Ldo r(dim_, arity_, true);
    for (const auto& [key, q] : terms_) {
        // xi_1 = zeta - xi_2 - ... - xi_n, axis by axis
        std::vector<std::pair<LdoKey, long long>> acc{{key, 1}};
        for (int i = 1; i <= dim_; ++i) {
            int e = key.slots[0].xi[i];
            if (e == 0) continue;
            std::vector<Split> splits;
            enumerate_splits(e, arity_, splits); // parts: zeta, xi_2..xi_n
            std::vector<std::pair<LdoKey, long long>> next;
            for (const auto& [k0, m0] : acc) {
                for (const Split& sp : splits) {
                    LdoKey nk = k0;
                    nk.slots[0].xi.at(i) = sp.parts[0];
                    long long sign = ((e - sp.parts[0]) % 2 == 0) ? 1 : -1;
                    for (int l = 2; l <= arity_; ++l) {
                        nk.slots[static_cast<size_t>(l - 1)].xi.at(i) +=
                            sp.parts[static_cast<size_t>(l - 1)];
                    }
                    next.emplace_back(nk, m0 * sp.mult * sign);
                }
            }
            acc = std::move(next);
        }
        for (const auto& [k, m] : acc)
            r.add_term(k, q.scaled(Rat(static_cast<long>(m))));
    }
    return r;
}

Ldo Ldo::depolarized_form() const {
    check_arg(polarized_, "already unpolarized");
    Ldo r(dim_, arity_, false);
    for (const auto& [key, q] : terms_) {
        // zeta = xi_1 + ... + xi_n, axis by axis
        std::vector<std::pair<LdoKey, long long>> acc;
        {
            LdoKey k0 = key;
            for (int i = 1; i <= dim_; ++i) k0.slots[0].xi.at(i) = 0;
            acc.emplace_back(k0, 1);
        }
        for (int i = 1; i <= dim_; ++i) {
            int e = key.slots[0].xi[i];
            if (e == 0) continue;
            std::vector<Split> splits;
            enumerate_splits(e, arity_, splits); // parts: xi_1..xi_n
            std::vector<std::pair<LdoKey, long long>> next;
            for (const auto& [k0, m0] : acc) {
                for (const Split& sp : splits) {
                    LdoKey nk = k0;
                    for (int l = 1; l <= arity_; ++l) {
                        nk.slots[static_cast<size_t>(l - 1)].xi.at(i) +=
                            sp.parts[static_cast<size_t>(l - 1)];
                    }
                    next.emplace_back(nk, m0 * sp.mult);
                }
            }
            acc = std::move(next);
        }
        for (const auto& [k, m] : acc)
            r.add_term(k, q.scaled(Rat(static_cast<long>(m))));
    }
    return r;
}

Ldo Ldo::characteristic() const {
    const Ldo& P = *this;
    Ldo pol = polarized_ ? P : P.polarized_form();
    Ldo out(dim_, arity_, true);
    for (const auto& [key, q] : pol.terms()) {
        MultiIndex I1 = key.slots[0].xi;
        LdoKey nk = key;
        for (int i = 1; i <= dim_; ++i) nk.slots[0].xi.at(i) = 0;
        LocalFunction nq = q.total_derivative_multi(I1);
        if (I1.order() % 2 != 0) nq = -nq;
        out.add_term(nk, nq);
    }
    return polarized_ ? out : out.depolarized_form();
}

Ldo Ldo::adjoint() const {
    check_arg(arity_ == 1, "adjoint defined for arity 1 only");
    check_arg(!polarized_, "adjoint needs unpolarized operand");
    Ldo r(dim_, 1, false);
    for (const auto& [key, a] : terms_) {
        check_arg(key.slots[0].eta.empty(),
                  "adjoint defined for horizontal operators only");
        Ldo cur = Ldo::coefficient(dim_, 1, a);
        const MultiIndex& K = key.slots[0].xi;
        for (int i = 1; i <= dim_; ++i) {
            for (int k = 0; k < K[i]; ++k) cur = cur.total_derivative_compose(i);
        }
        if (K.order() % 2 != 0) cur = -cur;
        r += cur;
    }
    return r;
}

Ldo Ldo::theta(int axis, int slot) const {
    check_arg(axis >= 1 && axis <= dim_, "axis out of range");
    check_arg(slot >= 1 && slot <= arity_, "slot out of range");
    Ldo r(dim_, arity_, polarized_);
    size_t sj = static_cast<size_t>(slot - 1);
    for (const auto& [key, q] : terms_) {
        for (const auto& [J, e] : key.slots[sj].eta) {
            if (J[axis] == 0) continue;
            LdoKey nk = key;
            auto& em = nk.slots[sj].eta;
            if (e == 1) {
                em.erase(J);
            } else {
                em[J] = e - 1;
            }
            em[J.lowered(axis)] += 1;
            r.add_term(nk, q.scaled(Rat(e)));
        }
    }
    return r;
}

Ldo Ldo::coeff_total_derivative(int axis) const {
    Ldo r(dim_, arity_, polarized_);
    for (const auto& [key, q] : terms_) r.add_term(key, q.total_derivative(axis));
    return r;
}

Ldo Ldo::letter_bump(int slot, int axis) const {
    check_arg(slot >= 1 && slot <= arity_, "slot out of range");
    check_arg(axis >= 1 && axis <= dim_, "axis out of range");
    Ldo r(dim_, arity_, polarized_);
    for (const auto& [key, q] : terms_) {
        LdoKey nk = key;
        nk.slots[static_cast<size_t>(slot - 1)].xi.at(axis) += 1;
        r.add_term(nk, q);
    }
    return r;
}

Ldo Ldo::compose_total_derivative(int axis, int slot) const {
    check_arg(slot >= 1 && slot <= arity_, "slot out of range");
    if (!polarized_ || slot >= 2) {
        return letter_bump(slot, axis) + theta(axis, slot);
    }
    // polarized slot 1: xi^i_1 = zeta^i - xi^i_2 - ... - xi^i_n
    Ldo r = letter_bump(1, axis) + theta(axis, 1);
    for (int l = 2; l <= arity_; ++l) r = r - letter_bump(l, axis);
    return r;
}

Ldo Ldo::total_derivative_compose(int axis) const {
    Ldo r = coeff_total_derivative(axis);
    if (polarized_) {
        r += letter_bump(1, axis);
    } else {
        for (int j = 1; j <= arity_; ++j) r += letter_bump(j, axis);
    }
    return r;
}

int Ldo::max_zeta_order() const {
    check_arg(polarized_, "max_zeta_order needs polarized operand");
    int best = 0;
    for (const auto& [key, q] : terms_) best = std::max(best, key.slots[0].xi.order());
    return best;
}

int Ldo::drop_floor() const {
    if (terms_.empty()) return INT_MAX;
    int floor = INT_MAX;
    for (const auto& [key, q] : terms_) {
        int term_max = -1;
        for (const SlotWord& w : key.slots) {
            for (const auto& [J, e] : w.eta) term_max = std::max(term_max, J.order());
        }
        if (term_max < 0) return -1; // eta-free term: not droppable
        floor = std::min(floor, term_max);
    }
    return floor;
}

int Ldo::max_eta_order() const {
    int best = -1;
    for (const auto& [key, q] : terms_) {
        for (const SlotWord& w : key.slots) {
            for (const auto& [J, e] : w.eta) best = std::max(best, J.order());
        }
    }
    return best;
}

Ldo random_ldo(Rng& rng, int dim, int arity, const LdoGenParams& p) {
    Ldo a(dim, arity);
    int nterms = rng.uniform(1, p.max_terms);
    for (int t = 0; t < nterms; ++t) {
        LdoKey key;
        key.slots.assign(static_cast<size_t>(arity), SlotWord{MultiIndex(dim), {}});
        for (int j = 0; j < arity; ++j) {
            int xo = rng.uniform(0, p.max_xi_order);
            for (int k = 0; k < xo; ++k)
                key.slots[static_cast<size_t>(j)].xi.at(rng.uniform(1, dim)) += 1;
            int ne = rng.uniform(0, p.max_eta_letters);
            for (int k = 0; k < ne; ++k) {
                MultiIndex J(dim);
                int o = rng.uniform(0, p.max_eta_order);
                for (int s = 0; s < o; ++s) J.at(rng.uniform(1, dim)) += 1;
                key.slots[static_cast<size_t>(j)].eta[J] += 1;
            }
        }
        a.add_term(key, random_lf(rng, dim, p.coeff));
    }
    return a;
}

} // namespace jetlift
