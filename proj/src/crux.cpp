#include "jetlift/crux.hpp"

#include "jetlift/errors.hpp"

#include <algorithm>
#include <cstdint>

namespace jetlift {

CruxReport check_crux(const Ldo& A) {
    check_arg(A.arity() >= 2, "check_crux needs arity >= 2");
    Ldo chi = A.characteristic();
    if (!chi.polarized()) chi = chi.polarized_form();
    int N = A.dim();
    int n = A.arity();

    CruxReport rep;
    rep.crux_ok.resize(static_cast<size_t>(N));
    rep.crux2_ok.assign(static_cast<size_t>(N),
                        std::vector<bool>(static_cast<size_t>(n - 1)));
    for (int i = 1; i <= N; ++i) {
        Ldo theta_sum(chi.dim(), chi.arity(), true);
        for (int j = 1; j <= n; ++j) theta_sum += chi.theta(i, j);
        bool ok = (theta_sum == chi.coeff_total_derivative(i));
        rep.crux_ok[static_cast<size_t>(i - 1)] = ok;
        rep.all_ok = rep.all_ok && ok;
        for (int j = 2; j <= n; ++j) {
            bool ok2 = (chi.theta(i, j) == -chi.letter_bump(j, i));
            rep.crux2_ok[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 2)] = ok2;
            rep.all_ok = rep.all_ok && ok2;
        }
    }
    return rep;
}

namespace {

// Per-slot eta multisets of a term, with the letter-free module part stripped.
using EtaKey = std::vector<std::map<MultiIndex, int>>;

int eta_weight(const EtaKey& k) {
    int w = 0;
    for (const auto& slot : k) {
        for (const auto& [J, e] : slot) w += J.order() * e;
    }
    return w;
}

std::vector<int> eta_counts(const EtaKey& k) {
    std::vector<int> c;
    c.reserve(k.size());
    for (const auto& slot : k) {
        int n = 0;
        for (const auto& [J, e] : slot) n += e;
        c.push_back(n);
    }
    return c;
}

// All multi-indices of the given total order.
void enumerate_indices(int dim, int order, std::vector<MultiIndex>& out) {
    MultiIndex cur(dim);
    struct Rec {
        int dim;
        std::vector<MultiIndex>& out;
        MultiIndex& cur;
        void go(int axis, int rem) {
            if (axis == dim) {
                cur.at(dim) = rem;
                out.push_back(cur);
                return;
            }
            for (int e = 0; e <= rem; ++e) {
                cur.at(axis) = e;
                go(axis + 1, rem - e);
            }
        }
    } rec{dim, out, cur};
    rec.go(1, order);
}

// All multisets of `count` multi-indices, each of order <= cap, with the
// given total order. Non-decreasing selection avoids duplicates.
void enumerate_multisets(int dim, int count, int order, int cap,
                         std::vector<std::map<MultiIndex, int>>& out) {
    std::vector<MultiIndex> universe;
    for (int o = 0; o <= std::min(order, cap); ++o)
        enumerate_indices(dim, o, universe);
    std::vector<MultiIndex> chosen;
    struct Rec {
        const std::vector<MultiIndex>& universe;
        std::vector<std::map<MultiIndex, int>>& out;
        std::vector<MultiIndex>& chosen;
        void go(size_t start, int left, int wleft) {
            if (left == 0) {
                if (wleft != 0) return;
                std::map<MultiIndex, int> m;
                for (const MultiIndex& J : chosen) m[J] += 1;
                out.push_back(std::move(m));
                return;
            }
            for (size_t i = start; i < universe.size(); ++i) {
                if (universe[i].order() > wleft) continue;
                chosen.push_back(universe[i]);
                go(i, left - 1, wleft - universe[i].order());
                chosen.pop_back();
            }
        }
    } rec{universe, out, chosen};
    rec.go(0, count, order);
}

// All per-slot eta configurations with the given counts, total weight, and
// per-letter order cap.
void enumerate_eta_keys(int dim, const std::vector<int>& counts, int weight,
                        int cap, std::vector<EtaKey>& out) {
    EtaKey cur(counts.size());
    struct Rec {
        int dim, cap;
        const std::vector<int>& counts;
        std::vector<EtaKey>& out;
        EtaKey& cur;
        void go(size_t slot, int wleft) {
            if (slot == counts.size()) {
                if (wleft == 0) out.push_back(cur);
                return;
            }
            for (int w = 0; w <= wleft; ++w) {
                std::vector<std::map<MultiIndex, int>> opts;
                enumerate_multisets(dim, counts[slot], w, cap, opts);
                for (auto& m : opts) {
                    cur[slot] = std::move(m);
                    go(slot + 1, wleft - w);
                }
                cur[slot].clear();
            }
        }
    } rec{dim, cap, counts, out, cur};
    rec.go(0, weight);
}

// Module element: an arity-n polarized Ldo with neither diagonal nor eta
// letters (coefficients in Loc(E)[xi_2..xi_n]).
Ldo module_zero(int dim, int arity) { return Ldo(dim, arity, true); }

Ldo with_eta(const Ldo& module_elt, const EtaKey& alpha) {
    Ldo r(module_elt.dim(), module_elt.arity(), true);
    for (const auto& [key, q] : module_elt.terms()) {
        LdoKey nk = key;
        for (size_t j = 0; j < alpha.size(); ++j) nk.slots[j].eta = alpha[j];
        r.add_term(nk, q);
    }
    return r;
}

struct LevelSystem {
    std::vector<EtaKey> unknowns;
    std::map<EtaKey, size_t> index;
    std::vector<std::vector<Rat>> rows;
    std::vector<Ldo> rhs;
};

// Gaussian elimination over Q with module-valued right-hand sides.
// Free unknowns are zero-filled. Returns false on inconsistency.
bool solve_level(LevelSystem& sys, std::vector<Ldo>& values,
                 bool& underdetermined, int dim, int arity) {
    size_t nrows = sys.rows.size();
    size_t ncols = sys.unknowns.size();
    std::vector<size_t> pivot_of_col(ncols, SIZE_MAX);
    size_t rank = 0;
    for (size_t col = 0; col < ncols && rank < nrows; ++col) {
        size_t piv = SIZE_MAX;
        for (size_t r = rank; r < nrows; ++r) {
            if (sys.rows[r][col] != 0) {
                piv = r;
                break;
            }
        }
        if (piv == SIZE_MAX) continue;
        std::swap(sys.rows[rank], sys.rows[piv]);
        std::swap(sys.rhs[rank], sys.rhs[piv]);
        Rat p = sys.rows[rank][col];
        for (size_t c = col; c < ncols; ++c) sys.rows[rank][c] /= p;
        sys.rhs[rank] = sys.rhs[rank].scaled(Rat(1) / p);
        for (size_t r = 0; r < nrows; ++r) {
            if (r == rank) continue;
            Rat f = sys.rows[r][col];
            if (f == 0) continue;
            for (size_t c = col; c < ncols; ++c)
                sys.rows[r][c] -= f * sys.rows[rank][c];
            sys.rhs[r] = sys.rhs[r] - sys.rhs[rank].scaled(f);
        }
        pivot_of_col[col] = rank;
        ++rank;
    }
    for (size_t r = rank; r < nrows; ++r) {
        if (!sys.rhs[r].is_zero()) return false;
    }
    // In reduced form a pivot row's only other nonzero entries sit in free
    // columns, and free unknowns are taken as zero, so the value is the RHS.
    values.assign(ncols, module_zero(dim, arity));
    for (size_t col = 0; col < ncols; ++col) {
        if (pivot_of_col[col] == SIZE_MAX) {
            underdetermined = true;
        } else {
            values[col] = sys.rhs[pivot_of_col[col]];
        }
    }
    return true;
}

} // namespace

ExtendResult extend_minimal(const Ldo& minimal, int bound) {
    check_arg(minimal.arity() >= 2, "extend_minimal needs arity >= 2");
    check_arg(bound >= 0, "bound must be non-negative");
    Ldo m0 = minimal.polarized() ? minimal : minimal.polarized_form();
    check_arg(m0.is_zero() || m0.max_zeta_order() == 0,
              "minimal part must be free of diagonal letters");
    int dim = minimal.dim();
    int n = minimal.arity();

    // Split the minimal part by per-slot eta count; the relations preserve
    // those counts, so each block extends independently.
    std::map<std::vector<int>, std::map<EtaKey, Ldo>> blocks;
    for (const auto& [key, q] : m0.terms()) {
        EtaKey ek;
        ek.reserve(key.slots.size());
        for (const SlotWord& w : key.slots) ek.push_back(w.eta);
        check_arg(eta_weight(ek) == 0,
                  "minimal part must have eta letters of jet order 0 only");
        LdoKey stripped = key;
        for (SlotWord& w : stripped.slots) w.eta.clear();
        auto& blk = blocks[eta_counts(ek)];
        auto [it, fresh] = blk.try_emplace(ek, module_zero(dim, n));
        (void)fresh;
        it->second.add_term(stripped, q);
    }

    ExtendResult res;
    res.chi = Ldo(dim, n, true);
    for (auto& [counts, solved] : blocks) {
        int total = 0;
        for (int c : counts) total += c;
        if (total == 0) {
            // The slot relations force an eta-free character part to vanish
            // (multiplying by a letter is injective), so nonzero data here
            // can never extend.
            res.consistent = false;
            res.detail = "eta-free minimal term cannot satisfy the slot relations";
            return res;
        }
        for (int w = 0; w < bound * total; ++w) {
            std::vector<EtaKey> betas;
            enumerate_eta_keys(dim, counts, w, bound, betas);
            LevelSystem sys;
            enumerate_eta_keys(dim, counts, w + 1, bound, sys.unknowns);
            if (sys.unknowns.empty()) break;
            for (size_t c = 0; c < sys.unknowns.size(); ++c)
                sys.index[sys.unknowns[c]] = c;

            auto known = [&](const EtaKey& b) -> Ldo {
                auto it = solved.find(b);
                return it == solved.end() ? module_zero(dim, n) : it->second;
            };
            // Raised keys for one slot: alpha = beta with one slot-j letter
            // K replaced by iK; Theta contributes alpha_j(iK) = beta_j(iK)+1.
            // An equation is used only when every raised key stays within
            // the per-letter order bound.
            auto add_slot_terms = [&](const EtaKey& beta, int i, int j,
                                      std::vector<Rat>& row) -> bool {
                for (const auto& [K, e] : beta[static_cast<size_t>(j - 1)]) {
                    (void)e;
                    EtaKey alpha = beta;
                    auto& slot = alpha[static_cast<size_t>(j - 1)];
                    if (slot[K] == 1) slot.erase(K);
                    else slot[K] -= 1;
                    MultiIndex iK = K.raised(i);
                    if (iK.order() > bound) return false;
                    slot[iK] += 1;
                    row[sys.index.at(alpha)] += Rat(slot[iK]);
                }
                return true;
            };
            for (const EtaKey& beta : betas) {
                Ldo cb = known(beta);
                for (int i = 1; i <= dim; ++i) {
                    std::vector<Rat> row(sys.unknowns.size(), Rat(0));
                    bool usable = true;
                    for (int j = 1; j <= n && usable; ++j)
                        usable = add_slot_terms(beta, i, j, row);
                    if (usable) {
                        sys.rows.push_back(std::move(row));
                        sys.rhs.push_back(cb.coeff_total_derivative(i));
                    }
                    for (int j = 2; j <= n; ++j) {
                        std::vector<Rat> row2(sys.unknowns.size(), Rat(0));
                        if (!add_slot_terms(beta, i, j, row2)) continue;
                        sys.rows.push_back(std::move(row2));
                        sys.rhs.push_back(-cb.letter_bump(j, i));
                    }
                }
            }
            std::vector<Ldo> values;
            if (!solve_level(sys, values, res.underdetermined, dim, n)) {
                res.consistent = false;
                res.detail = "inconsistent at eta-weight " + std::to_string(w + 1);
                return res;
            }
            for (size_t c = 0; c < sys.unknowns.size(); ++c) {
                if (!values[c].is_zero()) solved[sys.unknowns[c]] = values[c];
            }
        }
        for (const auto& [alpha, c] : solved) res.chi += with_eta(c, alpha);
    }
    return res;
}

} // namespace jetlift
