#include "jetlift/ldo.hpp"
#include "jetlift/localfunction.hpp"

#include <sstream>

// Canonical pretty-printing. Output stays inside the expression grammar:
// signed rational literals, x[i], u[(J)], D[j,i], V[j,(J)], Z[i], ^, *, +.
// Sums are joined with " + "/" - " by the sign of the leading rational.

namespace jetlift {

namespace {

std::string index_str(const MultiIndex& J) {
    std::string s = "(";
    for (int i = 1; i <= J.dim(); ++i) {
        if (i > 1) s += ",";
        s += std::to_string(J[i]);
    }
    return s + ")";
}

void append_power(std::string& s, const std::string& atom, int e) {
    if (e == 0) return;
    if (!s.empty()) s += "*";
    s += atom;
    if (e > 1) s += "^" + std::to_string(e);
}

// One monomial as (sign, magnitude text). The magnitude never starts
// with '-'.
std::pair<bool, std::string> monomial_str(const Monomial& m, const Rat& c) {
    bool neg = c < 0;
    Rat mag = neg ? Rat(-c) : c;
    std::string factors;
    for (int i = 1; i <= m.x.dim(); ++i)
        append_power(factors, "x[" + std::to_string(i) + "]", m.x[i]);
    for (const auto& [J, e] : m.u) append_power(factors, "u[" + index_str(J) + "]", e);
    if (factors.empty()) return {neg, rat_str(mag)};
    if (mag == 1) return {neg, factors};
    return {neg, rat_str(mag) + "*" + factors};
}

std::string join_signed(const std::vector<std::pair<bool, std::string>>& parts) {
    if (parts.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        const auto& [neg, mag] = parts[i];
        if (i == 0) {
            // a leading minus must live inside a rational literal
            if (!neg) {
                out = mag;
            } else if (!mag.empty() && (mag[0] >= '0' && mag[0] <= '9')) {
                out = "-" + mag;
            } else {
                out = "-1*" + mag;
            }
        } else {
            out += neg ? " - " : " + ";
            out += mag;
        }
    }
    return out;
}

} // namespace

std::string LocalFunction::str() const {
    std::vector<std::pair<bool, std::string>> parts;
    for (const auto& [m, c] : terms_) parts.push_back(monomial_str(m, c));
    return join_signed(parts);
}

std::string Ldo::str() const {
    std::vector<std::pair<bool, std::string>> parts;
    for (const auto& [key, q] : terms_) {
        std::string letters;
        for (int j = 1; j <= arity_; ++j) {
            const SlotWord& w = key.slots[static_cast<size_t>(j - 1)];
            for (int i = 1; i <= dim_; ++i) {
                std::string atom = (polarized_ && j == 1)
                                       ? "Z[" + std::to_string(i) + "]"
                                       : "D[" + std::to_string(j) + "," +
                                             std::to_string(i) + "]";
                append_power(letters, atom, w.xi[i]);
            }
        }
        for (int j = 1; j <= arity_; ++j) {
            const SlotWord& w = key.slots[static_cast<size_t>(j - 1)];
            for (const auto& [J, e] : w.eta)
                append_power(letters, "V[" + std::to_string(j) + "," + index_str(J) + "]", e);
        }
        if (q.is_constant()) {
            Rat c = q.constant_value();
            bool neg = c < 0;
            Rat mag = neg ? Rat(-c) : c;
            if (letters.empty()) {
                parts.emplace_back(neg, rat_str(mag));
            } else if (mag == 1) {
                parts.emplace_back(neg, letters);
            } else {
                parts.emplace_back(neg, rat_str(mag) + "*" + letters);
            }
        } else if (q.term_count() == 1) {
            auto [neg, mag] = monomial_str(q.terms().begin()->first, q.terms().begin()->second);
            parts.emplace_back(neg, letters.empty() ? mag : mag + "*" + letters);
        } else {
            std::string coeff = "(" + q.str() + ")";
            parts.emplace_back(false, letters.empty() ? coeff : coeff + "*" + letters);
        }
    }
    return join_signed(parts);
}

} // namespace jetlift
