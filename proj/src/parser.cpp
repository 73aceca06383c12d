#include "jetlift/parser.hpp"

#include "jetlift/errors.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <utility>

namespace jetlift {

namespace {

[[noreturn]] void fail_at(int line, int col, const std::string& msg) {
    std::ostringstream os;
    os << "at " << line << ":" << col << ": " << msg;
    throw JetliftError(os.str());
}

struct Token {
    enum class Kind {
        Number, Name, LBrack, RBrack, LParen, RParen,
        Comma, Plus, Minus, Star, Caret, Slash, End
    };
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
    int col = 1;
};

using TK = Token::Kind;

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> toks;
    int line = 1, col = 1;
    size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (ch == '\n') { ++line; col = 1; ++i; continue; }
        if (ch == ' ' || ch == '\t' || ch == '\r') { ++col; ++i; continue; }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            t.kind = TK::Number;
            while (i < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[i]))) {
                t.text += text[i];
                ++i; ++col;
            }
            toks.push_back(std::move(t));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            t.kind = TK::Name;
            while (i < text.size() &&
                   std::isalpha(static_cast<unsigned char>(text[i]))) {
                t.text += text[i];
                ++i; ++col;
            }
            toks.push_back(std::move(t));
            continue;
        }
        switch (ch) {
        case '[': t.kind = TK::LBrack; break;
        case ']': t.kind = TK::RBrack; break;
        case '(': t.kind = TK::LParen; break;
        case ')': t.kind = TK::RParen; break;
        case ',': t.kind = TK::Comma; break;
        case '+': t.kind = TK::Plus; break;
        case '-': t.kind = TK::Minus; break;
        case '*': t.kind = TK::Star; break;
        case '^': t.kind = TK::Caret; break;
        case '/': t.kind = TK::Slash; break;
        default:
            fail_at(line, col,
                    std::string("unexpected character '") + ch + "'");
        }
        toks.push_back(t);
        ++i; ++col;
    }
    Token end;
    end.kind = TK::End;
    end.line = line;
    end.col = col;
    toks.push_back(end);
    return toks;
}

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

    ExprAST run() {
        ExprAST ast;
        ast.terms = parse_terms();
        if (cur().kind != TK::End)
            fail_at(cur().line, cur().col, "expected end of input");
        return ast;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek() const {
        return toks_[std::min(pos_ + 1, toks_.size() - 1)];
    }
    void advance() { if (pos_ + 1 < toks_.size()) ++pos_; }

    void expect(TK kind, const char* what) {
        if (cur().kind != kind)
            fail_at(cur().line, cur().col, std::string("expected ") + what);
        advance();
    }

    int expect_nat(const char* what) {
        if (cur().kind != TK::Number)
            fail_at(cur().line, cur().col, std::string("expected ") + what);
        if (cur().text.size() > 9)
            fail_at(cur().line, cur().col, "number too large");
        int v = std::stoi(cur().text);
        advance();
        return v;
    }

    std::vector<ExprTerm> parse_terms() {
        std::vector<ExprTerm> terms;
        terms.push_back(parse_term(1));
        while (cur().kind == TK::Plus || cur().kind == TK::Minus) {
            int sign = cur().kind == TK::Minus ? -1 : 1;
            advance();
            terms.push_back(parse_term(sign));
        }
        return terms;
    }

    ExprTerm parse_term(int sign) {
        ExprTerm t;
        t.sign = sign;
        t.factors.push_back(parse_factor());
        while (cur().kind == TK::Star) {
            advance();
            t.factors.push_back(parse_factor());
        }
        return t;
    }

    ExprNode parse_factor() {
        ExprNode n = parse_atom();
        if (cur().kind == TK::Caret) {
            advance();
            n.power = expect_nat("exponent");
        }
        return n;
    }

    Rat parse_rational(bool negative) {
        // cur() is the numerator
        std::string s = negative ? "-" : "";
        s += cur().text;
        advance();
        if (cur().kind == TK::Slash) {
            advance();
            if (cur().kind != TK::Number)
                fail_at(cur().line, cur().col, "expected denominator");
            if (mpz_class(cur().text) == 0)
                fail_at(cur().line, cur().col, "zero denominator");
            s += "/" + cur().text;
            advance();
        }
        Rat q(s);
        q.canonicalize();
        return q;
    }

    MultiIndex parse_mindex() {
        expect(TK::LParen, "'('");
        std::vector<int> entries;
        entries.push_back(expect_nat("index entry"));
        while (cur().kind == TK::Comma) {
            advance();
            entries.push_back(expect_nat("index entry"));
        }
        expect(TK::RParen, "')'");
        MultiIndex J(static_cast<int>(entries.size()));
        for (size_t k = 0; k < entries.size(); ++k)
            J.at(static_cast<int>(k) + 1) = entries[k];
        return J;
    }

    ExprNode parse_atom() {
        const Token t = cur();
        ExprNode n;
        n.line = t.line;
        n.col = t.col;
        switch (t.kind) {
        case TK::Minus:
            if (peek().kind != TK::Number)
                fail_at(t.line, t.col,
                        "'-' here must start a rational literal");
            advance();
            n.kind = ExprNode::Kind::Rational;
            n.value = parse_rational(true);
            return n;
        case TK::Number:
            n.kind = ExprNode::Kind::Rational;
            n.value = parse_rational(false);
            return n;
        case TK::LParen:
            advance();
            n.kind = ExprNode::Kind::Sub;
            n.sub = parse_terms();
            expect(TK::RParen, "')'");
            return n;
        case TK::Name:
            break;
        default:
            fail_at(t.line, t.col, "expected an atom");
        }
        advance();
        if (t.text == "x") {
            n.kind = ExprNode::Kind::X;
            expect(TK::LBrack, "'['");
            n.axis = expect_nat("axis");
            expect(TK::RBrack, "']'");
        } else if (t.text == "u") {
            n.kind = ExprNode::Kind::U;
            expect(TK::LBrack, "'['");
            n.index = parse_mindex();
            expect(TK::RBrack, "']'");
        } else if (t.text == "D") {
            n.kind = ExprNode::Kind::Xi;
            expect(TK::LBrack, "'['");
            n.slot = expect_nat("slot");
            expect(TK::Comma, "','");
            n.axis = expect_nat("axis");
            expect(TK::RBrack, "']'");
        } else if (t.text == "V") {
            n.kind = ExprNode::Kind::Eta;
            expect(TK::LBrack, "'['");
            n.slot = expect_nat("slot");
            expect(TK::Comma, "','");
            n.index = parse_mindex();
            expect(TK::RBrack, "']'");
        } else if (t.text == "Z") {
            n.kind = ExprNode::Kind::Zeta;
            expect(TK::LBrack, "'['");
            n.axis = expect_nat("axis");
            expect(TK::RBrack, "']'");
        } else if (t.text == "dx") {
            n.kind = ExprNode::Kind::Dx;
            expect(TK::LBrack, "'['");
            n.axes.push_back(expect_nat("axis"));
            while (cur().kind == TK::Comma) {
                advance();
                n.axes.push_back(expect_nat("axis"));
            }
            expect(TK::RBrack, "']'");
        } else {
            fail_at(t.line, t.col, "unknown name '" + t.text + "'");
        }
        return n;
    }
};

void check_axis(const ExprNode& n, int axis, int dim) {
    if (axis < 1 || axis > dim)
        fail_at(n.line, n.col,
                "axis " + std::to_string(axis) + " outside 1.." +
                    std::to_string(dim));
}

void check_slot(const ExprNode& n, int arity) {
    if (n.slot < 1 || n.slot > arity)
        fail_at(n.line, n.col,
                "slot " + std::to_string(n.slot) + " outside 1.." +
                    std::to_string(arity));
}

void check_index(const ExprNode& n, int dim) {
    if (n.index.dim() != dim)
        fail_at(n.line, n.col,
                "jet index has " + std::to_string(n.index.dim()) +
                    " entries, dimension is " + std::to_string(dim));
}

void validate_terms(const std::vector<ExprTerm>& terms,
                    const ParseContext& ctx);

void validate_node(const ExprNode& n, const ParseContext& ctx) {
    bool letters_ok =
        ctx.mode == ExprMode::Operator || ctx.mode == ExprMode::OpForm;
    bool dx_ok = ctx.mode == ExprMode::Form || ctx.mode == ExprMode::OpForm;
    switch (n.kind) {
    case ExprNode::Kind::Rational:
        break;
    case ExprNode::Kind::X:
        check_axis(n, n.axis, ctx.dim);
        break;
    case ExprNode::Kind::U:
        check_index(n, ctx.dim);
        break;
    case ExprNode::Kind::Xi:
        if (!letters_ok)
            fail_at(n.line, n.col, "D letters need an operator context");
        check_slot(n, ctx.arity);
        check_axis(n, n.axis, ctx.dim);
        break;
    case ExprNode::Kind::Eta:
        if (!letters_ok)
            fail_at(n.line, n.col, "V letters need an operator context");
        check_slot(n, ctx.arity);
        check_index(n, ctx.dim);
        break;
    case ExprNode::Kind::Zeta:
        if (!letters_ok)
            fail_at(n.line, n.col, "Z letters need an operator context");
        check_axis(n, n.axis, ctx.dim);
        break;
    case ExprNode::Kind::Dx:
        if (!dx_ok)
            fail_at(n.line, n.col, "dx needs a form context");
        for (int a : n.axes) check_axis(n, a, ctx.dim);
        break;
    case ExprNode::Kind::Sub:
        validate_terms(n.sub, ctx);
        break;
    }
}

void validate_terms(const std::vector<ExprTerm>& terms,
                    const ParseContext& ctx) {
    for (const ExprTerm& t : terms)
        for (const ExprNode& n : t.factors) validate_node(n, ctx);
}

// Evaluation value: wedge mask -> unpolarized operator. Letters are
// rewritten to normal form as they are prepended; polarization happens
// only when coercing into an OperatorForm.
struct EvalValue {
    std::map<uint32_t, Ldo> comps;

    void add(uint32_t mask, const Ldo& a) {
        if (a.is_zero()) return;
        auto it = comps.find(mask);
        if (it == comps.end()) {
            comps.emplace(mask, a);
            return;
        }
        it->second += a;
        if (it->second.is_zero()) comps.erase(it);
    }
};

// dx^m1 wedge dx^m2: false on overlap, else the merged mask and the
// crossing sign (-1)^#{(a,b) : a in m1, b in m2, a > b}.
bool wedge_merge(uint32_t m1, uint32_t m2, uint32_t& mask, int& sign) {
    if (m1 & m2) return false;
    mask = m1 | m2;
    int inversions = 0;
    for (int b = 0; b < 32; ++b) {
        if (!(m2 & (1u << b))) continue;
        uint32_t above = m1 >> (b + 1);
        while (above) {
            inversions += static_cast<int>(above & 1u);
            above >>= 1;
        }
    }
    sign = (inversions % 2 == 0) ? 1 : -1;
    return true;
}

// The wedge factor of a written axis list: false when an axis repeats,
// else the sorted mask and the sort parity.
bool dx_canonical(const std::vector<int>& axes, uint32_t& mask, int& sign) {
    mask = 0;
    sign = 1;
    for (int a : axes) {
        uint32_t bit = 1u << (a - 1);
        if (mask & bit) return false;
        // crossing the already placed axes above a
        int crossings = 0;
        uint32_t above = mask >> a;
        while (above) {
            crossings += static_cast<int>(above & 1u);
            above >>= 1;
        }
        if (crossings % 2) sign = -sign;
        mask |= bit;
    }
    return true;
}

// Left-multiply b by one normal-form word q * xi^alpha * eta^beta:
// prepend the innermost letters first, the coefficient last.
Ldo prepend_word(const LdoKey& key, const LocalFunction& q, Ldo b) {
    int arity = b.arity();
    int dim = b.dim();
    for (int j = 1; j <= arity; ++j)
        for (const auto& [J, e] : key.slots[static_cast<size_t>(j - 1)].eta)
            for (int r = 0; r < e; ++r) b = b.prepend_eta(j, J);
    for (int j = 1; j <= arity; ++j)
        for (int i = 1; i <= dim; ++i) {
            int e = key.slots[static_cast<size_t>(j - 1)].xi[i];
            for (int r = 0; r < e; ++r) b = b.prepend_xi(j, i);
        }
    return b.premultiply(q);
}

EvalValue eval_terms(const std::vector<ExprTerm>& terms, int dim, int arity);

EvalValue mul_values(const EvalValue& left, const EvalValue& right) {
    EvalValue out;
    for (const auto& [m1, a] : left.comps) {
        for (const auto& [m2, b] : right.comps) {
            uint32_t mask;
            int sign;
            if (!wedge_merge(m1, m2, mask, sign)) continue;
            for (const auto& [key, q] : a.terms()) {
                Ldo piece = prepend_word(key, q, b);
                out.add(mask, sign == 1 ? piece : piece.scaled(Rat(-1)));
            }
        }
    }
    return out;
}

EvalValue apply_factor_once(const ExprNode& n, const EvalValue& v, int dim,
                            int arity) {
    EvalValue out;
    switch (n.kind) {
    case ExprNode::Kind::Rational:
        if (n.value == 0) return out;
        for (const auto& [m, a] : v.comps) out.add(m, a.scaled(n.value));
        return out;
    case ExprNode::Kind::X:
        for (const auto& [m, a] : v.comps)
            out.add(m, a.premultiply(LocalFunction::x(dim, n.axis)));
        return out;
    case ExprNode::Kind::U:
        for (const auto& [m, a] : v.comps)
            out.add(m, a.premultiply(LocalFunction::u(dim, n.index)));
        return out;
    case ExprNode::Kind::Xi:
        for (const auto& [m, a] : v.comps)
            out.add(m, a.prepend_xi(n.slot, n.axis));
        return out;
    case ExprNode::Kind::Eta:
        for (const auto& [m, a] : v.comps)
            out.add(m, a.prepend_eta(n.slot, n.index));
        return out;
    case ExprNode::Kind::Zeta:
        for (const auto& [m, a] : v.comps)
            out.add(m, a.total_derivative_compose(n.axis));
        return out;
    case ExprNode::Kind::Dx: {
        uint32_t dmask;
        int dsign;
        if (!dx_canonical(n.axes, dmask, dsign)) return out;
        for (const auto& [m, a] : v.comps) {
            uint32_t mask;
            int sign;
            if (!wedge_merge(dmask, m, mask, sign)) continue;
            int s = dsign * sign;
            out.add(mask, s == 1 ? a : a.scaled(Rat(-1)));
        }
        return out;
    }
    case ExprNode::Kind::Sub:
        return mul_values(eval_terms(n.sub, dim, arity), v);
    }
    return out;
}

EvalValue eval_term(const ExprTerm& t, int dim, int arity) {
    EvalValue v;
    v.comps.emplace(0u, Ldo::coefficient(dim, arity,
                                         LocalFunction::constant(dim, 1)));
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
        for (int r = 0; r < it->power; ++r)
            v = apply_factor_once(*it, v, dim, arity);
        if (v.comps.empty()) break;
    }
    if (t.sign == -1) {
        EvalValue neg;
        for (const auto& [m, a] : v.comps) neg.add(m, a.scaled(Rat(-1)));
        return neg;
    }
    return v;
}

EvalValue eval_terms(const std::vector<ExprTerm>& terms, int dim, int arity) {
    EvalValue acc;
    for (const ExprTerm& t : terms) {
        EvalValue v = eval_term(t, dim, arity);
        for (const auto& [m, a] : v.comps) acc.add(m, a);
    }
    return acc;
}

LocalFunction coefficient_of(const Ldo& a) {
    LocalFunction f(a.dim());
    for (const auto& [key, q] : a.terms()) {
        for (const SlotWord& w : key.slots)
            check_arg(w.xi.order() == 0 && w.eta.empty(),
                      "letters where a plain function was expected");
        f += q;
    }
    return f;
}

int mask_degree(uint32_t m) {
    int d = 0;
    while (m) {
        d += static_cast<int>(m & 1u);
        m >>= 1;
    }
    return d;
}

int common_degree(const EvalValue& v, int expect_degree) {
    int degree = -1;
    for (const auto& [m, a] : v.comps) {
        (void)a;
        int d = mask_degree(m);
        if (degree == -1) degree = d;
        else if (degree != d)
            throw JetliftError("expression mixes form degrees " +
                               std::to_string(degree) + " and " +
                               std::to_string(d));
    }
    if (degree == -1) degree = expect_degree >= 0 ? expect_degree : 0;
    if (expect_degree >= 0 && degree != expect_degree)
        throw JetliftError("expression has form degree " +
                           std::to_string(degree) + ", expected " +
                           std::to_string(expect_degree));
    return degree;
}

EvalValue eval_checked(const std::string& text, const ParseContext& ctx) {
    ExprAST ast = parse_expr(text);
    validate_terms(ast.terms, ctx);
    int arity =
        (ctx.mode == ExprMode::Function || ctx.mode == ExprMode::Form)
            ? 1
            : ctx.arity;
    check_arg(ctx.dim >= 1 && ctx.dim <= 8, "dimension outside 1..8");
    check_arg(arity >= 1, "arity must be positive");
    return eval_terms(ast.terms, ctx.dim, arity);
}

} // namespace

ExprAST parse_expr(const std::string& text) { return Parser(text).run(); }

ParsedValue parse(const std::string& text, const ParseContext& ctx) {
    switch (ctx.mode) {
    case ExprMode::Function:
        return parse_lf(text, ctx.dim);
    case ExprMode::Operator:
        return parse_ldo(text, ctx.dim, ctx.arity);
    case ExprMode::Form:
        return parse_hform(text, ctx.dim);
    case ExprMode::OpForm:
        return parse_oform(text, ctx.dim, ctx.arity);
    }
    throw JetliftError("unknown parse mode");
}

LocalFunction parse_lf(const std::string& text, int dim) {
    ParseContext ctx{dim, 1, ExprMode::Function};
    EvalValue v = eval_checked(text, ctx);
    if (v.comps.empty()) return LocalFunction(dim);
    return coefficient_of(v.comps.begin()->second);
}

Ldo parse_ldo(const std::string& text, int dim, int arity, bool polarized) {
    ParseContext ctx{dim, arity, ExprMode::Operator};
    EvalValue v = eval_checked(text, ctx);
    Ldo a(dim, arity);
    if (!v.comps.empty()) a = v.comps.begin()->second;
    return polarized ? a.polarized_form() : a;
}

HorizontalForm parse_hform(const std::string& text, int dim,
                           int expect_degree) {
    ParseContext ctx{dim, 1, ExprMode::Form};
    EvalValue v = eval_checked(text, ctx);
    int degree = common_degree(v, expect_degree);
    HorizontalForm w(dim, degree);
    for (const auto& [m, a] : v.comps)
        w.add_component(m, coefficient_of(a));
    return w;
}

OperatorForm parse_oform(const std::string& text, int dim, int arity,
                         int expect_degree) {
    ParseContext ctx{dim, arity, ExprMode::OpForm};
    EvalValue v = eval_checked(text, ctx);
    int degree = common_degree(v, expect_degree);
    OperatorForm f(dim, arity, degree);
    for (const auto& [m, a] : v.comps) f.add_component(m, a);
    return f;
}

} // namespace jetlift
