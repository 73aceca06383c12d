#pragma once

#include "jetlift/opcomplex.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace jetlift {

// Surface syntax:
//
//   expr   := term (("+" | "-") term)*
//   term   := factor ("*" factor)*
//   factor := atom ("^" nat)?
//   atom   := rational | "x[" nat "]" | "u[" mindex "]"
//           | "D[" nat "," nat "]" | "V[" nat "," mindex "]" | "Z[" nat "]"
//           | "dx[" nat ("," nat)* "]" | "(" expr ")"
//   mindex := "(" nat ("," nat)* ")"
//
// A rational literal is ["-"] nat ["/" nat]; the sign belongs to the
// literal, which is how a leading minus is printed. Whitespace separates
// tokens. D[j,i] is the total-derivative letter on slot j along axis i,
// V[j,J] the vertical letter, Z[i] the diagonal letter (the composition
// D_i o -, acting on every slot at once). Letters act on everything to
// their right, so products evaluate right to left and are rewritten to
// normal form immediately; dx atoms wedge with the written order's sign.

struct ExprTerm;

struct ExprNode {
    enum class Kind { Rational, X, U, Xi, Eta, Zeta, Dx, Sub };
    Kind kind = Kind::Rational;
    Rat value;                 // Rational
    int slot = 0;              // Xi, Eta
    int axis = 0;              // X, Xi, Zeta
    MultiIndex index;          // U, Eta
    std::vector<int> axes;     // Dx, in written order
    std::vector<ExprTerm> sub; // Sub
    int power = 1;
    int line = 1;
    int col = 1;
};

struct ExprTerm {
    int sign = 1;
    std::vector<ExprNode> factors;
};

// One parsed expression: a signed sum of products.
struct ExprAST {
    std::vector<ExprTerm> terms;
};

// Syntax-only parse; shape against a context is checked at evaluation.
// All errors carry an "at line:col" position.
ExprAST parse_expr(const std::string& text);

// What the expression is allowed to denote. Function forbids letters and
// dx, Operator forbids dx, Form forbids letters, OpForm allows both.
enum class ExprMode { Function, Operator, Form, OpForm };

struct ParseContext {
    int dim = 1;
    int arity = 1;
    ExprMode mode = ExprMode::Operator;
};

using ParsedValue = std::variant<LocalFunction, Ldo, HorizontalForm, OperatorForm>;

// Parse, check axes/slots/index lengths against the context, evaluate,
// and coerce to the mode's type. Function and Form ignore ctx.arity.
ParsedValue parse(const std::string& text, const ParseContext& ctx);

// Typed entry points. The degree of a form cannot be read off the text
// when the form is zero, so expect_degree pins it; -1 infers it (0 for
// zero) and a mismatch with nonzero content throws. parse_ldo returns
// the polarized form of the parsed operator when polarized is set,
// matching how polarized operators print (Z and slot >= 2 letters).
LocalFunction parse_lf(const std::string& text, int dim);
Ldo parse_ldo(const std::string& text, int dim, int arity,
              bool polarized = false);
HorizontalForm parse_hform(const std::string& text, int dim,
                           int expect_degree = -1);
OperatorForm parse_oform(const std::string& text, int dim, int arity,
                         int expect_degree = -1);

} // namespace jetlift
