#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "envforge/dual.hpp"
#include "envforge/errors.hpp"

namespace envforge {

/// Expression AST for the family-definition language.
///
/// Grammar: standard infix with precedence ^ > unary- > * / > + -,
/// ^ right-associative. Functions: sin cos tan sqrt exp log abs atan2.
/// `pi` is folded to its numeric value at parse time, and a unary minus in
/// front of a literal folds into a negative constant, so that the canonical
/// printed form reparses to a structurally identical tree.
enum class NodeKind { Constant, Parameter, Unary, Binary, Call };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  double constant = 0.0;       // Constant
  int param = -1;              // Parameter: index into the declared list
  std::string name;            // Parameter or Call
  char op = 0;                 // Binary: + - * / ^   Unary: -
  std::vector<Expr> args;
};

/// Parse `source` against the declared parameter names.
/// Throws SyntaxError / UnknownIdentifier / ArityError.
Expr parse(const std::string& source, const std::vector<std::string>& params);

/// Canonical printed form; parse(pretty(e)) is structurally equal to e.
std::string pretty(const Expr& e);

/// Structural equality (constants compared bit-for-bit).
bool equal(const Expr& a, const Expr& b);

/// Plain evaluation. Throws DomainError outside the real domain.
double eval(const Expr& e, std::span<const double> point);

/// Forward-mode evaluation: value plus all first partials at `point`,
/// seeded with the identity. Throws DomainError outside the real domain.
DualNumber eval_dual(const Expr& e, std::span<const double> point);

/// Exact derivative of `e` with respect to parameter `param` as a new tree.
/// Calculus rules only; no simplification beyond dropping additive zeros and
/// multiplicative ones introduced by the rules themselves.
Expr derive(const Expr& e, int param);

/// Replace every occurrence of parameter `param` by `replacement` and
/// renumber the remaining parameter nodes against `new_params` (matched by
/// name; `replacement` must already be expressed in `new_params`).
Expr substitute(const Expr& e, int param, const Expr& replacement,
                const std::vector<std::string>& old_params,
                const std::vector<std::string>& new_params);

// Programmatic builders (used by the derived-family constructors; they apply
// the same constant folds as `derive`).
Expr mk_const(double v);
Expr mk_param(int index, const std::string& name);
Expr mk_binary(char op, Expr a, Expr b);
Expr mk_neg(Expr a);
Expr mk_call(const std::string& name, std::vector<Expr> args);
inline Expr mk_add(Expr a, Expr b) { return mk_binary('+', std::move(a), std::move(b)); }
inline Expr mk_sub(Expr a, Expr b) { return mk_binary('-', std::move(a), std::move(b)); }
inline Expr mk_mul(Expr a, Expr b) { return mk_binary('*', std::move(a), std::move(b)); }
inline Expr mk_div(Expr a, Expr b) { return mk_binary('/', std::move(a), std::move(b)); }
inline Expr mk_pow(Expr a, Expr b) { return mk_binary('^', std::move(a), std::move(b)); }

}  // namespace envforge
