#pragma once

// Noncommutative rational expressions and rectangular matrices of them.
//
// An Expr is a fixed *representative* of a rational function: evaluation,
// domain handling and zero-testing all refer to this representative, not to
// the equivalence class. The same AST evaluates at every level k. Variables
// are formally hermitian (adj(x_i) = x_i), matching evaluation at tuples of
// hermitian matrices; at non-hermitian points adjoint-free representatives
// still evaluate entrywise.

#include "fps/numkernel.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fps {

enum class ExprKind { Scalar, Var, Neg, Add, Mul, Inv, Adjoint };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  Complex value{};  // Scalar
  int var = 0;      // Var, 1-based
  ExprPtr a, b;     // children (a for unary, a/b for binary)
};

// Constructors normalize structurally: scalar constant folding, 0/1
// absorption, double negation, adjoints pushed to the leaves (where
// adj(x_i) = x_i and adj(c) = conj(c)), and scalars commuted to the left
// factor of a product. No rational simplification is performed.
ExprPtr make_scalar(Complex c);
ExprPtr make_var(int index);
ExprPtr make_neg(const ExprPtr& e);
ExprPtr make_add(const ExprPtr& x, const ExprPtr& y);
ExprPtr make_sub(const ExprPtr& x, const ExprPtr& y);
ExprPtr make_mul(const ExprPtr& x, const ExprPtr& y);
ExprPtr make_inv(const ExprPtr& e);
ExprPtr make_adj(const ExprPtr& e);

bool expr_equal(const ExprPtr& x, const ExprPtr& y);
bool is_zero_literal(const ExprPtr& e);

/// Largest variable index appearing in e (0 if none).
int max_var(const ExprPtr& e);

// ---- text form ---------------------------------------------------------------

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what), position(pos) {}
};
struct UnknownVariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grammar: variables x1..x{g} plus optional single-letter aliases (one per
/// variable, alias[i] names variable i+1); binary + - *, unary -, inv(e),
/// postfix e^-1, adj(e), parentheses, literals `a` and `bi`. `*` binds
/// tighter than `+`; `*` is noncommutative and preserves operand order.
ExprPtr parse(const std::string& text, int g,
              const std::vector<std::string>& aliases = {});

std::string print(const ExprPtr& e, const std::vector<std::string>& names = {});

// ---- evaluation ---------------------------------------------------------------

struct DomainError : std::runtime_error {
  std::string subexpression;
  double condition;  // sigma_min / sigma_max of the offending Inv argument
  DomainError(std::string sub, double cond)
      : std::runtime_error("inverse does not exist at this point (cond " +
                           std::to_string(cond) + ") in " + sub),
        subexpression(std::move(sub)),
        condition(cond) {}
};

struct EmptyDomainSuspected : std::runtime_error {
  std::string subexpression;
  explicit EmptyDomainSuspected(std::string sub)
      : std::runtime_error("no domain point found; failing subexpression: " + sub),
        subexpression(std::move(sub)) {}
};

struct EvalOptions {
  /// Inv refuses matrices with sigma_min/sigma_max below this floor. The
  /// default separates structural non-invertibility from ill-conditioning;
  /// raise it to restrict sampling to numerically robust domain points.
  double inv_cond_floor = 1e-9;
};

/// Evaluate at a tuple of equally sized square matrices. Scalars embed as
/// c*I_k. Inv refuses matrices below the conditioning floor (DomainError).
CMatrix eval(const ExprPtr& e, std::span<const CMatrix> point,
             const EvalOptions& opts = {});

/// Random tuple (GUE if hermitian, else Ginibre) at which eval succeeds;
/// up to max_trials resamples, then EmptyDomainSuspected.
std::vector<CMatrix> random_domain_point(const ExprPtr& e, int g, int k,
                                         bool hermitian, int max_trials,
                                         Rng& rng);

/// Probabilistic zero test at level k: true iff ||eval||_F <= tol*k at every
/// sampled domain point. One-sided: "false" is certain, "true" is
/// high-confidence (Lemma-kal-style genericity).
bool is_zero_fn(const ExprPtr& e, int g, int k, int trials, double tol, Rng& rng);

inline bool is_zero_fn(const ExprPtr& e, int g, int k, Rng& rng) {
  return is_zero_fn(e, g, k, 8, 1e-8, rng);
}

// ---- matrices of expressions ---------------------------------------------------

struct ExprMatrix {
  int g = 0;
  int rows = 0;
  int cols = 0;
  std::vector<ExprPtr> entries;  // row-major
  std::vector<std::string> var_names;  // optional aliases, size g when present

  const ExprPtr& at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }
  ExprPtr& at(int r, int c) { return entries[static_cast<std::size_t>(r) * cols + c]; }
};

/// entry[i][j] == adj(entry[j][i]) structurally after normalization.
bool is_structurally_hermitian(const ExprMatrix& m);

/// Entrywise evaluation; result is (rows*k) x (cols*k).
CMatrix eval(const ExprMatrix& m, std::span<const CMatrix> point,
             const EvalOptions& opts = {});

}  // namespace fps
