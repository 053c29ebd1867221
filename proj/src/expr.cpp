#include "fps/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_map>

namespace fps {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

bool is_scalar(const ExprPtr& e, Complex c) {
  return e->kind == ExprKind::Scalar && e->value == c;
}

}  // namespace

bool is_zero_literal(const ExprPtr& e) { return is_scalar(e, Complex(0)); }

ExprPtr make_scalar(Complex c) { return node({.kind = ExprKind::Scalar, .value = c}); }

ExprPtr make_var(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  return node({.kind = ExprKind::Var, .var = index});
}

ExprPtr make_neg(const ExprPtr& e) {
  if (e->kind == ExprKind::Scalar) return make_scalar(-e->value);
  if (e->kind == ExprKind::Neg) return e->a;
  return node({.kind = ExprKind::Neg, .a = e});
}

ExprPtr make_add(const ExprPtr& x, const ExprPtr& y) {
  if (x->kind == ExprKind::Scalar && y->kind == ExprKind::Scalar)
    return make_scalar(x->value + y->value);
  if (is_zero_literal(x)) return y;
  if (is_zero_literal(y)) return x;
  return node({.kind = ExprKind::Add, .a = x, .b = y});
}

ExprPtr make_sub(const ExprPtr& x, const ExprPtr& y) { return make_add(x, make_neg(y)); }

ExprPtr make_mul(const ExprPtr& x, const ExprPtr& y) {
  if (x->kind == ExprKind::Scalar && y->kind == ExprKind::Scalar)
    return make_scalar(x->value * y->value);
  if (is_zero_literal(x) || is_zero_literal(y)) return make_scalar(0);
  if (is_scalar(x, Complex(1))) return y;
  if (is_scalar(y, Complex(1))) return x;
  // Scalars commute with everything; keep them on the left.
  if (y->kind == ExprKind::Scalar && x->kind != ExprKind::Scalar) return make_mul(y, x);
  return node({.kind = ExprKind::Mul, .a = x, .b = y});
}

ExprPtr make_inv(const ExprPtr& e) {
  if (e->kind == ExprKind::Scalar && e->value != Complex(0))
    return make_scalar(Complex(1) / e->value);
  if (e->kind == ExprKind::Neg) return make_neg(make_inv(e->a));
  return node({.kind = ExprKind::Inv, .a = e});
}

ExprPtr make_adj(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Scalar: return make_scalar(std::conj(e->value));
    case ExprKind::Var: return e;  // hermitian variables
    case ExprKind::Neg: return make_neg(make_adj(e->a));
    case ExprKind::Add: return make_add(make_adj(e->a), make_adj(e->b));
    case ExprKind::Mul: return make_mul(make_adj(e->b), make_adj(e->a));
    case ExprKind::Inv: return make_inv(make_adj(e->a));
    case ExprKind::Adjoint: return e->a;
  }
  return e;
}

bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
  if (x.get() == y.get()) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case ExprKind::Scalar: return x->value == y->value;
    case ExprKind::Var: return x->var == y->var;
    case ExprKind::Neg:
    case ExprKind::Inv:
    case ExprKind::Adjoint: return expr_equal(x->a, y->a);
    case ExprKind::Add:
    case ExprKind::Mul: return expr_equal(x->a, y->a) && expr_equal(x->b, y->b);
  }
  return false;
}

int max_var(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Scalar: return 0;
    case ExprKind::Var: return e->var;
    case ExprKind::Neg:
    case ExprKind::Inv:
    case ExprKind::Adjoint: return max_var(e->a);
    case ExprKind::Add:
    case ExprKind::Mul: return std::max(max_var(e->a), max_var(e->b));
  }
  return 0;
}

// ---- printing -----------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_complex(Complex c) {
  if (c.imag() == 0.0) return fmt_double(c.real());
  if (c.real() == 0.0) return fmt_double(c.imag()) + "i";
  std::string s = "(" + fmt_double(c.real());
  s += c.imag() < 0 ? "-" : "+";
  s += fmt_double(std::abs(c.imag())) + "i)";
  return s;
}

std::string var_name(int idx, const std::vector<std::string>& names) {
  if (idx >= 1 && static_cast<std::size_t>(idx) <= names.size() && !names[idx - 1].empty())
    return names[idx - 1];
  return "x" + std::to_string(idx);
}

std::string print_node(const ExprPtr& e, const std::vector<std::string>& names);

std::string print_child(const ExprPtr& c, bool parenthesize,
                        const std::vector<std::string>& names) {
  std::string s = print_node(c, names);
  return parenthesize ? "(" + s + ")" : s;
}

std::string print_node(const ExprPtr& e, const std::vector<std::string>& names) {
  switch (e->kind) {
    case ExprKind::Scalar: return fmt_complex(e->value);
    case ExprKind::Var: return var_name(e->var, names);
    case ExprKind::Neg:
      return "-" + print_child(e->a, e->a->kind == ExprKind::Add || e->a->kind == ExprKind::Mul,
                               names);
    case ExprKind::Add: {
      std::string lhs = print_child(e->a, false, names);
      // Subtraction sugar keeps the reparse structurally identical.
      const ExprPtr& r = e->b;
      if (r->kind == ExprKind::Neg)
        return lhs + " - " + print_child(r->a, r->a->kind == ExprKind::Add || r->a->kind == ExprKind::Mul, names);
      if (r->kind == ExprKind::Scalar && r->value.imag() == 0.0 && r->value.real() < 0.0)
        return lhs + " - " + fmt_double(-r->value.real());
      if (r->kind == ExprKind::Scalar && r->value.real() == 0.0 && r->value.imag() < 0.0)
        return lhs + " - " + fmt_double(-r->value.imag()) + "i";
      return lhs + " + " + print_child(r, r->kind == ExprKind::Add, names);
    }
    case ExprKind::Mul: {
      std::string lhs =
          print_child(e->a, e->a->kind == ExprKind::Add || e->a->kind == ExprKind::Neg, names);
      const ExprKind rk = e->b->kind;
      std::string rhs = print_child(
          e->b, rk == ExprKind::Add || rk == ExprKind::Neg || rk == ExprKind::Mul, names);
      return lhs + "*" + rhs;
    }
    case ExprKind::Inv: return "inv(" + print_node(e->a, names) + ")";
    case ExprKind::Adjoint: return "adj(" + print_node(e->a, names) + ")";
  }
  return {};
}

}  // namespace

std::string print(const ExprPtr& e, const std::vector<std::string>& names) {
  return print_node(e, names);
}

// ---- parsing ------------------------------------------------------------------

namespace {

enum class Tok { Num, Ident, Plus, Minus, Star, LParen, RParen, Caret, End };

struct Token {
  Tok kind;
  Complex value{};
  std::string ident;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }

  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    cur_.pos = pos_;
    if (pos_ >= text_.size()) {
      cur_.kind = Tok::End;
      return;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+': cur_.kind = Tok::Plus; ++pos_; return;
      case '-': cur_.kind = Tok::Minus; ++pos_; return;
      case '*': cur_.kind = Tok::Star; ++pos_; return;
      case '(': cur_.kind = Tok::LParen; ++pos_; return;
      case ')': cur_.kind = Tok::RParen; ++pos_; return;
      case '^': cur_.kind = Tok::Caret; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
      if (res.ec != std::errc{}) throw ParseError("malformed number", pos_);
      pos_ = static_cast<std::size_t>(res.ptr - text_.data());
      // `bi` form: a number immediately followed by a bare `i`.
      if (pos_ < text_.size() && text_[pos_] == 'i' &&
          (pos_ + 1 >= text_.size() ||
           !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
        ++pos_;
        cur_.kind = Tok::Num;
        cur_.value = Complex(0.0, v);
        return;
      }
      cur_.kind = Tok::Num;
      cur_.value = Complex(v, 0.0);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      cur_.kind = Tok::Ident;
      cur_.ident = text_.substr(start, pos_ - start);
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token cur_;
};

struct Parser {
  Lexer lex;
  int g;
  const std::vector<std::string>& aliases;

  ExprPtr expr() {
    ExprPtr acc = term();
    while (lex.peek().kind == Tok::Plus || lex.peek().kind == Tok::Minus) {
      const bool plus = lex.next().kind == Tok::Plus;
      ExprPtr rhs = term();
      acc = plus ? make_add(acc, rhs) : make_sub(acc, rhs);
    }
    return acc;
  }

  ExprPtr term() {
    ExprPtr acc = factor();
    while (lex.peek().kind == Tok::Star) {
      lex.next();
      acc = make_mul(acc, factor());
    }
    return acc;
  }

  ExprPtr factor() {
    if (lex.peek().kind == Tok::Minus) {
      lex.next();
      return make_neg(factor());
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (lex.peek().kind == Tok::Caret) {
      std::size_t pos = lex.next().pos;
      if (lex.peek().kind != Tok::Minus) throw ParseError("expected -1 after ^", pos);
      lex.next();
      Token num = lex.next();
      if (num.kind != Tok::Num || num.value != Complex(1.0))
        throw ParseError("expected -1 after ^", pos);
      e = make_inv(e);
    }
    return e;
  }

  ExprPtr primary() {
    Token t = lex.next();
    switch (t.kind) {
      case Tok::Num: return make_scalar(t.value);
      case Tok::LParen: {
        ExprPtr e = expr();
        expect(Tok::RParen, ")");
        return e;
      }
      case Tok::Ident: {
        if (t.ident == "inv" || t.ident == "adj") {
          expect(Tok::LParen, "(");
          ExprPtr e = expr();
          expect(Tok::RParen, ")");
          return t.ident == "inv" ? make_inv(e) : make_adj(e);
        }
        return variable(t);
      }
      default: throw ParseError("unexpected token", t.pos);
    }
  }

  ExprPtr variable(const Token& t) {
    for (std::size_t i = 0; i < aliases.size(); ++i)
      if (!aliases[i].empty() && aliases[i] == t.ident) return make_var(static_cast<int>(i) + 1);
    if (t.ident.size() >= 2 && t.ident[0] == 'x') {
      int idx = 0;
      auto res = std::from_chars(t.ident.data() + 1, t.ident.data() + t.ident.size(), idx);
      if (res.ec == std::errc{} && res.ptr == t.ident.data() + t.ident.size()) {
        if (idx < 1 || idx > g)
          throw UnknownVariable("variable " + t.ident + " out of range 1.." + std::to_string(g));
        return make_var(idx);
      }
    }
    throw UnknownVariable("unknown variable '" + t.ident + "'");
  }

  void expect(Tok k, const char* what) {
    Token t = lex.next();
    if (t.kind != k) throw ParseError(std::string("expected ") + what, t.pos);
  }
};

}  // namespace

ExprPtr parse(const std::string& text, int g, const std::vector<std::string>& aliases) {
  Parser p{Lexer(text), g, aliases};
  ExprPtr e = p.expr();
  if (p.lex.peek().kind != Tok::End) throw ParseError("trailing input", p.lex.peek().pos);
  return e;
}

// ---- evaluation -----------------------------------------------------------------

namespace {

struct EvalCtx {
  std::span<const CMatrix> point;
  EvalOptions opts;
  std::unordered_map<const Expr*, CMatrix> memo;
};

const CMatrix& eval_node(const ExprPtr& e, EvalCtx& ctx) {
  auto it = ctx.memo.find(e.get());
  if (it != ctx.memo.end()) return it->second;
  const Eigen::Index k = ctx.point[0].rows();
  CMatrix out;
  switch (e->kind) {
    case ExprKind::Scalar: out = e->value * CMatrix::Identity(k, k); break;
    case ExprKind::Var: {
      if (e->var > static_cast<int>(ctx.point.size()))
        throw DimensionMismatch("eval: point has fewer matrices than variables used");
      out = ctx.point[static_cast<std::size_t>(e->var - 1)];
      break;
    }
    case ExprKind::Neg: out = -eval_node(e->a, ctx); break;
    case ExprKind::Add: out = eval_node(e->a, ctx) + eval_node(e->b, ctx); break;
    case ExprKind::Mul: out = eval_node(e->a, ctx) * eval_node(e->b, ctx); break;
    case ExprKind::Adjoint: out = eval_node(e->a, ctx).adjoint(); break;
    case ExprKind::Inv: {
      const CMatrix& m = eval_node(e->a, ctx);
      Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double smax = sv.size() ? sv(0) : 0.0;
      const double cond = smax > 0.0 ? sv(sv.size() - 1) / smax : 0.0;
      if (cond < ctx.opts.inv_cond_floor) throw DomainError(print(e->a), cond);
      out = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
      break;
    }
  }
  return ctx.memo.emplace(e.get(), std::move(out)).first->second;
}

}  // namespace

CMatrix eval(const ExprPtr& e, std::span<const CMatrix> point, const EvalOptions& opts) {
  if (point.empty()) throw DimensionMismatch("eval: empty point");
  EvalCtx ctx{point, opts, {}};
  return eval_node(e, ctx);
}

std::vector<CMatrix> random_domain_point(const ExprPtr& e, int g, int k, bool hermitian,
                                         int max_trials, Rng& rng) {
  std::string last = print(e);
  for (int t = 0; t < max_trials; ++t) {
    auto point = random_tuple(g, k, hermitian ? RandomKind::gue : RandomKind::ginibre, rng);
    try {
      eval(e, point);
      return point;
    } catch (const DomainError& err) {
      last = err.subexpression;
    }
  }
  throw EmptyDomainSuspected(last);
}

bool is_zero_fn(const ExprPtr& e, int g, int k, int trials, double tol, Rng& rng) {
  for (int t = 0; t < trials; ++t) {
    auto point = random_domain_point(e, g, k, /*hermitian=*/true, 32, rng);
    if (eval(e, point).norm() > tol * k) return false;
  }
  return true;
}

bool is_structurally_hermitian(const ExprMatrix& m) {
  if (m.rows != m.cols) return false;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j <= i; ++j)
      if (!expr_equal(m.at(i, j), make_adj(m.at(j, i)))) return false;
  return true;
}

CMatrix eval(const ExprMatrix& m, std::span<const CMatrix> point, const EvalOptions& opts) {
  if (point.empty()) throw DimensionMismatch("eval: empty point");
  const Eigen::Index k = point[0].rows();
  CMatrix out(m.rows * k, m.cols * k);
  EvalCtx ctx{point, opts, {}};
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      out.block(i * k, j * k, k, k) = eval_node(m.at(i, j), ctx);
  return out;
}

}  // namespace fps
