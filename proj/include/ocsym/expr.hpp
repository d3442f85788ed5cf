#pragma once

// Symbolic expression core: exact rational arithmetic over a small
// expression language (rationals, + - * /, integer powers, exp).
// Every Expr is kept in canonical form at all times: a reduced fraction
// of fully expanded polynomials over symbols and exponential atoms.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocsym {

// ---------------------------------------------------------------------------
// Rationals (GMP-backed, always canonical: lowest terms, positive denominator)

using Rat = mpq_class;

Rat rat(long num, long den = 1);
Rat rat_from_string(const std::string& text);
std::string rat_str(const Rat& q);
bool rat_is_integer(const Rat& q);
// Requires rat_is_integer and the value to fit in int64.
std::int64_t rat_to_int(const Rat& q);
double rat_to_double(const Rat& q);

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Symbols

enum class SymKind : std::uint8_t {
  Time,        // t
  State,       // x1..xn
  Control,     // u1..um
  CostateZero, // psi0 (abnormal multiplier)
  Costate,     // psi1..psin
  Param,       // s1..sr (family parameters; "s" is an alias for s1)
  ControlDot,  // formal control derivative, internal to invariance residuals
};

struct Symbol {
  SymKind kind{SymKind::Time};
  int index{0};  // 1-based where applicable, 0 for t and psi0

  static Symbol time() { return {SymKind::Time, 0}; }
  static Symbol state(int i) { return {SymKind::State, i}; }
  static Symbol control(int j) { return {SymKind::Control, j}; }
  static Symbol costate0() { return {SymKind::CostateZero, 0}; }
  static Symbol costate(int i) { return {SymKind::Costate, i}; }
  static Symbol param(int k) { return {SymKind::Param, k}; }
  static Symbol control_dot(int j) { return {SymKind::ControlDot, j}; }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

// Canonical surface name ("t", "x2", "psi0", "s", "udot1", ...).
std::string symbol_name(const Symbol& s);

// ---------------------------------------------------------------------------
// Monomials and polynomials

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Product of symbol powers (exponents >= 1) with at most one exponential
// factor exp(exp_arg). Products of exponentials fold by adding arguments,
// so an exponential factor never carries an exponent of its own.
struct Monomial {
  std::map<Symbol, std::int64_t> symbols;
  ExprPtr exp_arg;  // null when absent

  std::int64_t degree() const;
  bool is_unit() const { return symbols.empty() && exp_arg == nullptr; }
};

int compare(const Monomial& a, const Monomial& b);
bool operator==(const Monomial& a, const Monomial& b);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return compare(a, b) < 0;
  }
};

// Expanded polynomial: monomial -> nonzero rational coefficient.
using Poly = std::map<Monomial, Rat, MonomialLess>;

// ---------------------------------------------------------------------------
// Expressions

// Immutable canonical fraction num/den. Invariants: den is nonzero; if num
// is zero then den is 1; num and den share no common factor (exact
// multivariate GCD when both are exponential-free); den's leading monomial
// is exponential-free with coefficient 1.
class Expr {
 public:
  Expr();  // zero

  static Expr rational(const Rat& q);
  static Expr integer(long v) { return rational(rat(v)); }
  static Expr symbol(const Symbol& s);
  static Expr from_poly(Poly p);
  // Canonicalizes an arbitrary fraction (reduces, normalizes the denominator).
  static Expr fraction(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.empty(); }
  bool is_rational() const;          // a constant (den == 1, num constant)
  Rat as_rational() const;           // requires is_rational
  bool is_polynomial() const;        // den == 1 and no exponential factors
  bool contains(const Symbol& s) const;
  std::set<Symbol> symbols() const;  // all symbols, including inside exp args

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

 private:
  struct coprime_tag {};
  Expr(Poly num, Poly den, coprime_tag);

  Poly num_;
  Poly den_;
};

// Total structural order on canonical expressions (used for exp-atom
// ordering and deterministic output); compare(a,b)==0 iff structurally equal.
int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

Expr pow(const Expr& base, std::int64_t exponent);
Expr exp(const Expr& arg);

// Mathematical equality as functions (cross-multiplied zero test); agrees
// with operator== except for quotients the GCD cannot reduce (exponential
// denominators).
bool equivalent(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Operations

// Parses the infix grammar: precedence ^ > unary- > */ > +-, integer
// exponents only, exp(...), symbols t, xN, uN, psi0, psiN, sN (alias s),
// integer literals (rationals are written p/q).
Expr parse(const std::string& text);

// Canonical rendering; parse(to_string(e)) is structurally identical to e
// whenever e contains no formal control derivatives.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

// Exact partial derivative. v must not be a formal control derivative.
Expr diff(const Expr& e, const Symbol& v);

// Simultaneous one-pass substitution: every symbol is replaced at most once
// and replacements are inserted verbatim, so self-referential bindings such
// as {x -> x + s*t} are well-defined.
Expr substitute(const Expr& e, const std::map<Symbol, Expr>& bindings);

// Identity on canonical values; exposed so callers can state intent.
inline Expr normalize(const Expr& e) { return e; }

// Floating evaluation; rational coefficients are converted at the last step.
double eval(const Expr& e, const std::map<Symbol, double>& env);

}  // namespace ocsym
