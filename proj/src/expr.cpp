#include "ocsym/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

namespace ocsym {

// ---------------------------------------------------------------------------
// Rationals

Rat rat(long num, long den) {
  if (den == 0) throw Error("division by zero");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Rat rat_from_string(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw Error("invalid rational literal '" + text + "'");
  if (q.get_den() == 0) throw Error("division by zero");
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& q) { return q.get_str(); }

bool rat_is_integer(const Rat& q) { return q.get_den() == 1; }

std::int64_t rat_to_int(const Rat& q) {
  if (!rat_is_integer(q)) throw Error("expected an integer, got " + rat_str(q));
  if (!q.get_num().fits_slong_p()) throw Error("integer out of range: " + rat_str(q));
  return q.get_num().get_si();
}

double rat_to_double(const Rat& q) { return q.get_d(); }

namespace {

int rat_cmp(const Rat& a, const Rat& b) {
  int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

// ---------------------------------------------------------------------------
// Errors

ParseError::ParseError(const std::string& message, std::size_t position)
    : Error(message + " (at position " + std::to_string(position) + ")"),
      position_(position) {}

// ---------------------------------------------------------------------------
// Symbols

std::string symbol_name(const Symbol& s) {
  switch (s.kind) {
    case SymKind::Time: return "t";
    case SymKind::State: return "x" + std::to_string(s.index);
    case SymKind::Control: return "u" + std::to_string(s.index);
    case SymKind::CostateZero: return "psi0";
    case SymKind::Costate: return "psi" + std::to_string(s.index);
    case SymKind::Param: return s.index == 1 ? "s" : "s" + std::to_string(s.index);
    case SymKind::ControlDot: return "udot" + std::to_string(s.index);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Monomials

std::int64_t Monomial::degree() const {
  std::int64_t d = 0;
  for (const auto& [sym, e] : symbols) d += e;
  return d;
}

int compare(const Monomial& a, const Monomial& b) {
  // Graded order: total degree first, then an aligned lexicographic compare
  // of exponent vectors (multiplicative, which exact division relies on),
  // then the exponential factor, with "no exponential" sorting greater.
  const std::int64_t da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  auto ia = a.symbols.begin(), ib = b.symbols.begin();
  while (ia != a.symbols.end() && ib != b.symbols.end()) {
    if (ia->first == ib->first) {
      if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
      ++ia;
      ++ib;
    } else if (ia->first < ib->first) {
      return 1;  // a has a nonzero exponent at an earlier position
    } else {
      return -1;
    }
  }
  if (ia != a.symbols.end()) return 1;
  if (ib != b.symbols.end()) return -1;
  if (!a.exp_arg && !b.exp_arg) return 0;
  if (!a.exp_arg) return 1;
  if (!b.exp_arg) return -1;
  return compare(*a.exp_arg, *b.exp_arg);
}

bool operator==(const Monomial& a, const Monomial& b) { return compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// Polynomial helpers

namespace {

const Rat kOne = 1;

Poly poly_one() {
  Poly p;
  p.emplace(Monomial{}, kOne);
  return p;
}

bool poly_is_const(const Poly& p) {
  return p.empty() || (p.size() == 1 && p.begin()->first.is_unit());
}

bool poly_has_exp(const Poly& p) {
  for (const auto& [m, c] : p)
    if (m.exp_arg) return true;
  return false;
}

void poly_add_term(Poly& p, const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b) poly_add_term(r, m, c);
  return r;
}

Poly poly_neg(const Poly& a) {
  Poly r = a;
  for (auto& [m, c] : r) c = -c;
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

Poly poly_scale(const Poly& a, const Rat& q) {
  if (q == 0) return {};
  Poly r = a;
  for (auto& [m, c] : r) c *= q;
  return r;
}

ExprPtr expr_ptr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r = a;
  for (const auto& [sym, e] : b.symbols) {
    auto [it, inserted] = r.symbols.emplace(sym, e);
    if (!inserted) it->second += e;
  }
  if (!r.exp_arg) {
    r.exp_arg = b.exp_arg;
  } else if (b.exp_arg) {
    Expr sum = *r.exp_arg + *b.exp_arg;
    r.exp_arg = sum.is_zero() ? nullptr : expr_ptr(std::move(sum));
  }
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) poly_add_term(r, mono_mul(ma, mb), ca * cb);
  return r;
}

Poly poly_pow(const Poly& a, std::int64_t k) {
  Poly result = poly_one();
  Poly base = a;
  while (k > 0) {
    if (k & 1) result = poly_mul(result, base);
    base = poly_mul(base, base);
    k >>= 1;
  }
  return result;
}

// Divides monomial a by monomial b; fails only on the symbol part
// (exponential factors are units: arguments subtract).
std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
  Monomial r = a;
  for (const auto& [sym, e] : b.symbols) {
    auto it = r.symbols.find(sym);
    if (it == r.symbols.end() || it->second < e) return std::nullopt;
    it->second -= e;
    if (it->second == 0) r.symbols.erase(it);
  }
  if (b.exp_arg) {
    Expr diff_arg = (r.exp_arg ? *r.exp_arg : Expr()) - *b.exp_arg;
    r.exp_arg = diff_arg.is_zero() ? nullptr : expr_ptr(std::move(diff_arg));
  }
  return r;
}

// Exact multivariate division; nullopt if b does not divide a.
std::optional<Poly> poly_exact_div(const Poly& a, const Poly& b) {
  assert(!b.empty());
  Poly rem = a;
  Poly quot;
  const auto& [lb, cb] = *b.rbegin();
  while (!rem.empty()) {
    const auto& [lr, cr] = *rem.rbegin();
    auto qm = mono_div(lr, lb);
    if (!qm) return std::nullopt;
    Rat qc = cr / cb;
    poly_add_term(quot, *qm, qc);
    Poly t;
    t.emplace(*qm, qc);
    rem = poly_sub(rem, poly_mul(t, b));
  }
  return quot;
}

// Scales so the leading (greatest) monomial has coefficient 1.
Poly monic_lead(Poly p) {
  if (p.empty()) return p;
  Rat c = p.rbegin()->second;
  if (c == 1) return p;
  for (auto& [m, coef] : p) coef /= c;
  return p;
}

// --- multivariate GCD over exponential-free polynomials (content + PRS) ---

using UniPoly = std::map<std::int64_t, Poly>;  // degree in the main symbol -> coeff

Symbol max_symbol(const Poly& a, const Poly& b) {
  Symbol best{};
  bool found = false;
  for (const Poly* p : {&a, &b})
    for (const auto& [m, c] : *p)
      for (const auto& [sym, e] : m.symbols)
        if (!found || best < sym) {
          best = sym;
          found = true;
        }
  assert(found);
  return best;
}

UniPoly to_uni(const Poly& p, const Symbol& v) {
  UniPoly u;
  for (const auto& [m, c] : p) {
    Monomial rest = m;
    std::int64_t e = 0;
    auto it = rest.symbols.find(v);
    if (it != rest.symbols.end()) {
      e = it->second;
      rest.symbols.erase(it);
    }
    poly_add_term(u[e], rest, c);
  }
  for (auto it = u.begin(); it != u.end();)
    it = it->second.empty() ? u.erase(it) : std::next(it);
  return u;
}

Poly from_uni(const UniPoly& u, const Symbol& v) {
  Poly p;
  for (const auto& [e, coeff] : u) {
    Monomial pow_m;
    if (e > 0) pow_m.symbols.emplace(v, e);
    for (const auto& [m, c] : coeff) poly_add_term(p, mono_mul(m, pow_m), c);
  }
  return p;
}

Poly poly_gcd(const Poly& a, const Poly& b);

Poly uni_content(const UniPoly& u) {
  Poly g;
  for (const auto& [e, coeff] : u) {
    g = g.empty() ? monic_lead(coeff) : poly_gcd(g, coeff);
    if (poly_is_const(g)) return poly_one();
  }
  return g;
}

UniPoly uni_exact_div(const UniPoly& u, const Poly& g) {
  UniPoly r;
  for (const auto& [e, coeff] : u) {
    auto q = poly_exact_div(coeff, g);
    assert(q);
    r.emplace(e, std::move(*q));
  }
  return r;
}

UniPoly uni_primitive(const UniPoly& u) {
  if (u.empty()) return u;
  return uni_exact_div(u, uni_content(u));
}

UniPoly uni_sub(const UniPoly& a, const UniPoly& b) {
  UniPoly r = a;
  for (const auto& [e, coeff] : b) {
    auto it = r.find(e);
    if (it == r.end()) {
      r.emplace(e, poly_neg(coeff));
    } else {
      it->second = poly_sub(it->second, coeff);
      if (it->second.empty()) r.erase(it);
    }
  }
  return r;
}

UniPoly uni_scale(const UniPoly& u, const Poly& p, std::int64_t shift) {
  UniPoly r;
  for (const auto& [e, coeff] : u) {
    Poly prod = poly_mul(coeff, p);
    if (!prod.empty()) r.emplace(e + shift, std::move(prod));
  }
  return r;
}

UniPoly uni_pseudo_rem(UniPoly f, const UniPoly& g) {
  assert(!g.empty());
  const std::int64_t dg = g.rbegin()->first;
  const Poly& lc_g = g.rbegin()->second;
  while (!f.empty() && f.rbegin()->first >= dg) {
    const std::int64_t df = f.rbegin()->first;
    Poly lc_f = f.rbegin()->second;
    f = uni_sub(uni_scale(f, lc_g, 0), uni_scale(g, lc_f, df - dg));
  }
  return f;
}

// GCD up to a rational unit; result has leading coefficient 1.
Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.empty()) return monic_lead(b);
  if (b.empty()) return monic_lead(a);
  if (poly_is_const(a) || poly_is_const(b)) return poly_one();
  assert(!poly_has_exp(a) && !poly_has_exp(b));
  const Symbol v = max_symbol(a, b);
  UniPoly ua = to_uni(a, v), ub = to_uni(b, v);
  Poly cont_a = uni_content(ua), cont_b = uni_content(ub);
  Poly c = poly_gcd(cont_a, cont_b);
  UniPoly f = uni_exact_div(ua, cont_a);
  UniPoly g = uni_exact_div(ub, cont_b);
  if (f.rbegin()->first < g.rbegin()->first) std::swap(f, g);
  while (!g.empty()) {
    UniPoly r = uni_pseudo_rem(f, g);
    f = std::move(g);
    g = uni_primitive(r);
  }
  return monic_lead(poly_mul(c, from_uni(f, v)));
}

// Common per-symbol monomial content of a set of polynomials.
std::map<Symbol, std::int64_t> common_symbol_content(const Poly& a, const Poly& b) {
  std::map<Symbol, std::int64_t> content;
  bool first = true;
  for (const Poly* p : {&a, &b})
    for (const auto& [m, c] : *p) {
      if (first) {
        content = m.symbols;
        first = false;
        continue;
      }
      for (auto it = content.begin(); it != content.end();) {
        auto jt = m.symbols.find(it->first);
        if (jt == m.symbols.end()) {
          it = content.erase(it);
        } else {
          it->second = std::min(it->second, jt->second);
          ++it;
        }
      }
      if (content.empty()) return content;
    }
  return content;
}

Poly strip_monomial(const Poly& p, const std::map<Symbol, std::int64_t>& content) {
  Poly r;
  for (const auto& [m, c] : p) {
    Monomial stripped = m;
    for (const auto& [sym, e] : content) {
      auto it = stripped.symbols.find(sym);
      assert(it != stripped.symbols.end() && it->second >= e);
      it->second -= e;
      if (it->second == 0) stripped.symbols.erase(it);
    }
    r.emplace(std::move(stripped), c);
  }
  return r;
}

// Multiplies every monomial's exponential argument by exp(-shift).
Poly shift_exp(const Poly& p, const Expr& shift) {
  Poly r;
  for (const auto& [m, c] : p) {
    Monomial moved = m;
    Expr arg = (m.exp_arg ? *m.exp_arg : Expr()) - shift;
    moved.exp_arg = arg.is_zero() ? nullptr : expr_ptr(std::move(arg));
    poly_add_term(r, moved, c);
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() : den_(poly_one()) {}

Expr::Expr(Poly num, Poly den, coprime_tag) : num_(std::move(num)), den_(std::move(den)) {}

Expr Expr::rational(const Rat& q) {
  Poly n;
  if (q != 0) n.emplace(Monomial{}, q);
  return Expr(std::move(n), poly_one(), coprime_tag{});
}

Expr Expr::symbol(const Symbol& s) {
  Monomial m;
  m.symbols.emplace(s, 1);
  Poly n;
  n.emplace(std::move(m), kOne);
  return Expr(std::move(n), poly_one(), coprime_tag{});
}

Expr Expr::from_poly(Poly p) { return Expr(std::move(p), poly_one(), coprime_tag{}); }

Expr Expr::fraction(Poly num, Poly den) {
  if (den.empty()) throw Error("division by zero");
  if (num.empty()) return Expr();

  auto content = common_symbol_content(num, den);
  if (!content.empty()) {
    num = strip_monomial(num, content);
    den = strip_monomial(den, content);
  }

  if (den.rbegin()->first.exp_arg) {
    const Expr shift = *den.rbegin()->first.exp_arg;
    num = shift_exp(num, shift);
    den = shift_exp(den, shift);
  }

  if (!poly_is_const(den) && !poly_has_exp(num) && !poly_has_exp(den)) {
    Poly g = poly_gcd(num, den);
    if (!poly_is_const(g)) {
      num = *poly_exact_div(num, g);
      den = *poly_exact_div(den, g);
    }
  }

  const Rat lead = den.rbegin()->second;
  if (lead != 1) {
    num = poly_scale(num, 1 / lead);
    den = poly_scale(den, 1 / lead);
  }
  return Expr(std::move(num), std::move(den), coprime_tag{});
}

bool Expr::is_rational() const {
  return poly_is_const(num_) && den_.size() == 1 && den_.begin()->first.is_unit();
}

Rat Expr::as_rational() const {
  if (!is_rational()) throw Error("expression is not a rational constant");
  return num_.empty() ? Rat(0) : num_.begin()->second;
}

bool Expr::is_polynomial() const {
  if (den_.size() != 1 || !den_.begin()->first.is_unit()) return false;
  return !poly_has_exp(num_);
}

bool Expr::contains(const Symbol& s) const {
  for (const Poly* p : {&num_, &den_})
    for (const auto& [m, c] : *p) {
      if (m.symbols.count(s)) return true;
      if (m.exp_arg && m.exp_arg->contains(s)) return true;
    }
  return false;
}

std::set<Symbol> Expr::symbols() const {
  std::set<Symbol> out;
  for (const Poly* p : {&num_, &den_})
    for (const auto& [m, c] : *p) {
      for (const auto& [sym, e] : m.symbols) out.insert(sym);
      if (m.exp_arg) {
        auto inner = m.exp_arg->symbols();
        out.insert(inner.begin(), inner.end());
      }
    }
  return out;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_)
    return Expr::fraction(poly_add(a.num_, b.num_), a.den_);
  return Expr::fraction(
      poly_add(poly_mul(a.num_, b.den_), poly_mul(b.num_, a.den_)),
      poly_mul(a.den_, b.den_));
}

Expr operator-(const Expr& a) {
  Expr r = a;
  r.num_ = poly_neg(r.num_);
  return r;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  return Expr::fraction(poly_mul(a.num_, b.num_), poly_mul(a.den_, b.den_));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw Error("division by zero");
  if (a.is_zero()) return Expr();
  return Expr::fraction(poly_mul(a.num_, b.den_), poly_mul(a.den_, b.num_));
}

namespace {

int poly_compare(const Poly& a, const Poly& b) {
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    int c = compare(ia->first, ib->first);
    if (c != 0) return c;
    c = rat_cmp(ia->second, ib->second);
    if (c != 0) return c;
    ++ia;
    ++ib;
  }
  if (ia != a.end()) return 1;
  if (ib != b.end()) return -1;
  return 0;
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
  int c = poly_compare(a.num(), b.num());
  if (c != 0) return c;
  return poly_compare(a.den(), b.den());
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

bool equivalent(const Expr& a, const Expr& b) {
  return poly_sub(poly_mul(a.num(), b.den()), poly_mul(b.num(), a.den())).empty();
}

Expr pow(const Expr& base, std::int64_t exponent) {
  if (exponent == 0) return Expr::integer(1);
  if (exponent < 0) return Expr::integer(1) / pow(base, -exponent);
  if (base.is_zero()) return Expr();
  if (!poly_has_exp(base.num()) && !poly_has_exp(base.den())) {
    // num and den stay coprime and the denominator stays monic under powers.
    return Expr::fraction(poly_pow(base.num(), exponent), poly_pow(base.den(), exponent));
  }
  Expr r = Expr::integer(1);
  for (std::int64_t i = 0; i < exponent; ++i) r = r * base;
  return r;
}

Expr exp(const Expr& arg) {
  if (arg.is_zero()) return Expr::integer(1);
  Monomial m;
  m.exp_arg = expr_ptr(arg);
  Poly n;
  n.emplace(std::move(m), kOne);
  return Expr::from_poly(std::move(n));
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr diff_poly(const Poly& p, const Symbol& v) {
  Expr acc;
  for (const auto& [m, c] : p) {
    auto it = m.symbols.find(v);
    if (it != m.symbols.end()) {
      Monomial dm = m;
      const std::int64_t e = it->second;
      if (e == 1)
        dm.symbols.erase(v);
      else
        dm.symbols[v] = e - 1;
      Poly term;
      term.emplace(std::move(dm), c * Rat(static_cast<long>(e)));
      acc += Expr::from_poly(std::move(term));
    }
    if (m.exp_arg && m.exp_arg->contains(v)) {
      Poly term;
      term.emplace(m, c);
      acc += Expr::from_poly(std::move(term)) * diff(*m.exp_arg, v);
    }
  }
  return acc;
}

}  // namespace

Expr diff(const Expr& e, const Symbol& v) {
  if (v.kind == SymKind::ControlDot)
    throw Error("cannot differentiate with respect to a formal control derivative");
  if (!e.contains(v)) return Expr();
  Expr dn = diff_poly(e.num(), v);
  if (e.den().size() == 1 && e.den().begin()->first.is_unit()) return dn;
  Expr n = Expr::from_poly(e.num());
  Expr d = Expr::from_poly(e.den());
  return (dn * d - n * diff_poly(e.den(), v)) / (d * d);
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

Expr subst_poly(const Poly& p, const std::map<Symbol, Expr>& bindings) {
  Expr acc;
  for (const auto& [m, c] : p) {
    Expr term = Expr::rational(c);
    for (const auto& [sym, e] : m.symbols) {
      auto it = bindings.find(sym);
      const Expr base = it != bindings.end() ? it->second : Expr::symbol(sym);
      term = term * pow(base, e);
    }
    if (m.exp_arg) term = term * exp(substitute(*m.exp_arg, bindings));
    acc += term;
  }
  return acc;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<Symbol, Expr>& bindings) {
  bool touches = false;
  for (const auto& [sym, rep] : bindings)
    if (e.contains(sym)) {
      touches = true;
      break;
    }
  if (!touches) return e;
  return subst_poly(e.num(), bindings) / subst_poly(e.den(), bindings);
}

// ---------------------------------------------------------------------------
// Numeric evaluation

namespace {

double ipow(double base, std::int64_t e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

double eval_poly(const Poly& p, const std::map<Symbol, double>& env) {
  double sum = 0.0;
  for (const auto& [m, c] : p) {
    double term = 1.0;
    for (const auto& [sym, e] : m.symbols) {
      auto it = env.find(sym);
      if (it == env.end()) throw EvalError("unbound symbol " + symbol_name(sym));
      term *= ipow(it->second, e);
    }
    if (m.exp_arg) term *= std::exp(eval(*m.exp_arg, env));
    sum += rat_to_double(c) * term;
  }
  return sum;
}

}  // namespace

double eval(const Expr& e, const std::map<Symbol, double>& env) {
  const double n = eval_poly(e.num(), env);
  const double d = eval_poly(e.den(), env);
  if (d == 0.0) throw EvalError("division by zero");
  return n / d;
}

}  // namespace ocsym
