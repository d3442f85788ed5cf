#include "ocsym/expr.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace ocsym {

// ---------------------------------------------------------------------------
// Printing

namespace {

// Renders |coeff| * monomial as a product string; sign is handled by callers.
std::string term_to_string(const Monomial& m, const Rat& abs_coeff) {
  std::vector<std::string> factors;
  for (const auto& [sym, e] : m.symbols) {
    std::string f = symbol_name(sym);
    if (e != 1) f += "^" + std::to_string(e);
    factors.push_back(std::move(f));
  }
  if (m.exp_arg) factors.push_back("exp(" + to_string(*m.exp_arg) + ")");

  const mpz_class& p = abs_coeff.get_num();
  const mpz_class& q = abs_coeff.get_den();
  if (factors.empty()) return rat_str(abs_coeff);

  std::string out;
  if (p != 1) out = p.get_str() + "*";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i > 0) out += "*";
    out += factors[i];
  }
  if (q != 1) out += "/" + q.get_str();
  return out;
}

std::string poly_to_string(const Poly& p) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    const bool negative = it->second < 0;
    const Rat mag = negative ? Rat(-it->second) : it->second;
    if (first) {
      if (negative) out += "-";
      first = false;
    } else {
      out += negative ? " - " : " + ";
    }
    out += term_to_string(it->first, mag);
  }
  return out;
}

bool needs_parens_as_denominator(const Poly& den, const std::string& rendered) {
  if (den.size() > 1) return true;
  return rendered.find('*') != std::string::npos ||
         rendered.find('/') != std::string::npos ||
         rendered.find(' ') != std::string::npos;
}

}  // namespace

std::string to_string(const Expr& e) {
  const bool unit_den = e.den().size() == 1 && e.den().begin()->first.is_unit();
  std::string num = poly_to_string(e.num());
  if (unit_den) return num;
  if (e.num().size() > 1) num = "(" + num + ")";
  std::string den = poly_to_string(e.den());
  if (needs_parens_as_denominator(e.den(), den)) den = "(" + den + ")";
  return num + "/" + den;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr e = parse_product();
    while (true) {
      if (consume('+'))
        e = e + parse_product();
      else if (consume('-'))
        e = e - parse_product();
      else
        return e;
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    while (true) {
      if (consume('*')) {
        e = e * parse_unary();
      } else if (consume('/')) {
        const std::size_t at = pos_;
        Expr rhs = parse_unary();
        if (rhs.is_zero()) throw ParseError("division by zero", at);
        e = e / rhs;
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (consume('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (!consume('^')) return base;
    const std::size_t at = pos_;
    Expr e = parse_unary();  // right-associative; validated below
    if (!e.is_rational()) throw ParseError("non-integer exponent", at + 1);
    Rat q = e.as_rational();
    if (!rat_is_integer(q)) throw ParseError("non-integer exponent", at + 1);
    return pow(base, rat_to_int(q));
  }

  Expr parse_primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::islower(static_cast<unsigned char>(c))) return parse_identifier();
    fail("expected expression");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.')
      throw ParseError("decimal literals are not supported; use p/q", pos_ + 1);
    return Expr::rational(rat_from_string(src_.substr(start, pos_ - start)));
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::islower(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string letters = src_.substr(start, pos_ - start);
    const std::size_t digit_start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string digits = src_.substr(digit_start, pos_ - digit_start);

    if (letters == "exp" && digits.empty()) {
      if (!consume('(')) fail("expected '(' after exp");
      Expr arg = parse_sum();
      if (!consume(')')) fail("expected ')'");
      return exp(arg);
    }

    auto unknown = [&]() -> Expr {
      throw ParseError("unknown symbol '" + letters + digits + "'", start + 1);
    };
    auto indexed = [&](SymKind kind) -> Expr {
      if (digits.empty() || digits.size() > 6 || (digits.size() > 1 && digits[0] == '0'))
        return unknown();
      const int idx = std::stoi(digits);
      if (idx < 1) return unknown();
      return Expr::symbol(Symbol{kind, idx});
    };

    if (letters == "t" && digits.empty()) return Expr::symbol(Symbol::time());
    if (letters == "x") return indexed(SymKind::State);
    if (letters == "u") return indexed(SymKind::Control);
    if (letters == "s") {
      if (digits.empty()) return Expr::symbol(Symbol::param(1));
      return indexed(SymKind::Param);
    }
    if (letters == "psi") {
      if (digits == "0") return Expr::symbol(Symbol::costate0());
      return indexed(SymKind::Costate);
    }
    return unknown();
  }

  const std::string& src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text) { return Parser(text).run(); }

}  // namespace ocsym
