#include "ocsym/expr.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ocsym;
using namespace ocsym::testing;

namespace {

const Symbol t = Symbol::time();
const Symbol x1 = Symbol::state(1);
const Symbol x2 = Symbol::state(2);
const Symbol u1 = Symbol::control(1);
const Symbol u2 = Symbol::control(2);
const Symbol s = Symbol::param(1);

}  // namespace

TEST_CASE("parse: grammar basics") {
  CHECK(parse("u1^2 + u2^2") ==
        pow(Expr::symbol(u1), 2) + pow(Expr::symbol(u2), 2));
  CHECK(parse("u2*x2^2/2") ==
        Expr::rational(rat(1, 2)) * Expr::symbol(u2) * pow(Expr::symbol(x2), 2));
  CHECK(parse("psi0") == Expr::symbol(Symbol::costate0()));
  CHECK(parse("psi3") == Expr::symbol(Symbol::costate(3)));
  CHECK(parse("s") == parse("s1"));
  CHECK(parse("-3/2") == Expr::rational(rat(-3, 2)));
  CHECK(parse("exp(2*s)*exp(s)") == parse("exp(3*s)"));
  CHECK(parse("2^10") == Expr::integer(1024));
  CHECK(parse("x1^(-1)") == Expr::integer(1) / Expr::symbol(x1));
}

TEST_CASE("parse: precedence") {
  // unary minus binds tighter than * and /: -3/2*x1 = ((-3)/2)*x1
  CHECK(parse("-3/2*x1") == Expr::rational(rat(-3, 2)) * Expr::symbol(x1));
  CHECK(parse("-x1^2") == -pow(Expr::symbol(x1), 2));
  CHECK(parse("1 - 2 - 3") == Expr::integer(-4));
  CHECK(parse("12/3/2") == Expr::integer(2));
  CHECK(parse("2*x1 + 3*x1") == parse("5*x1"));
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse("x1^(1/2)"), ParseError);  // non-integer exponent
  CHECK_THROWS_AS(parse("x1^s"), ParseError);
  CHECK_THROWS_AS(parse("y1 + 2"), ParseError);  // unknown symbol
  CHECK_THROWS_AS(parse("foo"), ParseError);
  CHECK_THROWS_AS(parse("x0"), ParseError);  // indices start at 1
  CHECK_THROWS_AS(parse("psi"), ParseError);
  CHECK_THROWS_AS(parse("(x1 + 2"), ParseError);
  CHECK_THROWS_AS(parse("x1 +"), ParseError);
  CHECK_THROWS_AS(parse("1.5"), ParseError);
  CHECK_THROWS_AS(parse("udot1"), ParseError);  // internal symbols are not input
  CHECK_THROWS_AS(parse("1/0"), ParseError);
  try {
    parse("x1 + @");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
  }
}

TEST_CASE("normalize: canonical expansion") {
  // the o(s) remainder of the shifted quadratic cost collapses to 2*s^2
  CHECK(parse("(u1+s)^2 + (u2+s)^2 - u1^2 - u2^2 - 2*s*(u1+u2)") == parse("2*s^2"));
  CHECK(parse("x1*x2 - x2*x1").is_zero());
  // frozen hand expansion of (x2*s - x1)*(x1^2 + x2^2)*s^2
  CHECK(parse("(x2*s - x1)*(x1^2 + x2^2)*s^2") ==
        parse("x1^2*x2*s^3 + x2^3*s^3 - x1^3*s^2 - x1*x2^2*s^2"));
  CHECK(parse("(x2*s - x1)*(x1^2 + x2^2)*s^2").num().size() == 4);
}

TEST_CASE("normalize: quotient reduction") {
  CHECK(parse("(x1^2 - 1)/(x1 - 1)") == parse("x1 + 1"));
  CHECK(parse("(x1^2 + 2*x1*x2 + x2^2)/(x1 + x2)") == parse("x1 + x2"));
  CHECK(parse("x1/x1") == Expr::integer(1));
  CHECK(parse("(2*x1)/(4*psi0)") == parse("x1/(2*psi0)"));
  // exponentials are units: they never block equality of products
  CHECK(parse("exp(x1)*exp(x2) - exp(x1 + x2)").is_zero());
  CHECK(parse("(exp(s) - 1)*(exp(s) + 1)") == parse("exp(2*s) - 1"));
  CHECK(parse("1/exp(s)") == parse("exp(-s)"));
  CHECK(exp(Expr()) == Expr::integer(1));
}

TEST_CASE("normalize: common factors always cancel") {
  // (A*G)/(B*G) and A/B must canonicalize to the same fraction
  std::mt19937_64 rng(5);
  RandomExprConfig cfg{{x1, x2, s}, 3, 2, false};
  int exercised = 0;
  for (int i = 0; i < 100; ++i) {
    const Expr a = random_polynomial(rng, cfg);
    const Expr b = random_polynomial(rng, cfg);
    const Expr g = random_polynomial(rng, cfg);
    if (b.is_zero() || g.is_zero()) continue;
    ++exercised;
    CAPTURE(to_string(a));
    CAPTURE(to_string(b));
    CAPTURE(to_string(g));
    CHECK((a * g) / (b * g) == a / b);
    CHECK(pow(a / b, 3) == (a * a * a) / (b * b * b));
  }
  CHECK(exercised >= 80);
}

TEST_CASE("fraction arithmetic cross identities") {
  std::mt19937_64 rng(3);
  RandomExprConfig cfg{{t, x1, u1}, 3, 2, false};
  for (int i = 0; i < 100; ++i) {
    const Expr a = random_polynomial(rng, cfg);
    const Expr b = random_polynomial(rng, cfg);
    const Expr c = random_polynomial(rng, cfg);
    const Expr d = random_polynomial(rng, cfg);
    if (b.is_zero() || d.is_zero()) continue;
    CHECK((a / b + c / d) * (b * d) == a * d + c * b);
    CHECK(a / b * (c / d) == (a * c) / (b * d));
  }
}

TEST_CASE("normalize: idempotent and structural") {
  std::mt19937_64 rng(7);
  RandomExprConfig cfg{{t, x1, x2, u1, s}, 5, 3, true};
  for (int i = 0; i < 100; ++i) {
    Expr e = random_polynomial(rng, cfg);
    CHECK(normalize(e) == e);
    CHECK(e + Expr() == e);
    CHECK(e * Expr::integer(1) == e);
    CHECK((e - e).is_zero());
  }
}

TEST_CASE("diff: power and chain rules") {
  CHECK(diff(parse("u2*x2^2/2"), x2) == parse("u2*x2"));
  CHECK(diff(parse("exp(2*s)*t"), s) == parse("2*exp(2*s)*t"));
  // rotation family cost has no linear term in s
  Expr cost = parse("(u1 - u2*s)^2 + (u2 + u1*s)^2");
  CHECK(substitute(diff(cost, s), {{s, Expr()}}).is_zero());
  CHECK(diff(parse("x1/x2"), x2) == parse("-x1/x2^2"));
  CHECK_THROWS_AS(diff(parse("x1"), Symbol::control_dot(1)), Error);
}

TEST_CASE("diff: mixed partials commute") {
  std::mt19937_64 rng(11);
  RandomExprConfig cfg{{t, x1, x2, u1, s}, 5, 4, true};
  for (int i = 0; i < 100; ++i) {
    Expr e = random_polynomial(rng, cfg);
    const Symbol& v = cfg.symbols[i % cfg.symbols.size()];
    const Symbol& w = cfg.symbols[(i + 2) % cfg.symbols.size()];
    CHECK(diff(diff(e, v), w) == diff(diff(e, w), v));
  }
}

TEST_CASE("diff: agrees with central finite differences") {
  std::mt19937_64 rng(13);
  RandomExprConfig cfg{{t, x1, x2, u1}, 4, 3, true};
  std::uniform_real_distribution<double> point(0.2, 1.2);
  for (int i = 0; i < 100; ++i) {
    Expr e = random_polynomial(rng, cfg);
    const Symbol& v = cfg.symbols[i % cfg.symbols.size()];
    std::map<Symbol, double> env;
    for (const Symbol& sym : cfg.symbols) env[sym] = point(rng);
    const double h = 1e-6;
    auto shifted = [&](double delta) {
      auto env2 = env;
      env2[v] += delta;
      return eval(e, env2);
    };
    const double fd = (shifted(h) - shifted(-h)) / (2 * h);
    const double exact = eval(diff(e, v), env);
    const double scale = std::max({1.0, std::abs(fd), std::abs(exact)});
    CHECK(std::abs(fd - exact) / scale <= 1e-6);
  }
}

TEST_CASE("substitute: examples") {
  CHECK(substitute(parse("x1 + s*t"), {{s, Expr()}}) == Expr::symbol(x1));
  CHECK(substitute(parse("u1^2"), {{u1, parse("psi1/(-2*psi0)")}}) ==
        parse("psi1^2/(4*psi0^2)"));
  CHECK(substitute(parse("(u2 + s)*(x2 + s*t)^2/2"), {{s, Expr()}}) ==
        parse("u2*x2^2/2"));
}

TEST_CASE("substitute: simultaneous one-pass semantics") {
  // swap is well-defined: each symbol is replaced exactly once
  Expr e = parse("x1 - x2");
  CHECK(substitute(e, {{x1, Expr::symbol(x2)}, {x2, Expr::symbol(x1)}}) ==
        parse("x2 - x1"));
  // self-referential shift maps are the normal family-composition case
  CHECK(substitute(parse("x1^2"), {{x1, parse("x1 + s*t")}}) ==
        parse("(x1 + s*t)^2"));
  CHECK_THROWS_AS(substitute(parse("1/x1"), {{x1, Expr()}}), Error);
}

TEST_CASE("eval: arithmetic and errors") {
  CHECK(eval(parse("u1^2 + u2^2"), {{u1, 1.0}, {u2, 2.0}}) == doctest::Approx(5.0));
  CHECK(eval(parse("u2*x2^2/2"), {{u2, 2.0}, {x2, 3.0}}) == doctest::Approx(9.0));
  CHECK_THROWS_AS(eval(parse("1/x1"), {{x1, 0.0}}), EvalError);
  CHECK_THROWS_AS(eval(parse("x1 + x2"), {{x1, 1.0}}), EvalError);
  CHECK(eval(parse("exp(2*t)"), {{t, 0.5}}) == doctest::Approx(std::exp(1.0)));
}

// Independent oracle: a random surface-syntax tree evaluated directly while
// it is rendered, compared against eval(parse(text)).
namespace {

struct SurfaceNode {
  std::string text;
  double value;
};

SurfaceNode random_surface(std::mt19937_64& rng, const std::map<Symbol, double>& env,
                           int depth) {
  std::uniform_int_distribution<int> kind(0, depth >= 4 ? 1 : 6);
  std::uniform_int_distribution<int> lit(1, 9);
  auto leaf_symbol = [&]() {
    auto it = env.begin();
    std::advance(it, std::uniform_int_distribution<std::size_t>(0, env.size() - 1)(rng));
    return SurfaceNode{symbol_name(it->first), it->second};
  };
  switch (kind(rng)) {
    case 0: {
      const int v = lit(rng);
      return {std::to_string(v), static_cast<double>(v)};
    }
    case 1:
      return leaf_symbol();
    case 2: {
      auto a = random_surface(rng, env, depth + 1);
      auto b = random_surface(rng, env, depth + 1);
      return {"(" + a.text + " + " + b.text + ")", a.value + b.value};
    }
    case 3: {
      auto a = random_surface(rng, env, depth + 1);
      auto b = random_surface(rng, env, depth + 1);
      return {"(" + a.text + " - " + b.text + ")", a.value - b.value};
    }
    case 4: {
      auto a = random_surface(rng, env, depth + 1);
      auto b = random_surface(rng, env, depth + 1);
      return {"(" + a.text + ")*(" + b.text + ")", a.value * b.value};
    }
    case 5: {
      auto a = random_surface(rng, env, depth + 1);
      const int d = lit(rng);
      return {"(" + a.text + ")/" + std::to_string(d), a.value / d};
    }
    default: {
      auto a = random_surface(rng, env, depth + 1);
      const int e = std::uniform_int_distribution<int>(0, 3)(rng);
      return {"(" + a.text + ")^" + std::to_string(e), std::pow(a.value, e)};
    }
  }
}

}  // namespace

TEST_CASE("eval: random surface trees match an independent evaluator") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> point(-1.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    std::map<Symbol, double> env{{t, point(rng)}, {x1, point(rng)}, {u1, point(rng)}};
    SurfaceNode node = random_surface(rng, env, 0);
    const double got = eval(parse(node.text), env);
    const double scale = std::max(1.0, std::abs(node.value));
    CHECK(std::abs(got - node.value) / scale <= 1e-12);
  }
}

TEST_CASE("print/parse round trip") {
  std::mt19937_64 rng(19);
  RandomExprConfig cfg{{t, x1, x2, u1, u2, s}, 6, 4, true};
  for (int i = 0; i < 100; ++i) {
    Expr e = random_polynomial(rng, cfg);
    if (i % 3 == 0) {
      const Expr d = random_polynomial(rng, cfg);
      if (!d.is_zero()) e = e / d;  // exercise quotients
    }
    CAPTURE(to_string(e));
    CHECK(parse(to_string(e)) == e);
  }
  CHECK(to_string(Expr()) == "0");
  CHECK(parse(to_string(parse("psi1^2/(4*psi0^2)"))) == parse("psi1^2/(4*psi0^2)"));
}
