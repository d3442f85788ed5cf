#include "ocsym/extremal.hpp"

#include "ocsym/compiled.hpp"
#include "ocsym/homogeneity.hpp"
#include "ocsym/invariance.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ocsym;
using namespace ocsym::testing;

namespace {

const Weights martinet_weights{rat(2), {rat(1), rat(1), rat(3)}, {rat(-1), rat(-1)}};

FirstIntegral martinet_law() { return scaling_integral(martinet(), martinet_weights); }

FirstIntegral minus_h(const Problem& p) {
  return FirstIntegral{-hamiltonian(p), IntegralSource::User, 1};
}

}  // namespace

TEST_CASE("integrate_extremal: equilibrium of a flat problem") {
  const Problem p = make_problem("still", 1, 1, "u1^2", {"0*u1"});
  const Trajectory traj = integrate_extremal(p, {0.7}, {0.0}, -0.5, 1e-2);
  for (const auto& x : traj.states) CHECK(x[0] == doctest::Approx(0.7));
  for (const auto& u : traj.controls) CHECK(u[0] == doctest::Approx(0.0));
  CHECK(traj.grid.front() == doctest::Approx(0.0));
  CHECK(traj.grid.back() == doctest::Approx(1.0));
  CHECK(traj.grid.size() == 101);
}

TEST_CASE("integrate_extremal: cubic drift field stays finite") {
  const Trajectory traj =
      integrate_extremal(ex4_1(), {1, 0, 0, 1}, {0, 0, 1, 0}, -0.5, 1e-3);
  CHECK(traj.grid.size() == 1001);
  for (const auto& x : traj.states)
    for (double v : x) CHECK(std::isfinite(v));
}

TEST_CASE("integrate_extremal: input validation") {
  const Problem p = martinet();
  CHECK_THROWS_AS(integrate_extremal(p, {0, 0}, {1, 1, 1}, -0.5, 1e-3), Error);
  CHECK_THROWS_AS(integrate_extremal(p, {0, 0, 0}, {1, 1, 1}, 0.5, 1e-3), Error);
  CHECK_THROWS_AS(integrate_extremal(p, {0, 0, 0}, {1, 1, 1}, -0.5, -1e-3), Error);
  CHECK_THROWS_AS(integrate_extremal(timeopt4(), {0, 0, 0, 0}, {1, 1, 1, 1}, -0.5, 1e-3),
                  Error);
}

TEST_CASE("integrate_extremal: blow-up is detected and timed") {
  // xdot = x1^2 from x1(0) = 2 escapes at t = 1/2
  const Problem p = make_problem("escape", 1, 1, "u1^2", {"x1^2 + 0*u1"});
  try {
    integrate_extremal(p, {2.0}, {0.0}, -0.5, 1e-3);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.time() > 0.4);
    CHECK(e.time() < 0.6);
  }
}

TEST_CASE("drift: conservation along martinet extremals") {
  const Problem p = martinet();
  const Trajectory traj =
      integrate_extremal(p, {0.3, -0.2, 0.5}, {0.4, 0.7, -0.6}, -0.5, 1e-3);
  const DriftReport rep = drift(p, traj, martinet_law());
  CHECK(rep.relative_drift <= 1e-8);
  CHECK(drift(p, traj, minus_h(p)).relative_drift <= 1e-8);
}

TEST_CASE("drift: the zero integral does not drift") {
  const Problem p = martinet();
  const Trajectory traj = integrate_extremal(p, {0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, -0.5, 1e-2);
  const FirstIntegral zero{Expr(), IntegralSource::User, 1};
  const DriftReport rep = drift(p, traj, zero);
  CHECK(rep.max_abs_drift == 0.0);
  CHECK(rep.relative_drift == 0.0);
}

TEST_CASE("drift: integral/problem mismatch is an evaluation error") {
  const Problem p = drift_problem();
  const Trajectory traj = integrate_extremal(p, {0.1, 0.2}, {0.3, 0.4}, -0.5, 1e-2);
  const FirstIntegral foreign{parse("psi4*x4"), IntegralSource::User, 1};
  CHECK_THROWS_AS(drift(p, traj, foreign), EvalError);
}

TEST_CASE("stationarity residual vanishes on trajectory samples") {
  const Problem p = ex4_2();
  const Trajectory traj =
      integrate_extremal(p, {0.2, -0.4, 0.6, 0.1}, {0.5, -0.3, 0.2, 0.7}, -0.5, 1e-2);
  std::vector<Symbol> slots{Symbol::time()};
  for (int i = 1; i <= p.n; ++i) slots.push_back(Symbol::state(i));
  for (int j = 1; j <= p.m; ++j) slots.push_back(Symbol::control(j));
  slots.push_back(Symbol::costate0());
  for (int i = 1; i <= p.n; ++i) slots.push_back(Symbol::costate(i));

  std::vector<CompiledExpr> st;
  for (const Expr& e : stationarity(p)) st.emplace_back(e, slots);

  std::vector<double> values(slots.size());
  for (std::size_t k = 0; k < traj.grid.size(); ++k) {
    values[0] = traj.grid[k];
    for (int i = 0; i < p.n; ++i) values[1 + i] = traj.states[k][i];
    for (int j = 0; j < p.m; ++j) values[1 + p.n + j] = traj.controls[k][j];
    values[1 + p.n + p.m] = traj.psi0;
    for (int i = 0; i < p.n; ++i) values[1 + p.n + p.m + 1 + i] = traj.costates[k][i];
    for (const CompiledExpr& e : st) CHECK(std::abs(e.eval(values.data())) <= 1e-10);
  }
}

TEST_CASE("step halving: fourth-order drift decay") {
  const Problem p = martinet();
  const FirstIntegral law = martinet_law();
  const std::vector<double> x0{0.4, -0.3, 0.2};
  const std::vector<double> pa{0.6, 0.2, -0.5};
  double previous = -1.0;
  for (double h : {4e-3, 2e-3, 1e-3}) {
    const DriftReport rep = drift(p, integrate_extremal(p, x0, pa, -0.5, h), law);
    if (previous > 0 && previous > 1e-12)
      CHECK(rep.max_abs_drift <= previous / 8.0);
    previous = rep.max_abs_drift;
  }
}

TEST_CASE("ensemble_drift: seeded worst case is tiny") {
  const EnsembleResult res = ensemble_drift(martinet(), martinet_law(), 20, 42, 1e-3);
  CHECK(res.trials_run + res.blowups_excluded == 20);
  CHECK(res.worst.relative_drift <= 1e-7);

  const Problem p42 = ex4_2();
  const FirstIntegral law42 =
      first_integral(p42, generator_of(p42, ex4_2_family()));
  const EnsembleResult res42 = ensemble_drift(p42, law42, 20, 42, 1e-3);
  CHECK(res42.worst.relative_drift <= 1e-7);
}

TEST_CASE("ensemble_drift: empty ensemble is an error") {
  CHECK_THROWS_AS(ensemble_drift(martinet(), martinet_law(), 0, 42, 1e-3), Error);
}

TEST_CASE("ensemble_drift: corrupted integral drifts, certified one does not") {
  const Problem p = martinet();
  FirstIntegral corrupted = martinet_law();
  corrupted.value += parse("t");
  const EnsembleResult good = ensemble_drift(p, martinet_law(), 5, 7, 1e-3);
  const EnsembleResult bad = ensemble_drift(p, corrupted, 5, 7, 1e-3);
  CHECK(good.worst.relative_drift <= 1e-7);
  CHECK(bad.worst.max_abs_drift > 1e-3);
  // halving the step does not repair a corrupted integral
  const EnsembleResult bad_half = ensemble_drift(p, corrupted, 5, 7, 5e-4);
  CHECK(bad_half.worst.max_abs_drift > 1e-3);
}

TEST_CASE("csv export") {
  const Problem p = drift_problem();
  const Trajectory traj = integrate_extremal(p, {0.1, -0.2}, {0.3, 0.4}, -0.5, 0.25);
  const DriftReport rep = drift(p, traj, minus_h(p));
  std::ostringstream os;
  write_csv(os, p, traj, &rep);
  const std::string text = os.str();
  CHECK(text.rfind("t,x1,x2,psi1,psi2,u1\n", 0) == 0);
  int rows = 0, comments = 0;
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == '\n') {
      ++rows;
      if (i + 1 < text.size() && text[i + 1] == '#') ++comments;
    }
  CHECK(rows == 1 + 5 + 4);  // header + samples + drift report
  CHECK(comments == 4);
}
