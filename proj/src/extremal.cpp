#include "ocsym/extremal.hpp"

#include "ocsym/compiled.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace ocsym {

namespace {

constexpr double kBlowUpLimit = 1e9;

// Slot layout shared by all compiled right-hand sides:
// [t, x1..xn, u1..um, psi0, psi1..psin].
std::vector<Symbol> slot_layout(const Problem& p) {
  std::vector<Symbol> slots{Symbol::time()};
  for (int i = 1; i <= p.n; ++i) slots.push_back(Symbol::state(i));
  for (int j = 1; j <= p.m; ++j) slots.push_back(Symbol::control(j));
  slots.push_back(Symbol::costate0());
  for (int i = 1; i <= p.n; ++i) slots.push_back(Symbol::costate(i));
  return slots;
}

struct CompiledSystem {
  // Right-hand sides with u already eliminated, plus the control law itself.
  std::vector<CompiledExpr> state_rhs;    // n
  std::vector<CompiledExpr> costate_rhs;  // n
  std::vector<CompiledExpr> control;      // m
};

CompiledSystem compile_system(const Problem& p) {
  auto u_star = solve_control(p);
  if (!u_star)
    throw Error("no closed-form extremal control (Hamiltonian is not strictly "
                "concave in u); only symbolic verification applies");

  std::map<Symbol, Expr> u_bind;
  for (int j = 1; j <= p.m; ++j) u_bind.emplace(Symbol::control(j), (*u_star)[j - 1]);

  const std::vector<Symbol> slots = slot_layout(p);
  const std::vector<Expr> psi_dot = adjoint_rhs(p);

  CompiledSystem sys;
  for (int i = 0; i < p.n; ++i)
    sys.state_rhs.emplace_back(substitute(p.dynamics[i], u_bind), slots);
  for (int i = 0; i < p.n; ++i)
    sys.costate_rhs.emplace_back(substitute(psi_dot[i], u_bind), slots);
  for (int j = 0; j < p.m; ++j) sys.control.emplace_back((*u_star)[j], slots);
  return sys;
}

// values = full slot vector; z = (x, psi) packed state; writes dz.
void system_rhs(const Problem& p, const CompiledSystem& sys, double t,
                const std::vector<double>& z, double psi0, std::vector<double>& values,
                std::vector<double>& dz) {
  const int n = p.n;
  values[0] = t;
  for (int i = 0; i < n; ++i) values[1 + i] = z[i];
  values[1 + n + p.m] = psi0;
  for (int i = 0; i < n; ++i) values[1 + n + p.m + 1 + i] = z[n + i];
  for (int j = 0; j < p.m; ++j) values[1 + n + j] = sys.control[j].eval(values.data());
  for (int i = 0; i < n; ++i) dz[i] = sys.state_rhs[i].eval(values.data());
  for (int i = 0; i < n; ++i) dz[n + i] = sys.costate_rhs[i].eval(values.data());
}

void check_finite(const std::vector<double>& z, double t) {
  for (double v : z)
    if (!std::isfinite(v) || std::abs(v) > kBlowUpLimit) throw BlowUpError(t);
}

}  // namespace

Trajectory integrate_extremal(const Problem& p, const std::vector<double>& x0,
                              const std::vector<double>& psi_a, double psi0, double step) {
  p.validate();
  if (static_cast<int>(x0.size()) != p.n || static_cast<int>(psi_a.size()) != p.n)
    throw Error("initial condition dimension mismatch");
  if (!(psi0 < 0)) throw Error("psi0 must be negative for the closed-form control");
  if (!(step > 0)) throw Error("step must be positive");

  const CompiledSystem sys = compile_system(p);
  const double a = p.horizon_a, b = p.horizon_b;
  const long n_steps = std::max(1L, std::lround((b - a) / step));
  const double h = (b - a) / static_cast<double>(n_steps);

  const int dim = 2 * p.n;
  std::vector<double> z(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  std::vector<double> values(1 + p.n + p.m + 1 + p.n);
  for (int i = 0; i < p.n; ++i) z[i] = x0[i];
  for (int i = 0; i < p.n; ++i) z[p.n + i] = psi_a[i];

  Trajectory traj;
  traj.psi0 = psi0;
  auto record = [&](double t) {
    // system_rhs refreshes the control slots as a side effect
    system_rhs(p, sys, t, z, psi0, values, k1);
    traj.grid.push_back(t);
    traj.states.emplace_back(z.begin(), z.begin() + p.n);
    traj.costates.emplace_back(z.begin() + p.n, z.end());
    traj.controls.emplace_back(values.begin() + 1 + p.n, values.begin() + 1 + p.n + p.m);
  };

  check_finite(z, a);
  record(a);
  for (long s = 0; s < n_steps; ++s) {
    const double t = a + h * static_cast<double>(s);
    system_rhs(p, sys, t, z, psi0, values, k1);
    for (int i = 0; i < dim; ++i) tmp[i] = z[i] + 0.5 * h * k1[i];
    system_rhs(p, sys, t + 0.5 * h, tmp, psi0, values, k2);
    for (int i = 0; i < dim; ++i) tmp[i] = z[i] + 0.5 * h * k2[i];
    system_rhs(p, sys, t + 0.5 * h, tmp, psi0, values, k3);
    for (int i = 0; i < dim; ++i) tmp[i] = z[i] + h * k3[i];
    system_rhs(p, sys, t + h, tmp, psi0, values, k4);
    for (int i = 0; i < dim; ++i)
      z[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    const double t_next = a + h * static_cast<double>(s + 1);
    check_finite(z, t_next);
    record(t_next);
  }
  return traj;
}

DriftReport drift(const Problem& p, const Trajectory& traj, const FirstIntegral& c) {
  if (traj.grid.empty()) throw Error("empty trajectory");
  const std::vector<Symbol> slots = slot_layout(p);
  const CompiledExpr compiled(c.value, slots);  // throws on symbol mismatch

  std::vector<double> values(slots.size());
  auto eval_at = [&](std::size_t k) {
    values[0] = traj.grid[k];
    for (int i = 0; i < p.n; ++i) values[1 + i] = traj.states[k][i];
    for (int j = 0; j < p.m; ++j) values[1 + p.n + j] = traj.controls[k][j];
    values[1 + p.n + p.m] = traj.psi0;
    for (int i = 0; i < p.n; ++i) values[1 + p.n + p.m + 1 + i] = traj.costates[k][i];
    return compiled.eval(values.data());
  };

  DriftReport report;
  report.reference = eval_at(0);
  if (!std::isfinite(report.reference)) throw Error("non-finite reference value");
  for (std::size_t k = 1; k < traj.grid.size(); ++k) {
    const double d = std::abs(eval_at(k) - report.reference);
    if (d > report.max_abs_drift) report.max_abs_drift = d;
  }
  report.relative_drift = report.max_abs_drift / std::max(1.0, std::abs(report.reference));
  return report;
}

namespace {

// Deterministic uniform draw in [-1,1] built from raw mt19937_64 bits so the
// ensemble is reproducible across standard library implementations.
double uniform_pm1(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

}  // namespace

EnsembleResult ensemble_drift(const Problem& p, const FirstIntegral& c, int trials,
                              std::uint64_t seed, double step) {
  if (trials <= 0) throw Error("empty ensemble");
  std::mt19937_64 rng(seed);

  EnsembleResult result;
  bool have_result = false;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> x0(p.n), psi_a(p.n);
    for (int i = 0; i < p.n; ++i) x0[i] = uniform_pm1(rng());
    for (int i = 0; i < p.n; ++i) psi_a[i] = uniform_pm1(rng());
    try {
      Trajectory traj = integrate_extremal(p, x0, psi_a, -0.5, step);
      DriftReport report = drift(p, traj, c);
      ++result.trials_run;
      if (!have_result || report.relative_drift > result.worst.relative_drift) {
        result.worst = report;
        result.worst_trajectory = std::move(traj);
        have_result = true;
      }
    } catch (const BlowUpError&) {
      ++result.blowups_excluded;
    }
  }
  if (!have_result) throw Error("every ensemble trial blew up");
  return result;
}

void write_csv(std::ostream& os, const Problem& p, const Trajectory& traj,
               const DriftReport* report) {
  os << "t";
  for (int i = 1; i <= p.n; ++i) os << ",x" << i;
  for (int i = 1; i <= p.n; ++i) os << ",psi" << i;
  for (int j = 1; j <= p.m; ++j) os << ",u" << j;
  os << "\n";
  char buf[32];
  auto cell = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << ',' << buf;
  };
  for (std::size_t k = 0; k < traj.grid.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.grid[k]);
    os << buf;
    for (int i = 0; i < p.n; ++i) cell(traj.states[k][i]);
    for (int i = 0; i < p.n; ++i) cell(traj.costates[k][i]);
    for (int j = 0; j < p.m; ++j) cell(traj.controls[k][j]);
    os << "\n";
  }
  if (report) {
    auto comment = [&](const char* name, double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << "# " << name << ' ' << buf << "\n";
    };
    comment("psi0", traj.psi0);
    comment("reference", report->reference);
    comment("max_abs_drift", report->max_abs_drift);
    comment("relative_drift", report->relative_drift);
  }
}

}  // namespace ocsym
