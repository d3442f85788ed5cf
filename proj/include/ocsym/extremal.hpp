#pragma once

// Numeric integration of Pontryagin extremals (state + costate with the
// closed-form stationarity control) and drift measurement of first
// integrals along the samples.

#include "ocsym/noether.hpp"
#include "ocsym/problem.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ocsym {

struct Trajectory {
  std::vector<double> grid;                  // strictly increasing, covers [a,b]
  std::vector<std::vector<double>> states;   // n per sample
  std::vector<std::vector<double>> costates; // n per sample
  std::vector<std::vector<double>> controls; // m per sample
  double psi0 = -0.5;
};

struct DriftReport {
  double reference = 0.0;      // C at t = a
  double max_abs_drift = 0.0;  // max |C(t) - C(a)| over the grid
  double relative_drift = 0.0; // max_abs_drift / max(1, |reference|)
};

class BlowUpError : public Error {
 public:
  BlowUpError(double time)
      : Error("trajectory blew up at t = " + std::to_string(time)), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Classical fixed-step RK4 on the coupled 2n-dimensional Hamiltonian system
// over [a,b], with u = u*(t,x,psi0,psi) from solve_control. Throws Error when
// the control is unsolvable, and BlowUpError (with the first bad time) when a
// sample exceeds 1e9 in magnitude or becomes non-finite.
Trajectory integrate_extremal(const Problem& p, const std::vector<double>& x0,
                              const std::vector<double>& psi_a, double psi0, double step);

// Evaluates c pointwise on the trajectory grid.
DriftReport drift(const Problem& p, const Trajectory& traj, const FirstIntegral& c);

struct EnsembleResult {
  DriftReport worst;
  Trajectory worst_trajectory;
  int trials_run = 0;
  int blowups_excluded = 0;
};

// Deterministic pseudorandom initial conditions (components uniform in
// [-1,1] from the seed, psi0 = -1/2); returns the worst drift over the
// ensemble. Blow-up trials are excluded and counted. Throws on an empty
// ensemble or when every trial blows up.
EnsembleResult ensemble_drift(const Problem& p, const FirstIntegral& c, int trials,
                              std::uint64_t seed, double step);

// CSV export: header t, x1..xn, psi1..psin, u1..um, one row per sample;
// when a drift report is given it is appended as '#'-prefixed comments.
void write_csv(std::ostream& os, const Problem& p, const Trajectory& traj,
               const DriftReport* report = nullptr);

}  // namespace ocsym
