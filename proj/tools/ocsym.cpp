// ocsym: symmetry and conservation-law toolkit for optimal control problems.
//
// Subcommands: check, derive, homog, search, simulate, corpus.
// Exit codes: 0 pass, 1 check/verification failure, 2 usage/parse error,
// 3 not applicable (e.g. no closed-form control for simulate).

#include "ocsym/extremal.hpp"
#include "ocsym/homogeneity.hpp"
#include "ocsym/invariance.hpp"
#include "ocsym/io.hpp"
#include "ocsym/noether.hpp"
#include "ocsym/search.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;
using namespace ocsym;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotApplicable = 3;

void emit_report(const std::string& out_path, const json& report) {
  if (out_path.empty()) return;
  std::ofstream os(out_path);
  if (!os) throw Error("cannot write " + out_path);
  os << report.dump(2) << "\n";
}

json residuals_to_json(const InvarianceReport& rep) {
  json j;
  j["passed"] = rep.passed;
  j["udot_dependence"] = rep.udot_dependence;
  for (const Expr& r : rep.lagrangian_residuals)
    j["lagrangian_residuals"].push_back(to_string(r));
  for (const auto& vec : rep.dynamics_residuals) {
    json row = json::array();
    for (const Expr& r : vec) row.push_back(to_string(r));
    j["dynamics_residuals"].push_back(std::move(row));
  }
  if (!rep.order0_residuals.empty()) {
    for (const Expr& r : rep.order0_residuals)
      j["order0_residuals"].push_back(to_string(r));
    j["lagrangian_remainder"] = to_string(rep.lagrangian_remainder);
    for (const Expr& r : rep.dynamics_remainders)
      j["dynamics_remainders"].push_back(to_string(r));
  }
  return j;
}

void print_failed_residuals(const InvarianceReport& rep) {
  for (std::size_t k = 0; k < rep.lagrangian_residuals.size(); ++k) {
    if (!rep.lagrangian_residuals[k].is_zero())
      std::cout << "  residual[s" << k + 1
                << "] L: " << rep.lagrangian_residuals[k] << "\n";
  }
  for (std::size_t k = 0; k < rep.dynamics_residuals.size(); ++k)
    for (std::size_t i = 0; i < rep.dynamics_residuals[k].size(); ++i)
      if (!rep.dynamics_residuals[k][i].is_zero())
        std::cout << "  residual[s" << k + 1 << "] phi" << i + 1 << ": "
                  << rep.dynamics_residuals[k][i] << "\n";
  for (std::size_t i = 0; i < rep.order0_residuals.size(); ++i)
    if (!rep.order0_residuals[i].is_zero())
      std::cout << "  order-0 residual #" << i << ": " << rep.order0_residuals[i]
                << "\n";
}

struct SimulateOptions {
  int trials = 20;
  std::uint64_t seed = 42;
  double step = 1e-3;
  double tol = 1e-6;
};

int run_check(const std::string& problem_file, const std::string& object_file,
              const std::string& out_path) {
  Problem p;
  bool is_family = false;
  Family fam;
  Generator gen;
  try {
    p = load_problem(problem_file);
    is_family = file_is_family(object_file);
    if (is_family)
      fam = load_family(object_file);
    else
      gen = load_generator(object_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  json report;
  report["command"] = "check";
  report["problem"] = p.name;
  report["kind"] = is_family ? "family" : "generator";
  int code = kExitFail;
  try {
    const InvarianceReport rep =
        is_family ? check_family(p, fam) : check_generator(p, gen);
    report["result"] = residuals_to_json(rep);
    if (rep.passed) {
      std::cout << "check " << p.name << " [" << report["kind"].get<std::string>()
                << "]: PASS"
                << (is_family ? "" : " (necessary conditions satisfied)") << "\n";
      code = kExitPass;
    } else {
      std::cout << "check " << p.name << " [" << report["kind"].get<std::string>()
                << "]: FAIL\n";
      print_failed_residuals(rep);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  report["passed"] = code == kExitPass;
  emit_report(out_path, report);
  return code;
}

int run_derive(const std::string& problem_file, const std::string& generator_file,
               const std::string& out_path) {
  Problem p;
  Generator gen;
  try {
    p = load_problem(problem_file);
    gen = load_generator(generator_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  json report;
  report["command"] = "derive";
  report["problem"] = p.name;
  try {
    bool all_zero = true;
    for (int k = 1; k <= gen.r(); ++k) {
      const FirstIntegral c = first_integral(p, gen, k);
      const Expr residual = verify_symbolic(p, c, gen);
      std::cout << "first integral";
      if (gen.r() > 1) std::cout << " [s" << k << "]";
      std::cout << ": " << c.value << "\n";
      std::cout << "symbolic residual: " << residual << "\n";
      json entry;
      entry["integral"] = to_string(c.value);
      entry["residual"] = to_string(residual);
      report["integrals"].push_back(std::move(entry));
      all_zero = all_zero && residual.is_zero();
    }
    report["passed"] = all_zero;
    emit_report(out_path, report);
    return all_zero ? kExitPass : kExitFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

int run_homog(const std::string& problem_file, const std::string& out_path) {
  Problem p;
  try {
    p = load_problem(problem_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!p.is_polynomial()) {
    std::cerr << "homog " << p.name << ": not applicable (non-polynomial problem)\n";
    return kExitNotApplicable;
  }

  json report;
  report["command"] = "homog";
  report["problem"] = p.name;
  const std::vector<Weights> basis = detect_weights(p);
  std::cout << "homog " << p.name << ": " << basis.size()
            << " independent weight vector(s)\n";
  for (const Weights& w : basis) {
    std::cout << "  alpha = " << rat_str(w.alpha) << ", beta = (";
    for (std::size_t i = 0; i < w.beta.size(); ++i)
      std::cout << (i ? ", " : "") << rat_str(w.beta[i]);
    std::cout << "), gamma = (";
    for (std::size_t i = 0; i < w.gamma.size(); ++i)
      std::cout << (i ? ", " : "") << rat_str(w.gamma[i]);
    std::cout << ")\n";
    const FirstIntegral c = scaling_integral(p, w);
    std::cout << "  integral: " << c.value << "\n";
    json entry = weights_to_json(w);
    entry["integral"] = to_string(c.value);
    report["weights"].push_back(std::move(entry));
  }
  report["passed"] = true;
  emit_report(out_path, report);
  return kExitPass;
}

int run_search(const std::string& problem_file, const Ansatz& ansatz,
               const std::string& out_path) {
  Problem p;
  try {
    p = load_problem(problem_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!p.is_polynomial()) {
    std::cerr << "search " << p.name << ": not applicable (non-polynomial problem)\n";
    return kExitNotApplicable;
  }

  json report;
  report["command"] = "search";
  report["problem"] = p.name;
  report["degree"] = ansatz.degree;
  const SearchReport sr = search_report(p, ansatz);
  report["unknowns"] = sr.stats.unknowns;
  report["equations"] = sr.stats.equations;
  report["rank"] = sr.stats.rank;
  std::cout << "search " << p.name << ": degree " << ansatz.degree << ", "
            << sr.stats.unknowns << " unknowns, " << sr.stats.equations
            << " equations, rank " << sr.stats.rank << ", basis of "
            << sr.entries.size() << "\n";
  for (std::size_t i = 0; i < sr.entries.size(); ++i) {
    const SearchEntry& e = sr.entries[i];
    const GeneratorComponent& g = e.generator.components[0];
    std::cout << "  generator " << i + 1 << ": tau = " << g.tau << ", xi = (";
    for (int k = 0; k < p.n; ++k) std::cout << (k ? ", " : "") << g.xi[k];
    std::cout << "), upsilon = (";
    for (int k = 0; k < p.m; ++k) std::cout << (k ? ", " : "") << g.upsilon[k];
    std::cout << "), f = " << g.f << "\n";
    std::cout << "    integral: " << e.integral.value << "\n";
    if (!e.residual.is_zero())
      std::cout << "    NONZERO residual: " << e.residual << "\n";
    json entry;
    entry["generator"] = generator_to_json(e.generator)[0];
    entry["integral"] = to_string(e.integral.value);
    entry["residual"] = to_string(e.residual);
    report["generators"].push_back(std::move(entry));
  }
  report["passed"] = true;
  emit_report(out_path, report);
  return kExitPass;
}

int run_simulate(const std::string& problem_file, const std::string& generator_file,
                 const std::string& integral_text, const SimulateOptions& opt,
                 const std::string& out_path) {
  Problem p;
  FirstIntegral integral;
  try {
    p = load_problem(problem_file);
    if (!generator_file.empty()) {
      const Generator gen = load_generator(generator_file);
      integral = first_integral(p, gen, 1);
    } else {
      integral = FirstIntegral{parse(integral_text), IntegralSource::User, 1};
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (!solve_control(p)) {
    std::cerr << "simulate " << p.name
              << ": not applicable; no closed-form extremal control, use the "
                 "symbolic certificate (derive) instead\n";
    return kExitNotApplicable;
  }

  try {
    const EnsembleResult res =
        ensemble_drift(p, integral, opt.trials, opt.seed, opt.step);
    const bool pass = res.worst.relative_drift <= opt.tol;
    char line[320];
    std::snprintf(line, sizeof line,
                  "simulate %s: trials=%d blowups=%d reference=%.17g "
                  "max_abs_drift=%.17g relative_drift=%.17g tol=%g -> %s",
                  p.name.c_str(), res.trials_run, res.blowups_excluded,
                  res.worst.reference, res.worst.max_abs_drift,
                  res.worst.relative_drift, opt.tol, pass ? "PASS" : "FAIL");
    std::cout << line << "\n";
    if (!out_path.empty()) {
      std::ofstream os(out_path);
      if (!os) throw Error("cannot write " + out_path);
      write_csv(os, p, res.worst_trajectory, &res.worst);
      std::cout << "worst trajectory written to " << out_path << "\n";
    }
    return pass ? kExitPass : kExitFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

int run_corpus(const std::string& dir, const SimulateOptions& opt,
               const std::string& out_path) {
  std::vector<CorpusEntry> entries;
  try {
    entries = load_corpus(dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  json report;
  report["command"] = "corpus";
  report["directory"] = dir;
  int failures = 0;

  for (const CorpusEntry& entry : entries) {
    std::vector<std::string> failed_stages;
    json je;
    je["name"] = entry.name;
    try {
      // invariance: family where given, generator always
      Generator gen;
      if (entry.family) {
        if (!check_family(entry.problem, *entry.family).passed)
          failed_stages.push_back("check_family");
        gen = generator_of(entry.problem, *entry.family);
        if (entry.generator && !(gen == *entry.generator))
          failed_stages.push_back("generator_of_mismatch");
      }
      if (entry.generator) gen = *entry.generator;
      if (!check_generator(entry.problem, gen).passed)
        failed_stages.push_back("check_generator");

      // derive and certify
      const FirstIntegral c = first_integral(entry.problem, gen, 1, false);
      if (!verify_symbolic(entry.problem, c, gen).is_zero())
        failed_stages.push_back("verify_symbolic");
      je["integral"] = to_string(c.value);

      // regression against the expected integral
      if (!(c.value == entry.expected_integral)) failed_stages.push_back("compare");

      // homogeneity where expected
      if (entry.expected_weights) {
        const Weights& w = *entry.expected_weights;
        if (!weights_satisfy(entry.problem, w))
          failed_stages.push_back("homogeneity_system");
        else if (!(scaling_integral(entry.problem, w).value == entry.expected_integral))
          failed_stages.push_back("homogeneity_integral");
      }

      // numeric conservation where applicable
      if (entry.numeric) {
        const EnsembleResult res =
            ensemble_drift(entry.problem, c, opt.trials, opt.seed, opt.step);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", res.worst.relative_drift);
        je["relative_drift"] = buf;
        je["blowups"] = res.blowups_excluded;
        if (res.worst.relative_drift > opt.tol) failed_stages.push_back("drift");
      }
    } catch (const Error& e) {
      failed_stages.push_back(std::string("exception: ") + e.what());
    }

    const bool ok = failed_stages.empty();
    failures += ok ? 0 : 1;
    je["passed"] = ok;
    std::cout << "corpus " << entry.name << ": " << (ok ? "PASS" : "FAIL");
    if (!ok) {
      std::cout << " (";
      for (std::size_t i = 0; i < failed_stages.size(); ++i)
        std::cout << (i ? ", " : "") << failed_stages[i];
      std::cout << ")";
      for (const std::string& s : failed_stages) je["failed_stages"].push_back(s);
    }
    std::cout << "\n";
    report["entries"].push_back(std::move(je));
  }

  std::cout << entries.size() - failures << "/" << entries.size()
            << " corpus entries passed\n";
  report["passed"] = failures == 0;
  emit_report(out_path, report);
  return failures == 0 ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetry and conservation-law toolkit for optimal control problems"};
  app.require_subcommand(1);

  std::string problem_file, object_file, out_path, corpus_dir = "data/corpus";
  std::string generator_file, integral_text;
  SimulateOptions sim;
  Ansatz ansatz;

  CLI::App* check = app.add_subcommand("check", "quasi-invariance of a family or generator");
  check->add_option("problem", problem_file, "problem file")->required();
  check->add_option("object", object_file, "family or generator file")->required();
  check->add_option("--out", out_path, "write a JSON report");

  CLI::App* derive = app.add_subcommand("derive", "first integral with symbolic certificate");
  derive->add_option("problem", problem_file, "problem file")->required();
  derive->add_option("generator", generator_file, "generator file")->required();
  derive->add_option("--out", out_path, "write a JSON report");

  CLI::App* homog = app.add_subcommand("homog", "scaling weights and integrals");
  homog->add_option("problem", problem_file, "problem file")->required();
  homog->add_option("--out", out_path, "write a JSON report");

  CLI::App* search = app.add_subcommand("search", "discover symmetry generators");
  search->add_option("problem", problem_file, "problem file")->required();
  search->add_option("--degree", ansatz.degree, "ansatz total degree")->capture_default_str();
  search->add_flag_callback("--no-time-change", [&] { ansatz.include_time_change = false; },
                            "pin tau to 0");
  search->add_flag_callback("--no-gauge", [&] { ansatz.include_gauge = false; },
                            "pin f to 0");
  search->add_option("--out", out_path, "write a JSON report");

  CLI::App* simulate = app.add_subcommand("simulate", "integrate extremals and measure drift");
  simulate->add_option("problem", problem_file, "problem file")->required();
  auto* gopt = simulate->add_option("--generator", generator_file,
                                    "generator file (integral derived from it)");
  auto* iopt = simulate->add_option("--integral", integral_text,
                                    "first-integral expression");
  gopt->excludes(iopt);
  simulate->add_option("--trials", sim.trials, "ensemble size")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "ensemble seed")->capture_default_str();
  simulate->add_option("--step", sim.step, "RK4 step")->capture_default_str();
  simulate->add_option("--tol", sim.tol, "relative drift tolerance")->capture_default_str();
  simulate->add_option("--out", out_path, "write the worst trajectory as CSV");

  CLI::App* corpus = app.add_subcommand("corpus", "run the built-in benchmark corpus");
  corpus->add_option("--dir", corpus_dir, "corpus directory")->capture_default_str();
  corpus->add_option("--trials", sim.trials, "ensemble size")->capture_default_str();
  corpus->add_option("--seed", sim.seed, "ensemble seed")->capture_default_str();
  corpus->add_option("--step", sim.step, "RK4 step")->capture_default_str();
  corpus->add_option("--tol", sim.tol, "relative drift tolerance")->capture_default_str();
  corpus->add_option("--out", out_path, "write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int cli_code = app.exit(e);
    return cli_code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) return run_check(problem_file, object_file, out_path);
    if (derive->parsed()) return run_derive(problem_file, generator_file, out_path);
    if (homog->parsed()) return run_homog(problem_file, out_path);
    if (search->parsed()) return run_search(problem_file, ansatz, out_path);
    if (simulate->parsed()) {
      if (generator_file.empty() && integral_text.empty()) {
        std::cerr << "error: simulate needs --generator or --integral\n";
        return kExitUsage;
      }
      return run_simulate(problem_file, generator_file, integral_text, sim, out_path);
    }
    if (corpus->parsed()) return run_corpus(corpus_dir, sim, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
