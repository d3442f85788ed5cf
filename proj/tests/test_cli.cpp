#include "ocsym/io.hpp"

#include "test_util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ocsym;
namespace fs = std::filesystem;

namespace {

const fs::path kData = OCSYM_DATA_DIR;
const std::string kBin = OCSYM_BIN;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "ocsym_test_stdout.txt";
  const fs::path err = fs::temp_directory_path() / "ocsym_test_stderr.txt";
  const std::string cmd =
      kBin + " " + args + " > " + out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  return RunResult{WEXITSTATUS(raw), slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("io: problem/family/generator round trips") {
  const Problem p = load_problem(kData / "problems/ex6_1_martinet.json");
  CHECK(p.name == "martinet");
  CHECK(p.n == 3);
  CHECK(p.m == 2);
  CHECK(p.lagrangian == parse("u1^2 + u2^2"));
  CHECK(p.horizon_a == 0.0);
  CHECK(p.horizon_b == 1.0);

  const Family fam = load_family(kData / "families/ex3_1.json");
  CHECK(fam.F == parse("2*s*(x1 + x2)"));
  fam.validate(load_problem(kData / "problems/ex3_1.json"));

  const Generator gen = load_generator(kData / "generators/ex4_1.json");
  CHECK(gen.components[0].xi[0] == parse("-x2"));

  CHECK(file_is_family(kData / "families/ex3_1.json"));
  CHECK_FALSE(file_is_family(kData / "generators/ex4_1.json"));
}

TEST_CASE("io: load errors carry file context") {
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), Error);

  const fs::path bad = fs::temp_directory_path() / "bad_problem.json";
  std::ofstream(bad) << "{\"name\": \"bad\", \"n\": 1, \"m\": 1, "
                        "\"lagrangian\": \"u1^^2\", \"dynamics\": [\"u1\"]}";
  try {
    load_problem(bad);
    FAIL("expected parse failure");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad_problem.json") != std::string::npos);
    CHECK(msg.find("lagrangian") != std::string::npos);
  }

  const fs::path empty_dir = fs::temp_directory_path() / "ocsym_empty_corpus";
  fs::create_directories(empty_dir);
  CHECK_THROWS_AS(load_corpus(empty_dir), Error);
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus"), Error);
}

TEST_CASE("io: corpus entries resolve relative paths") {
  const auto entries = load_corpus(kData / "corpus");
  CHECK(entries.size() == 10);
  bool found_martinet = false;
  for (const auto& e : entries)
    if (e.name == "ex6_1_martinet") {
      found_martinet = true;
      CHECK(e.expected_weights.has_value());
      CHECK(e.numeric);
      CHECK(e.family.has_value());
    }
  CHECK(found_martinet);
}

TEST_CASE("cli: corpus passes and is deterministic") {
  const std::string args = "corpus --dir " + (kData / "corpus").string();
  const RunResult first = run(args);
  CHECK(first.exit_code == 0);
  CHECK(first.out.find("10/10 corpus entries passed") != std::string::npos);
  const RunResult second = run(args);
  CHECK(second.out == first.out);  // byte-identical report
}

TEST_CASE("cli: check passes for corpus pairs") {
  const RunResult family_check =
      run("check " + (kData / "problems/ex3_1.json").string() + " " +
          (kData / "families/ex3_1.json").string());
  CHECK(family_check.exit_code == 0);
  CHECK(family_check.out.find("PASS") != std::string::npos);

  const RunResult gen_check =
      run("check " + (kData / "problems/ex4_1.json").string() + " " +
          (kData / "generators/ex4_1.json").string());
  CHECK(gen_check.exit_code == 0);
}

TEST_CASE("cli: corrupted generator fails check with residuals printed") {
  const fs::path bad = fs::temp_directory_path() / "ocsym_bad_gen.json";
  std::ofstream(bad) << R"({"tau": "0",
    "xi": ["x2", "x1", "-x4", "x3"],
    "upsilon": ["-u2", "u1"]})";  // xi1 sign flipped
  const RunResult res =
      run("check " + (kData / "problems/ex4_1.json").string() + " " + bad.string());
  CHECK(res.exit_code == 1);
  CHECK(res.out.find("FAIL") != std::string::npos);
  CHECK(res.out.find("residual") != std::string::npos);
}

TEST_CASE("cli: derive prints a reparsable integral and a zero certificate") {
  const fs::path out = fs::temp_directory_path() / "ocsym_derive.json";
  const RunResult res = run("derive " + (kData / "problems/ex6_1_martinet.json").string() +
                            " " + (kData / "generators/ex6_1_martinet.json").string() +
                            " --out " + out.string());
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("symbolic residual: 0") != std::string::npos);
  const auto report = nlohmann::json::parse(slurp(out));
  const std::string printed = report["integrals"][0]["integral"].get<std::string>();
  const Expr eq14 =
      parse("psi1*x1 + psi2*x2 + 3*psi3*x3 - 2*t*(psi0*(u1^2 + u2^2) + psi1*u1 "
            "+ psi2*u2 + psi3*u1*x2^2/2)");
  CHECK(parse(printed) == eq14);
}

TEST_CASE("cli: derive of the time-optimal chain prints its law") {
  const RunResult res = run("derive " + (kData / "problems/ex6_3_timeopt4.json").string() +
                            " " + (kData / "generators/ex6_3_timeopt4.json").string());
  CHECK(res.exit_code == 0);
  const Expr eq15 = parse("psi1*(x1 - t) + psi2*x2 + psi3*x3 + 2*psi4*x4");
  // the printed line is "first integral: <expr>"
  const auto pos = res.out.find("first integral: ");
  REQUIRE(pos != std::string::npos);
  const auto end = res.out.find('\n', pos);
  CHECK(parse(res.out.substr(pos + 16, end - pos - 16)) == eq15);
}

TEST_CASE("cli: homog on martinet and a non-polynomial rejection") {
  const RunResult res = run("homog " + (kData / "problems/ex6_1_martinet.json").string());
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("1 independent weight vector") != std::string::npos);

  const fs::path expp = fs::temp_directory_path() / "ocsym_exp_problem.json";
  std::ofstream(expp) << R"json({"name": "expcost", "n": 1, "m": 1,
    "lagrangian": "exp(x1)", "dynamics": ["u1"], "horizon": [0, 1]})json";
  const RunResult bad = run("homog " + expp.string());
  CHECK(bad.exit_code == 3);
}

TEST_CASE("cli: search finds the drift-problem symmetry") {
  const RunResult res =
      run("search " + (kData / "problems/ex6_2_drift.json").string() + " --degree 1");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("tau = -2*t") != std::string::npos);
  const RunResult res0 =
      run("search " + (kData / "problems/ex6_2_drift.json").string() +
          " --degree 0 --no-time-change --no-gauge");
  CHECK(res0.exit_code == 0);
}

TEST_CASE("cli: simulate passes, fails, and reports not-applicable") {
  const fs::path csv = fs::temp_directory_path() / "ocsym_sim.csv";
  const RunResult good =
      run("simulate " + (kData / "problems/ex6_1_martinet.json").string() +
          " --generator " + (kData / "generators/ex6_1_martinet.json").string() +
          " --trials 20 --seed 42 --out " + csv.string());
  CHECK(good.exit_code == 0);
  CHECK(good.out.find("PASS") != std::string::npos);
  const std::string csv_text = slurp(csv);
  CHECK(csv_text.rfind("t,x1,x2,x3,psi1,psi2,psi3,u1,u2\n", 0) == 0);
  CHECK(csv_text.find("# relative_drift") != std::string::npos);

  // a corrupted integral must fail with a drift table
  const RunResult bad =
      run("simulate " + (kData / "problems/ex6_1_martinet.json").string() +
          " --integral \"psi1*x1 + t\" --trials 5");
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("FAIL") != std::string::npos);

  // time-optimal: no closed-form control, distinct exit status
  const RunResult na =
      run("simulate " + (kData / "problems/ex6_4_timeopt3.json").string() +
          " --generator " + (kData / "generators/ex6_4_timeopt3.json").string());
  CHECK(na.exit_code == 3);
  CHECK(na.err.find("not applicable") != std::string::npos);
}

TEST_CASE("cli: usage errors exit with 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("check only_one_arg").exit_code == 2);
  CHECK(run("corpus --dir /nonexistent/corpus").exit_code == 2);
  CHECK(run("derive /nonexistent.json /also_missing.json").exit_code == 2);
}

TEST_CASE("cli: a perturbed expected integral fails its corpus entry") {
  const fs::path tmp = fs::temp_directory_path() / "ocsym_corpus_perturbed";
  fs::remove_all(tmp);
  fs::create_directories(tmp / "corpus");
  fs::copy(kData / "problems", tmp / "problems");
  fs::copy(kData / "families", tmp / "families");
  fs::copy(kData / "generators", tmp / "generators");
  for (const auto& e : fs::directory_iterator(kData / "corpus"))
    fs::copy(e.path(), tmp / "corpus" / e.path().filename());

  auto entry = nlohmann::json::parse(slurp(tmp / "corpus/ex4_1.json"));
  entry["expected_integral"] = "psi1*x2 + psi2*x1 - psi3*x4 + psi4*x3";  // sign broken
  std::ofstream(tmp / "corpus/ex4_1.json") << entry.dump(2);

  const RunResult res = run("corpus --dir " + (tmp / "corpus").string() + " --trials 3");
  CHECK(res.exit_code == 1);
  CHECK(res.out.find("ex4_1: FAIL (compare)") != std::string::npos);
  CHECK(res.out.find("9/10 corpus entries passed") != std::string::npos);
}
