#include "ocsym/io.hpp"

#include <algorithm>
#include <fstream>

namespace ocsym {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

Expr parse_field(const json& j, const std::string& key, const std::filesystem::path& path) {
  try {
    return parse(j.at(key).get<std::string>());
  } catch (const ParseError& e) {
    throw Error(path.string() + ": field '" + key + "': " + e.what());
  } catch (const json::exception& e) {
    throw Error(path.string() + ": field '" + key + "': " + e.what());
  }
}

std::vector<Expr> parse_list(const json& j, const std::string& key,
                             const std::filesystem::path& path) {
  std::vector<Expr> out;
  try {
    for (const auto& item : j.at(key)) out.push_back(parse(item.get<std::string>()));
  } catch (const ParseError& e) {
    throw Error(path.string() + ": field '" + key + "': " + e.what());
  } catch (const json::exception& e) {
    throw Error(path.string() + ": field '" + key + "': " + e.what());
  }
  return out;
}

Rat rat_field(const json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<std::int64_t>()));
  return rat_from_string(j.get<std::string>());
}

}  // namespace

Problem load_problem(const std::filesystem::path& path) {
  const json j = read_json(path);
  Problem p;
  try {
    p.name = j.value("name", path.stem().string());
    p.n = j.at("n").get<int>();
    p.m = j.at("m").get<int>();
    if (j.contains("horizon")) {
      p.horizon_a = j.at("horizon").at(0).get<double>();
      p.horizon_b = j.at("horizon").at(1).get<double>();
    }
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  p.lagrangian = parse_field(j, "lagrangian", path);
  p.dynamics = parse_list(j, "dynamics", path);
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return p;
}

Family load_family(const std::filesystem::path& path) {
  const json j = read_json(path);
  Family fam;
  try {
    fam.r = j.value("r", 1);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  fam.T = parse_field(j, "T", path);
  fam.X = parse_list(j, "X", path);
  fam.U = parse_list(j, "U", path);
  fam.F = j.contains("F") ? parse_field(j, "F", path) : Expr();
  return fam;
}

Generator load_generator(const std::filesystem::path& path) {
  const json j = read_json(path);
  GeneratorComponent g;
  g.tau = j.contains("tau") ? parse_field(j, "tau", path) : Expr();
  g.xi = parse_list(j, "xi", path);
  g.upsilon = parse_list(j, "upsilon", path);
  g.f = j.contains("f") ? parse_field(j, "f", path) : Expr();
  return Generator{{std::move(g)}};
}

bool file_is_family(const std::filesystem::path& path) {
  return read_json(path).contains("T");
}

CorpusEntry load_corpus_entry(const std::filesystem::path& path) {
  const json j = read_json(path);
  const std::filesystem::path base = path.parent_path();
  CorpusEntry entry;
  entry.name = path.stem().string();
  try {
    entry.problem = load_problem(base / j.at("problem").get<std::string>());
    if (j.contains("family")) entry.family = load_family(base / j.at("family").get<std::string>());
    if (j.contains("generator"))
      entry.generator = load_generator(base / j.at("generator").get<std::string>());
    entry.numeric = j.value("numeric", false);
    if (j.contains("expected_weights")) {
      const json& w = j.at("expected_weights");
      Weights weights;
      weights.alpha = rat_field(w.at("alpha"));
      for (const auto& b : w.at("beta")) weights.beta.push_back(rat_field(b));
      for (const auto& g : w.at("gamma")) weights.gamma.push_back(rat_field(g));
      entry.expected_weights = std::move(weights);
    }
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  entry.expected_integral = parse_field(j, "expected_integral", path);
  if (!entry.family && !entry.generator)
    throw Error(path.string() + ": corpus entry needs a family or a generator");
  return entry;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  if (files.empty()) throw Error("corpus directory is empty: " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> entries;
  entries.reserve(files.size());
  for (const auto& f : files) entries.push_back(load_corpus_entry(f));
  return entries;
}

nlohmann::json weights_to_json(const Weights& w) {
  json j;
  j["alpha"] = rat_str(w.alpha);
  for (const Rat& b : w.beta) j["beta"].push_back(rat_str(b));
  for (const Rat& g : w.gamma) j["gamma"].push_back(rat_str(g));
  return j;
}

nlohmann::json generator_to_json(const Generator& g) {
  json out = json::array();
  for (const GeneratorComponent& comp : g.components) {
    json j;
    j["tau"] = to_string(comp.tau);
    for (const Expr& x : comp.xi) j["xi"].push_back(to_string(x));
    for (const Expr& u : comp.upsilon) j["upsilon"].push_back(to_string(u));
    j["f"] = to_string(comp.f);
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace ocsym
