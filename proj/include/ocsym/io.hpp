#pragma once

// Declarative JSON file formats for problems, transformation families,
// generators, and corpus entries, plus report serialization helpers.

#include "ocsym/family.hpp"
#include "ocsym/homogeneity.hpp"
#include "ocsym/problem.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace ocsym {

// Problem file: {"name", "n", "m", "lagrangian", "dynamics": [...], "horizon": [a, b]}.
Problem load_problem(const std::filesystem::path& path);

// Family file: {"r", "T", "X": [...], "U": [...], "F"} (F optional, default 0).
Family load_family(const std::filesystem::path& path);

// Generator file: {"tau", "xi": [...], "upsilon": [...], "f"} (tau/f optional).
Generator load_generator(const std::filesystem::path& path);

// True when the file contains a family (has "T") as opposed to a generator.
bool file_is_family(const std::filesystem::path& path);

struct CorpusEntry {
  std::string name;
  Problem problem;
  std::optional<Family> family;
  std::optional<Generator> generator;
  Expr expected_integral;
  std::optional<Weights> expected_weights;
  bool numeric = false;
};

// Corpus entry file: {"problem": <relative path>, "family": ..., "generator": ...,
// "expected_integral": "...", "expected_weights": {...}, "numeric": bool}.
CorpusEntry load_corpus_entry(const std::filesystem::path& path);

// Loads every *.json in the directory, sorted by filename. Throws when the
// directory is missing or contains no entries.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir);

nlohmann::json weights_to_json(const Weights& w);
nlohmann::json generator_to_json(const Generator& g);

}  // namespace ocsym
