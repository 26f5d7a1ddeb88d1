#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zoll/profiles.hpp"
#include "zoll/quadrature.hpp"

namespace zoll::cli {

// Bad config file, bad flag or invalid profile; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Range {
  double min = 0, max = 1;
  int count = 2;
  std::vector<double> values() const;  // count equispaced points, both ends included
};

enum class Format { Json, Csv };

struct ExperimentConfig {
  json profile = {{"kind", "zero"}};
  QuadratureConfig quadrature;
  std::map<std::string, Range> grids;
  json params = json::object();
  std::map<std::string, double> tolerances;  // per-check bound overrides
  std::string output = "out";
  Format format = Format::Csv;

  // Throws ConfigError on unknown keys, non-finite ranges or counts < 2.
  static ExperimentConfig from_json(const json& j);
  static ExperimentConfig load(const std::string& path);
  json to_json() const;

  Range grid(const std::string& name, Range fallback) const;
  double param(const std::string& name, double fallback) const;
  std::string param(const std::string& name, const std::string& fallback) const;

  // Kind-based: odd kinds are "odd_hermite" and "tabulated_odd", "zero"
  // fits both.
  bool profile_is_odd() const;
  RadialProfile radial() const;  // throws ConfigError for odd kinds
  OddProfile odd() const;        // throws ConfigError for radial kinds
};

struct Check {
  std::string name;
  double value = 0;
  double bound = 0;
  std::string relation = "<";  // "<", "<=", ">" or "=="
  bool pass() const;
  std::string line() const;  // "PASS name value < bound"
};

// A CSV table; in json format its rows are embedded in the report instead.
struct Table {
  std::string name;  // file name without extension
  std::string header;
  std::vector<std::string> rows;
  json to_json() const;
};

struct Report {
  std::string subcommand;
  std::vector<Check> checks;
  json data = json::object();
  std::vector<Table> tables;
  bool passed() const;
  std::string summary() const;
};

struct Options {
  std::optional<double> tol;  // replaces every upper bound
  unsigned seed = 1;
};

const std::vector<std::string>& subcommands();

// Computes one subcommand; throws ConfigError for unknown names.
Report run_subcommand(const std::string& name, const ExperimentConfig& cfg, const Options& opt);

// Writes <out>/<name>.json, the CSV tables and <out>/<name>.txt.
void write_report(const Report& r, const ExperimentConfig& cfg);

// Full command line; returns 0 pass, 1 tolerance failure, 2 config error,
// 3 internal error.
int run(int argc, char** argv);

}  // namespace zoll::cli
