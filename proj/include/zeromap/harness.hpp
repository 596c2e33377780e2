#ifndef ZEROMAP_HARNESS_HPP
#define ZEROMAP_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeromap/io.hpp"

namespace zeromap::harness {

using io::Json;

/// Commands understood by run_experiment.
const std::vector<std::string>& commands();

struct ExperimentConfig {
  std::string command;
  /// Operation arguments as text, e.g. {"N", "10^6"}, {"map", "logistic r=3.5"}.
  std::map<std::string, std::string> parameters;
  std::filesystem::path output_dir;
  std::uint64_t seed = 1;
};

/// A parameter failed validation; `field()` names it. Maps to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ReportBundle {
  std::string command;
  /// {"schema", "command", "seed", "parameters", "result"}.
  Json report;
  std::vector<CsvTable> tables;
  /// Config echo, version, wall time and seed.
  Json manifest;
};

/// Checks every parameter of `cfg` against the target operation before any
/// computation. Unknown keys are rejected.
void validate(const ExperimentConfig& cfg);

ReportBundle run_experiment(const ExperimentConfig& cfg);

enum class Format { json, csv, both };

Format parse_format(const std::string& s);

/// Writes <command>.json and/or <command>_<table>.csv plus manifest.json into
/// `dir`. Returns the paths written. Nothing is written when any part of the
/// bundle is empty.
std::vector<std::filesystem::path> emit_report(const ReportBundle& bundle,
                                               const std::filesystem::path& dir,
                                               Format format = Format::both);

/// $ZEROMAP_OUTPUT_DIR, else the current directory.
std::filesystem::path default_output_dir();

/// Reads a JSON config file: {"command", "seed", "output_dir", "parameters": {...}}.
/// Top-level keys other than these are taken as parameters too.
ExperimentConfig load_config(const std::filesystem::path& path);

/// 0 success, 2 validation, 3 computation, 4 I/O.
int exit_code_for(const std::exception& e);

std::string version();

}  // namespace zeromap::harness

#endif  // ZEROMAP_HARNESS_HPP
