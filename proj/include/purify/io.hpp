#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "purify/optimize.hpp"
#include "purify/sun.hpp"

namespace purify::io {

// One resolved run description. Every CLI flag mirrors one of these keys; a
// JSON config file fills whatever the flags leave unset.
struct RunConfig {
  std::string command = "families-list";
  std::string family = "werner";
  std::string pdf;  // empty: family default
  std::string gate = "cnot";
  int iterations = 1;
  int samples = 512;
  std::string grid;  // "101" or "21x21"; empty: per-command default
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;  // output directory; empty: print-only
  std::string sequence = "low-discrepancy";
  OptimizerConfig optimizer;
};

// Reads a JSON config document and overlays the keys it contains onto cfg.
// Unknown keys are rejected so typos fail loudly.
void merge_config_file(RunConfig& cfg, const std::string& path);

// Serializes the fully resolved config (the reproducibility echo).
std::string config_to_json(const RunConfig& cfg);

// Gate sources: "cnot", "angles:a1,...,a15", "file:<path>" where the file
// holds a JSON 15-element array (or {"angles": [...]}).
GateAngles parse_gate(const std::string& source);

std::string angles_to_json(const GateAngles& a);
GateAngles angles_from_json_text(const std::string& text);

// CSV helpers: '.' decimal separator, full round-trip precision, "nan" for
// unavailable cells.
std::string csv_cell(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

// The single result document for an optimize run.
std::string recurrence_to_json(const RecurrenceResult& res, const RunConfig& cfg);

}  // namespace purify::io
