#include "purify/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "purify/errors.hpp"
#include "purify/families.hpp"

namespace purify::io {

using nlohmann::json;

namespace {

json optimizer_to_json(const OptimizerConfig& oc) {
  json j;
  j["memory_pairs"] = oc.memory_pairs;
  j["max_iterations"] = oc.max_iterations;
  j["projected_gradient_tolerance"] = oc.projected_gradient_tolerance;
  j["gradient_mode"] = to_string(oc.gradient_mode);
  j["cd_step"] = oc.cd_step;
  j["restarts"] = oc.restarts;
  j["restart_seed"] = oc.restart_seed;
  j["round_cap"] = oc.round_cap;
  return j;
}

void optimizer_from_json(const json& j, OptimizerConfig& oc) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "memory_pairs") {
      oc.memory_pairs = it.value().get<int>();
    } else if (key == "max_iterations") {
      oc.max_iterations = it.value().get<int>();
    } else if (key == "projected_gradient_tolerance") {
      oc.projected_gradient_tolerance = it.value().get<double>();
    } else if (key == "gradient_mode") {
      oc.gradient_mode = gradient_mode_from_string(it.value().get<std::string>());
    } else if (key == "cd_step") {
      oc.cd_step = it.value().get<double>();
    } else if (key == "restarts") {
      oc.restarts = it.value().get<int>();
    } else if (key == "restart_seed") {
      oc.restart_seed = it.value().get<std::uint64_t>();
    } else if (key == "round_cap") {
      oc.round_cap = it.value().get<int>();
    } else {
      throw ConfigError("unknown optimizer config key: " + key);
    }
  }
}

json config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["family"] = cfg.family;
  j["pdf"] = cfg.pdf;
  j["gate"] = cfg.gate;
  j["iterations"] = cfg.iterations;
  j["samples"] = cfg.samples;
  j["grid"] = cfg.grid;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["out"] = cfg.out;
  j["sequence"] = cfg.sequence;
  j["optimizer"] = optimizer_to_json(cfg.optimizer);
  return j;
}

json parse_json_text(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON in " + what);
  return j;
}

json double_array(const std::vector<double>& v) {
  // NaN entries serialize as null through nlohmann's dump().
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

void merge_config_file(RunConfig& cfg, const std::string& path) {
  json j = parse_json_text(read_text_file(path), path);
  if (!j.is_object()) throw ConfigError("config root must be a JSON object: " + path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "command") {
      cfg.command = it.value().get<std::string>();
    } else if (key == "family") {
      cfg.family = it.value().get<std::string>();
    } else if (key == "pdf") {
      cfg.pdf = it.value().get<std::string>();
    } else if (key == "gate") {
      cfg.gate = it.value().get<std::string>();
    } else if (key == "iterations") {
      cfg.iterations = it.value().get<int>();
    } else if (key == "samples") {
      cfg.samples = it.value().get<int>();
    } else if (key == "grid") {
      cfg.grid = it.value().get<std::string>();
    } else if (key == "seed") {
      cfg.seed = it.value().get<std::uint64_t>();
    } else if (key == "threads") {
      cfg.threads = it.value().get<int>();
    } else if (key == "out") {
      cfg.out = it.value().get<std::string>();
    } else if (key == "sequence") {
      cfg.sequence = it.value().get<std::string>();
    } else if (key == "optimizer") {
      if (!it.value().is_object()) throw ConfigError("optimizer must be an object");
      optimizer_from_json(it.value(), cfg.optimizer);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
}

std::string config_to_json(const RunConfig& cfg) { return config_json(cfg).dump(2); }

GateAngles parse_gate(const std::string& source) {
  if (source == "cnot") return cnot_angles();
  const std::string angles_prefix = "angles:";
  const std::string file_prefix = "file:";
  if (source.rfind(angles_prefix, 0) == 0) {
    std::string body = source.substr(angles_prefix.size());
    for (char& ch : body) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream in(body);
    GateAngles a;
    for (int i = 0; i < 15; ++i) {
      if (!(in >> a.alpha[i]))
        throw ConfigError("gate angles need 15 comma-separated numbers");
    }
    double extra;
    if (in >> extra) throw ConfigError("gate angles need exactly 15 numbers");
    check_angle_bounds(a);
    return a;
  }
  if (source.rfind(file_prefix, 0) == 0) {
    GateAngles a = angles_from_json_text(read_text_file(source.substr(file_prefix.size())));
    check_angle_bounds(a);
    return a;
  }
  throw ConfigError("gate must be cnot, angles:<15 numbers>, or file:<path>");
}

std::string angles_to_json(const GateAngles& a) {
  json arr = json::array();
  for (double v : a.alpha) arr.push_back(v);
  return arr.dump() + "\n";
}

GateAngles angles_from_json_text(const std::string& text) {
  json j = parse_json_text(text, "gate angles");
  if (j.is_object() && j.contains("angles")) j = j["angles"];
  if (!j.is_array() || j.size() != 15)
    throw ConfigError("gate angle JSON must be a 15-element array");
  GateAngles a;
  for (int i = 0; i < 15; ++i) {
    if (!j[i].is_number()) throw ConfigError("gate angle entries must be numbers");
    a.alpha[i] = j[i].get<double>();
  }
  return a;
}

std::string csv_cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << content;
  if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw ConfigError("cannot create directory " + path + ": " + ec.message());
}

std::string recurrence_to_json(const RecurrenceResult& res, const RunConfig& cfg) {
  json j;
  j["config"] = config_json(cfg);

  json samples;
  samples["m"] = res.samples.m();
  samples["dim"] = res.samples.dim;
  samples["seed"] = res.samples.seed;
  samples["kind"] = to_string(res.samples.kind);
  samples["pdf"] = families::to_string(res.samples.pdf);
  json pts = json::array();
  for (const auto& p : res.samples.points) {
    json row = json::array();
    for (int d = 0; d < res.samples.dim; ++d) row.push_back(p[d]);
    pts.push_back(row);
  }
  samples["points"] = pts;
  j["samples"] = samples;

  json its = json::array();
  for (const auto& it : res.iterations) {
    json rec;
    json ang = json::array();
    for (double v : it.angles.alpha) ang.push_back(v);
    rec["angles"] = ang;
    rec["fbar"] = it.fbar;
    rec["fbar_cnot"] = it.fbar_cnot;
    rec["selected_branch"] = it.selected_branch;
    rec["dropped"] = it.dropped;
    rec["c_out"] = double_array(it.c_out);
    rec["p_out"] = double_array(it.p_out);
    its.push_back(rec);
  }
  j["iterations"] = its;

  j["overall_success"] = double_array(res.overall_success);
  j["survivors"] = res.survivors;
  j["warnings"] = res.warnings;
  return j.dump(2) + "\n";
}

}  // namespace purify::io
