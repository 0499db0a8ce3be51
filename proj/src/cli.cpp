#include "purify/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "purify/concurrence.hpp"
#include "purify/cost.hpp"
#include "purify/errors.hpp"
#include "purify/families.hpp"
#include "purify/io.hpp"
#include "purify/optimize.hpp"
#include "purify/protocol.hpp"
#include "purify/quadrature.hpp"
#include "purify/sampling.hpp"
#include "purify/sun.hpp"

namespace purify::cli {
namespace {

namespace fs = std::filesystem;

struct GridSpec {
  int nx = 0;
  int ny = 0;  // 0 for one-parameter families
};

GridSpec parse_grid(const std::string& s, int arity, int fallback) {
  GridSpec g;
  if (s.empty()) {
    g.nx = fallback;
    g.ny = arity == 2 ? fallback : 0;
    return g;
  }
  int nx = 0, ny = 0, consumed = 0;
  if (std::sscanf(s.c_str(), "%d x %d %n", &nx, &ny, &consumed) == 2 &&
      consumed == static_cast<int>(s.size())) {
    if (arity != 2) throw ConfigError("grid NxM needs a two-parameter family");
    g.nx = nx;
    g.ny = ny;
  } else if (std::sscanf(s.c_str(), "%d %n", &nx, &consumed) == 1 &&
             consumed == static_cast<int>(s.size())) {
    g.nx = nx;
    g.ny = arity == 2 ? nx : 0;
  } else {
    throw ConfigError("grid must be an integer or NxM: " + s);
  }
  if (g.nx < 1 || (arity == 2 && g.ny < 1))
    throw ConfigError("grid sizes must be positive");
  return g;
}

// Cell-centered points over a rectangle; two-parameter grids keep only the
// unit disk. Cell centering keeps degenerate domain edges out of every grid.
std::vector<std::array<double, 2>> grid_points(const families::StateFamily& fam,
                                               const GridSpec& g, double lo, double hi) {
  std::vector<std::array<double, 2>> pts;
  if (fam.arity == 1) {
    pts.reserve(static_cast<std::size_t>(g.nx));
    for (int i = 0; i < g.nx; ++i)
      pts.push_back({lo + (hi - lo) * (i + 0.5) / g.nx, 0.0});
    return pts;
  }
  for (int j = 0; j < g.ny; ++j) {
    const double y = -1.0 + 2.0 * (j + 0.5) / g.ny;
    for (int i = 0; i < g.nx; ++i) {
      const double x = -1.0 + 2.0 * (i + 0.5) / g.nx;
      if (x * x + y * y <= 1.0) pts.push_back({x, y});
    }
  }
  return pts;
}

struct Trajectory {
  std::vector<double> c, p;  // per completed round; NaN once the point dies
  double overall = std::numeric_limits<double>::quiet_NaN();
};

// Iterates the fixed-gate step, feeding the kept branch's post-state back as
// both copies. Branch choice: maximum concurrence, lowest index among ties.
Trajectory run_trajectory(Mat4 rho, const Mat16& embedded, int rounds) {
  Trajectory t;
  t.c.assign(rounds, std::numeric_limits<double>::quiet_NaN());
  t.p.assign(rounds, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < rounds; ++k) {
    StepOutcome out;
    try {
      out = purification_step_embedded(rho, embedded, BranchPolicy::per_state_max());
    } catch (const DegeneracyError&) {
      return t;  // remaining rounds stay NaN, overall stays NaN
    }
    t.c[k] = out.selected_concurrence;
    t.p[k] = out.success_probability;
    rho = out.branches[out.selected_branch_set.front()].post_state;
  }
  t.overall = 1.0;
  for (int k = 0; k < rounds; ++k)
    t.overall *= std::pow(t.p[k], static_cast<double>(1LL << (rounds - 1 - k)));
  return t;
}

void append_trajectory_header(std::ostringstream& csv, int arity, int rounds) {
  csv << (arity == 2 ? "x,y" : "x");
  for (int k = 1; k <= rounds; ++k) csv << ",c_" << k;
  for (int k = 1; k <= rounds; ++k) csv << ",p_" << k;
  csv << ",overall_success\n";
}

void append_trajectory_row(std::ostringstream& csv, const std::array<double, 2>& pt,
                           int arity, const Trajectory& t) {
  csv << io::csv_cell(pt[0]);
  if (arity == 2) csv << ',' << io::csv_cell(pt[1]);
  for (double v : t.c) csv << ',' << io::csv_cell(v);
  for (double v : t.p) csv << ',' << io::csv_cell(v);
  csv << ',' << io::csv_cell(t.overall) << '\n';
}

families::PdfSpec resolve_pdf(const families::StateFamily& fam, io::RunConfig& cfg) {
  families::PdfSpec pdf =
      cfg.pdf.empty() ? fam.default_pdf : families::pdf_from_string(cfg.pdf);
  if ((pdf.dim() == 2) != (fam.arity == 2))
    throw ConfigError("pdf dimension does not match family " + fam.name);
  cfg.pdf = families::to_string(pdf);  // canonical echo
  return pdf;
}

// Canonicalizes the gate source so the config echo is self-contained even
// when the gate came from a file.
GateAngles resolve_gate(io::RunConfig& cfg) {
  GateAngles a = io::parse_gate(cfg.gate);
  if (cfg.gate != "cnot") {
    std::ostringstream s;
    s << "angles:";
    for (int i = 0; i < 15; ++i) {
      if (i) s << ',';
      s << io::csv_cell(a.alpha[i]);
    }
    cfg.gate = s.str();
  }
  return a;
}

void validate_common(const io::RunConfig& cfg) {
  if (cfg.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
}

void write_config_echo(const io::RunConfig& cfg) {
  if (cfg.out.empty()) return;
  io::ensure_directory(cfg.out);
  io::write_text_file((fs::path(cfg.out) / "config.json").string(),
                      io::config_to_json(cfg));
}

// Result documents embed the config with the output directory blanked so a
// re-run into a fresh directory produces byte-identical result files.
io::RunConfig portable(const io::RunConfig& cfg) {
  io::RunConfig c = cfg;
  c.out.clear();
  return c;
}

int cmd_families_list(const io::RunConfig& cfg) {
  std::ostringstream text;
  text << "family           params  domain  default-pdf     aliases\n";
  for (const auto& fam : families::all_families()) {
    std::string aliases = "-";
    if (fam.name == "rotated-werner") aliases = "example1";
    if (fam.name == "one-step") aliases = "example2";
    if (fam.name == "phi-mix") aliases = "example3";
    char line[160];
    std::snprintf(line, sizeof line, "%-16s %-7d %-7s %-15s %s\n", fam.name.c_str(),
                  fam.arity, fam.domain == families::Domain::UnitDisk ? "disk" : "(0,1)",
                  families::to_string(fam.default_pdf).c_str(), aliases.c_str());
    text << line;
  }
  text << "\npdf ids: uniform(a,b], 2x, 2(1-x), 6x(1-x), disk\n";
  text << "gate sources: cnot | angles:<15 comma-separated> | file:<path>\n";
  std::fputs(text.str().c_str(), stdout);
  if (!cfg.out.empty()) {
    io::ensure_directory(cfg.out);
    io::write_text_file((fs::path(cfg.out) / "families.txt").string(), text.str());
  }
  return 0;
}

int cmd_evaluate(io::RunConfig cfg) {
  validate_common(cfg);
  const auto& fam = families::family_from_string(cfg.family);
  cfg.family = fam.name;
  const families::PdfSpec pdf = resolve_pdf(fam, cfg);
  const GateAngles angles = resolve_gate(cfg);
  const GridSpec grid = parse_grid(cfg.grid, fam.arity, fam.arity == 2 ? 21 : 101);
  {
    std::ostringstream g;
    g << grid.nx;
    if (fam.arity == 2) g << 'x' << grid.ny;
    cfg.grid = g.str();
  }
  write_config_echo(cfg);

  const int n = cfg.iterations;
  const Mat16 embedded = embed_bilateral(su4_from_angles(angles));
  const auto pts = grid_points(fam, grid, 0.0, 1.0);

  std::ostringstream csv;
  append_trajectory_header(csv, fam.arity, n);
  for (const auto& pt : pts) {
    const Trajectory t = run_trajectory(fam.build(pt.data()).m, embedded, n);
    append_trajectory_row(csv, pt, fam.arity, t);
  }

  // f-bar under the configured pdf, from the deterministic sample stream.
  const sampling::SampleSet ss = sampling::sample(
      pdf, cfg.samples, cfg.seed, sampling::sequence_kind_from_string(cfg.sequence));
  std::vector<double> fbar_rounds(n, 0.0);
  double input_sum = 0.0;
  for (const auto& p : ss.points) {
    const Density4 rho = fam.build(p.data());
    input_sum += concurrence_unchecked(rho.m);
    const Trajectory t = run_trajectory(rho.m, embedded, n);
    for (int k = 0; k < n; ++k)
      if (std::isfinite(t.c[k])) fbar_rounds[k] += t.c[k];
  }
  for (int k = 0; k < n; ++k) fbar_rounds[k] = 1.0 - fbar_rounds[k] / ss.m();
  const double fbar_input = 1.0 - input_sum / ss.m();

  std::ostringstream js;
  js << "{\n  \"config\": " << io::config_to_json(portable(cfg));
  js << ",\n  \"gate_angles\": [";
  for (int i = 0; i < 15; ++i) js << (i ? "," : "") << io::csv_cell(angles.alpha[i]);
  js << "],\n  \"grid_points\": " << pts.size();
  js << ",\n  \"fbar_input\": " << io::csv_cell(fbar_input);
  js << ",\n  \"fbar_rounds\": [";
  for (int k = 0; k < n; ++k) js << (k ? "," : "") << io::csv_cell(fbar_rounds[k]);
  js << "],\n  \"fbar_output\": " << io::csv_cell(fbar_rounds[n - 1]) << "\n}\n";

  if (!cfg.out.empty()) {
    io::write_text_file((fs::path(cfg.out) / "evaluate.csv").string(), csv.str());
    io::write_text_file((fs::path(cfg.out) / "evaluate.json").string(), js.str());
  }
  std::printf("evaluate family=%s rounds=%d grid=%zu fbar_input=%.6f fbar_output=%.6f\n",
              fam.name.c_str(), n, pts.size(), fbar_input, fbar_rounds[n - 1]);
  return 0;
}

int cmd_oracle(io::RunConfig cfg) {
  validate_common(cfg);
  const auto& fam = families::family_from_string(cfg.family);
  cfg.family = fam.name;
  const families::PdfSpec pdf = resolve_pdf(fam, cfg);
  cfg.gate = "cnot";
  const int n = cfg.iterations;
  const GridSpec grid = parse_grid(cfg.grid, fam.arity, fam.arity == 2 ? 8 : 50);
  {
    std::ostringstream g;
    g << grid.nx;
    if (fam.arity == 2) g << 'x' << grid.ny;
    cfg.grid = g.str();
  }
  write_config_echo(cfg);

  // Closed forms hold where the top branch is the entangling one; below the
  // fidelity threshold tie aggregation changes P, so those windows start at
  // one half.
  double lo = 0.0;
  if (fam.name == "rotated-werner" || fam.name == "maz") lo = 0.5;
  const auto pts = grid_points(fam, grid, lo, 1.0);

  const Mat16 embedded = embed_bilateral(cnot_gate());
  std::ostringstream csv;
  csv << (fam.arity == 2 ? "x,y" : "x") << ",c_oracle";
  for (int k = 1; k <= n; ++k) csv << ",p_oracle_" << k;
  csv << ",c_sim";
  for (int k = 1; k <= n; ++k) csv << ",p_sim_" << k;
  csv << '\n';

  double dev_c = 0.0, dev_p = 0.0;
  for (const auto& pt : pts) {
    std::vector<double> params(pt.begin(), pt.begin() + fam.arity);
    const families::CnotOracle oracle = families::cnot_oracle(fam.name, params, n);
    const Trajectory t = run_trajectory(fam.build(pt.data()).m, embedded, n);
    if (!std::isfinite(t.c[n - 1]))
      throw NumericalError("oracle grid point lost every branch");
    dev_c = std::max(dev_c, std::fabs(oracle.c_out - t.c[n - 1]));
    for (int k = 0; k < n; ++k)
      dev_p = std::max(dev_p, std::fabs(oracle.p_per_iteration[k] - t.p[k]));
    csv << io::csv_cell(pt[0]);
    if (fam.arity == 2) csv << ',' << io::csv_cell(pt[1]);
    csv << ',' << io::csv_cell(oracle.c_out);
    for (double v : oracle.p_per_iteration) csv << ',' << io::csv_cell(v);
    csv << ',' << io::csv_cell(t.c[n - 1]);
    for (double v : t.p) csv << ',' << io::csv_cell(v);
    csv << '\n';
  }

  // Average infidelity before and after one step, by adaptive quadrature of
  // the closed forms against the configured density.
  double fbar_input_q, fbar_cnot_q;
  if (fam.arity == 1) {
    const double a = pdf.kind == families::PdfKind::Uniform1D ? pdf.a : 0.0;
    const double b = pdf.kind == families::PdfKind::Uniform1D ? pdf.b : 1.0;
    fbar_input_q = 1.0 - quad::integrate(
                             [&](double x) {
                               return pdf.density(x) * fam.known_concurrence(&x);
                             },
                             a, b, 1e-12);
    fbar_cnot_q = 1.0 - quad::integrate(
                            [&](double x) {
                              return pdf.density(x) *
                                     families::cnot_oracle(fam.name, {x}, 1).c_out;
                            },
                            a, b, 1e-12);
  } else {
    fbar_input_q = 1.0 - quad::disk_average(
                             [&](double x, double y) {
                               const double pr[2] = {x, y};
                               return fam.known_concurrence(pr);
                             },
                             1e-9);
    fbar_cnot_q = 1.0 - quad::disk_average(
                            [&](double x, double y) {
                              return families::cnot_oracle(fam.name, {x, y}, 1).c_out;
                            },
                            1e-9);
  }

  std::ostringstream js;
  js << "{\n  \"config\": " << io::config_to_json(portable(cfg));
  js << ",\n  \"grid_points\": " << pts.size();
  js << ",\n  \"max_abs_deviation_c\": " << io::csv_cell(dev_c);
  js << ",\n  \"max_abs_deviation_p\": " << io::csv_cell(dev_p);
  js << ",\n  \"max_abs_deviation\": " << io::csv_cell(std::max(dev_c, dev_p));
  js << ",\n  \"fbar_input_quadrature\": " << io::csv_cell(fbar_input_q);
  js << ",\n  \"fbar_cnot_quadrature\": " << io::csv_cell(fbar_cnot_q) << "\n}\n";

  if (!cfg.out.empty()) {
    io::write_text_file((fs::path(cfg.out) / "oracle.csv").string(), csv.str());
    io::write_text_file((fs::path(cfg.out) / "oracle.json").string(), js.str());
  }
  std::printf(
      "oracle family=%s rounds=%d grid=%zu max_dev=%.3e fbar_input=%.6f fbar_cnot=%.6f\n",
      fam.name.c_str(), n, pts.size(), std::max(dev_c, dev_p), fbar_input_q, fbar_cnot_q);
  return 0;
}

int cmd_optimize(io::RunConfig cfg) {
  validate_common(cfg);
  const auto& fam = families::family_from_string(cfg.family);
  cfg.family = fam.name;
  const families::PdfSpec pdf = resolve_pdf(fam, cfg);
  cfg.gate = "cnot";  // baseline column; the searched gate is reported per round
  cfg.grid.clear();
  cfg.optimizer.threads = cfg.threads;
  write_config_echo(cfg);

  const sampling::SequenceKind kind = sampling::sequence_kind_from_string(cfg.sequence);
  const RecurrenceResult res = recurrence_optimize(fam, pdf, cfg.samples, cfg.iterations,
                                                   cfg.optimizer, kind, cfg.seed);

  const int n = static_cast<int>(res.iterations.size());
  std::ostringstream itcsv;
  itcsv << "round,fbar,fbar_cnot,selected_branch,dropped\n";
  for (int k = 0; k < n; ++k) {
    const auto& it = res.iterations[k];
    itcsv << (k + 1) << ',' << io::csv_cell(it.fbar) << ',' << io::csv_cell(it.fbar_cnot)
          << ',' << it.selected_branch << ',' << it.dropped << '\n';
  }

  std::ostringstream scsv;
  append_trajectory_header(scsv, fam.arity, n);
  for (int j = 0; j < res.samples.m(); ++j) {
    Trajectory t;
    t.c.resize(n);
    t.p.resize(n);
    for (int k = 0; k < n; ++k) {
      t.c[k] = res.iterations[k].c_out[j];
      t.p[k] = res.iterations[k].p_out[j];
    }
    t.overall = res.overall_success[j];
    append_trajectory_row(scsv, res.samples.points[j], fam.arity, t);
  }

  if (!cfg.out.empty()) {
    io::write_text_file((fs::path(cfg.out) / "result.json").string(),
                        io::recurrence_to_json(res, portable(cfg)));
    io::write_text_file((fs::path(cfg.out) / "iterations.csv").string(), itcsv.str());
    io::write_text_file((fs::path(cfg.out) / "samples.csv").string(), scsv.str());
    io::write_text_file((fs::path(cfg.out) / "final_gate.json").string(),
                        io::angles_to_json(res.iterations.back().angles));
  }
  for (int k = 0; k < n; ++k) {
    const auto& it = res.iterations[k];
    std::printf("round %d: fbar=%.6f fbar_cnot=%.6f branch=%d dropped=%d\n", k + 1,
                it.fbar, it.fbar_cnot, it.selected_branch, it.dropped);
  }
  for (const auto& w : res.warnings) std::printf("warning: %s\n", w.c_str());
  std::printf("optimize family=%s rounds=%d samples=%d survivors=%zu\n", fam.name.c_str(),
              n, res.samples.m(), res.survivors.size());
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"recurrence entanglement purification toolkit"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  io::RunConfig flags;
  auto* o_config = app.add_option("--config", config_path, "JSON config file");
  auto* o_family = app.add_option("--family", flags.family, "state family id");
  auto* o_pdf = app.add_option("--pdf", flags.pdf, "parameter density id");
  auto* o_gate = app.add_option("--gate", flags.gate, "cnot | angles:<15> | file:<path>");
  auto* o_iter = app.add_option("--iterations", flags.iterations, "protocol rounds");
  auto* o_samples = app.add_option("--samples", flags.samples, "sample count");
  auto* o_grid = app.add_option("--grid", flags.grid, "grid size: N or NxM");
  auto* o_seed = app.add_option("--seed", flags.seed, "sample stream seed");
  auto* o_threads = app.add_option("--threads", flags.threads, "worker threads");
  auto* o_out = app.add_option("--out", flags.out, "output directory");
  auto* o_seq =
      app.add_option("--sequence", flags.sequence, "low-discrepancy | pseudo-random");

  CLI::App* sub_list = app.add_subcommand("families-list", "list families and pdf ids");
  CLI::App* sub_eval =
      app.add_subcommand("evaluate", "run a fixed gate over a parameter grid");
  CLI::App* sub_opt = app.add_subcommand("optimize", "search gates round by round");
  CLI::App* sub_oracle =
      app.add_subcommand("oracle", "compare the simulator against closed forms");
  for (CLI::App* s : {sub_list, sub_eval, sub_opt, sub_oracle}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    io::RunConfig cfg;
    if (!config_path.empty()) io::merge_config_file(cfg, config_path);
    if (o_family->count()) cfg.family = flags.family;
    if (o_pdf->count()) cfg.pdf = flags.pdf;
    if (o_gate->count()) cfg.gate = flags.gate;
    if (o_iter->count()) cfg.iterations = flags.iterations;
    if (o_samples->count()) cfg.samples = flags.samples;
    if (o_grid->count()) cfg.grid = flags.grid;
    if (o_seed->count()) cfg.seed = flags.seed;
    if (o_threads->count()) cfg.threads = flags.threads;
    if (o_out->count()) cfg.out = flags.out;
    if (o_seq->count()) cfg.sequence = flags.sequence;
    (void)o_config;

    if (sub_list->parsed()) cfg.command = "families-list";
    else if (sub_eval->parsed()) cfg.command = "evaluate";
    else if (sub_opt->parsed()) cfg.command = "optimize";
    else if (sub_oracle->parsed()) cfg.command = "oracle";
    // no subcommand on the command line: fall back to the config file's

    if (cfg.command == "families-list") return cmd_families_list(cfg);
    if (cfg.command == "evaluate") return cmd_evaluate(cfg);
    if (cfg.command == "optimize") return cmd_optimize(cfg);
    if (cfg.command == "oracle") return cmd_oracle(cfg);
    throw ConfigError("unknown command: " + cfg.command);
  } catch (const DegeneracyError& e) {
    std::fprintf(stderr, "degeneracy error: %s\n", e.what());
    return 4;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
}

}  // namespace purify::cli
