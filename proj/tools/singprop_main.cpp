#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "singprop/errors.hpp"
#include "singprop/pipeline.hpp"
#include "singprop/report.hpp"

namespace fs = std::filesystem;
using namespace singprop;

namespace {

struct Overrides {
  std::optional<double> step, max_len, tol_active, delta_min, turn_tol,
      grid_h;
};

void apply_overrides(PipelineOptions* opts, const Overrides& ov) {
  if (ov.step) opts->step = *ov.step;
  if (ov.max_len) opts->max_len = *ov.max_len;
  if (ov.tol_active) opts->tol_active = *ov.tol_active;
  if (ov.delta_min) opts->delta_min = *ov.delta_min;
  if (ov.turn_tol) opts->turn_tol = *ov.turn_tol;
  if (ov.grid_h) opts->grid_h = *ov.grid_h;
}

void apply_env_seed(PipelineOptions* opts) {
  const char* s = std::getenv("SINGPROP_SEED");
  if (!s || !*s) return;
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (errno != 0 || end == s || *end != '\0')
    throw ParseError("SINGPROP_SEED must be an unsigned integer");
  opts->oracle_seed = v;
}

struct Output {
  fs::path dir;
  std::string scenario;

  std::string emit(const std::string& suffix, const std::string& content) const {
    std::string file = scenario + "_" + suffix;
    write_file(dir / file, content);
    return file;
  }
};

int run_analyze(const SemiconcaveFn& fn, const Scenario& sc, Vec2 point,
                const Output& out) {
  AnalyzeResult res = analyze_point(fn, point, sc.options.tol_active);
  out.emit("analyze.json", analyze_json(sc.name, point, res, fn));
  std::string msg = res.singular ? "singular point" : "regular point";
  out.emit("summary.json", summary_json(sc.name, "analyze", {}, true, msg));
  return 0;
}

int run_scan(const SemiconcaveFn& fn, const Scenario& sc, const Output& out) {
  ScanResult scan = grid_singularity_scan(fn, sc.options.grid_h, 10.0,
                                          sc.options.tol_active);
  out.emit("scan.csv", scan_csv(scan));
  std::string msg = std::to_string(scan.flagged.size()) + " flagged cells of " +
                    std::to_string(static_cast<long long>(scan.nx) * scan.ny);
  out.emit("summary.json", summary_json(sc.name, "scan", {}, true, msg));
  return 0;
}

int run_trace(const SemiconcaveFn& fn, const Scenario& sc, const Output& out) {
  std::vector<SingularArc> arcs = trace_all(fn, sc.seeds, sc.options);
  std::vector<SummaryEntry> entries;
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    SummaryEntry e;
    e.arc_id = "arc" + std::to_string(k);
    e.pass = true;
    e.files.push_back(out.emit(e.arc_id + ".csv", arc_csv(arcs[k])));
    entries.push_back(std::move(e));
  }
  std::string msg = std::to_string(arcs.size()) + " arcs traced";
  out.emit("summary.json", summary_json(sc.name, "trace", entries, true, msg));
  return 0;
}

int run_certify(const SemiconcaveFn& fn, const Scenario& sc,
                const Output& out) {
  std::vector<SingularArc> arcs = trace_all(fn, sc.seeds, sc.options);
  if (arcs.empty()) {
    out.emit("summary.json", summary_json(sc.name, "certify", {}, false,
                                          "no singular seeds"));
    std::cerr << "certify: no singular seeds\n";
    return 1;
  }

  // Certify everything before writing anything, so a failed run leaves no
  // partial arc files.
  std::vector<ArcCertificate> certs;
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    ArcCertificate c = certify_arc(fn, arcs[k], sc.options);
    c.arc_id = "arc" + std::to_string(k);
    certs.push_back(std::move(c));
  }

  bool all_pass = true;
  std::vector<SummaryEntry> entries;
  for (const ArcCertificate& c : certs) {
    SummaryEntry e;
    e.arc_id = c.arc_id;
    e.pass = c.pass;
    all_pass = all_pass && c.pass;
    e.files.push_back(out.emit(c.arc_id + ".csv", arc_csv(c.arc)));
    e.files.push_back(out.emit(c.arc_id + ".json", certificate_json(sc.name, c)));
    entries.push_back(std::move(e));
  }
  std::string msg = all_pass ? "all arcs certified" : "certification failed";
  out.emit("summary.json",
           summary_json(sc.name, "certify", entries, all_pass, msg));
  if (!all_pass) std::cerr << "certify: certification failed\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"singular set tracing for minima of polynomial branches"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string scenario_path;
  std::string out_dir = ".";
  Overrides ov;
  app.add_option("--scenario", scenario_path, "scenario file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--step", ov.step, "arc step length")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-len", ov.max_len, "arc length cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-active", ov.tol_active, "active-set tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--delta-min", ov.delta_min,
                 "required superdifferential diameter")
      ->check(CLI::PositiveNumber);
  app.add_option("--turn-tol", ov.turn_tol, "turn convergence tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--grid-h", ov.grid_h, "scan cell size")
      ->check(CLI::PositiveNumber);

  CLI::App* cmd_analyze =
      app.add_subcommand("analyze", "gradient structure at one point");
  double px = 0.0, py = 0.0;
  cmd_analyze->add_option("x", px, "first coordinate")->required();
  cmd_analyze->add_option("y", py, "second coordinate")->required();
  CLI::App* cmd_scan =
      app.add_subcommand("scan", "flag grid cells meeting the singular set");
  CLI::App* cmd_trace =
      app.add_subcommand("trace", "trace singular arcs from the seeds");
  CLI::App* cmd_certify [[maybe_unused]] =
      app.add_subcommand("certify", "trace arcs and certify propagation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Scenario sc;
  try {
    sc = parse_scenario_file(scenario_path);
    apply_overrides(&sc.options, ov);
    apply_env_seed(&sc.options);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  }

  Output out{fs::path(out_dir), sc.name};
  std::string command = cmd_analyze->parsed()   ? "analyze"
                        : cmd_scan->parsed()    ? "scan"
                        : cmd_trace->parsed()   ? "trace"
                                                : "certify";
  try {
    std::error_code ec;
    fs::create_directories(out.dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir);

    SemiconcaveFn fn = make_fn(sc);
    if (cmd_analyze->parsed()) return run_analyze(fn, sc, {px, py}, out);
    if (cmd_scan->parsed()) return run_scan(fn, sc, out);
    if (cmd_trace->parsed()) return run_trace(fn, sc, out);
    return run_certify(fn, sc, out);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    try {
      out.emit("summary.json",
               summary_json(sc.name, command, {}, false, e.what()));
    } catch (...) {
    }
    return 1;
  }
}
