#include "modalid/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "modalid/backbone.hpp"
#include "modalid/config_io.hpp"
#include "modalid/error.hpp"
#include "modalid/evolution.hpp"
#include "modalid/objectives.hpp"
#include "modalid/report.hpp"
#include "modalid/targets.hpp"
#include "modalid/text_io.hpp"

#ifndef MODALID_VERSION
#define MODALID_VERSION "0.0.0"
#endif

namespace modalid::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CoeffArgs {
  std::vector<double> cx = std::vector<double>(kDefaultTermsPerAxis, 0.0);
  std::vector<double> cy = std::vector<double>(kDefaultTermsPerAxis, 0.0);

  CoefficientSet get() const {
    if (cx.size() != kDefaultTermsPerAxis || cy.size() != kDefaultTermsPerAxis) {
      throw Error(ErrorKind::InvalidConfig, "--cx and --cy take exactly 3 comma-separated values");
    }
    CoefficientSet c;
    c.cx = cx;
    c.cy = cy;
    return c;
  }
};

void add_coeff_options(CLI::App* app, CoeffArgs& c) {
  app->add_option("--cx", c.cx, "x-bending coefficients c0,c1,c2")->delimiter(',')->expected(3);
  app->add_option("--cy", c.cy, "y-bending coefficients c0,c1,c2")->delimiter(',')->expected(3);
}

std::size_t threads_from_env() {
  const char* raw = std::getenv("MODALID_THREADS");
  if (!raw || !*raw) return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 0) {
    throw Error(ErrorKind::InvalidConfig, "MODALID_THREADS must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

json vec_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

std::string geometry_to_json(const BackboneCurve& curve, const CoefficientSet& coeffs,
                             std::size_t n) {
  const auto tip = tcp(curve);
  json pts = json::array();
  json s = json::array();
  json frames = json::array();
  for (const auto& smp : curve.samples) {
    pts.push_back(vec_json(smp.point));
    s.push_back(smp.s);
    json rot = json::array();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) rot.push_back(smp.frame.rotation(r, c));
    }
    frames.push_back({{"rotation", rot}, {"position", vec_json(smp.frame.position)}});
  }
  json divs = json::array();
  for (const auto& p : sample_divisions(curve, n)) divs.push_back(vec_json(p));
  json doc = {{"version", 1},
              {"kind", "geometry"},
              {"n", n},
              {"L", curve.length},
              {"scale", curve.scale},
              {"sample_count", curve.sample_count()},
              {"mode", std::string(to_string(curve.mode))},
              {"coefficients", {{"cx", coeffs.cx}, {"cy", coeffs.cy}}},
              {"division_points", divs},
              {"tcp_vector", vec_json(tip.direction)},
              {"tip", vec_json(tip.tip)},
              {"s", s},
              {"points", pts},
              {"frames", frames}};
  return doc.dump(2) + "\n";
}

void ensure_parent(const fs::path& file) {
  std::error_code ec;
  if (file.has_parent_path()) fs::create_directories(file.parent_path(), ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create '" + file.parent_path().string() + "'");
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  CoeffArgs coeffs;
  double length = 1.0;
  double scale = 1.0;
  std::size_t samples = kDefaultSampleCount;
  std::string mode = "paper_script";
  std::size_t n = 8;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto coeffs = a.coeffs.get();
  const auto curve = integrate_backbone(coeffs, a.length, a.scale, a.samples, parse_mode(a.mode));
  ensure_parent(a.out);
  write_text_file(a.out, geometry_to_json(curve, coeffs, a.n));
  const auto tip = tcp(curve);
  out << "tip " << format_double(tip.tip.x()) << " " << format_double(tip.tip.y()) << " "
      << format_double(tip.tip.z()) << "\n";
  return kExitOk;
}

// ---- target ---------------------------------------------------------------

struct TargetArgs {
  CoeffArgs coeffs;
  double length = 1.0;
  double scale = 1.0;
  std::size_t samples = kDefaultSampleCount;
  std::size_t n = 8;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string in;
  std::string out;
};

int cmd_target_synth(const TargetArgs& a, std::ostream& out) {
  const auto t = synth_target(a.coeffs.get(), a.length, a.scale, a.n, a.noise, a.seed, a.samples);
  ensure_parent(a.out);
  save_target(t, a.out);
  out << "wrote " << a.out << " (n=" << t.n << ")\n";
  return kExitOk;
}

int cmd_target_import(const TargetArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto text = read_text_file(a.in);
  const auto first = text.find_first_not_of(" \t\r\n");
  TargetConfiguration t = (first != std::string::npos && text[first] == '{')
                              ? parse_target_json(text, &warnings)
                              : import_csv_target(a.in, a.n, a.length, a.scale, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  ensure_parent(a.out);
  save_target(t, a.out);
  out << "wrote " << a.out << " (n=" << t.n << ")\n";
  return kExitOk;
}

// ---- identify -------------------------------------------------------------

struct IdentifyArgs {
  std::string target;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<double> bounds;
  std::optional<std::size_t> generations;
  std::optional<std::size_t> generation_size;
  std::optional<double> crossover;
  std::optional<double> mutation;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> n;
  bool record_timestamps = false;
};

std::string genome_text(const Genome& g) {
  std::string s;
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? " " : "") + format_double(g[i]);
  return s;
}

int cmd_identify(const IdentifyArgs& a, std::ostream& out, std::ostream& err) {
  const std::string started = a.record_timestamps ? utc_now() : std::string();
  std::vector<std::string> warnings;
  const auto target = load_target(a.target, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  EAConfig config;
  config.n_divisions = target.n;
  if (!a.config.empty()) config = load_config(a.config, config);
  if (a.seed) config.seed = *a.seed;
  if (!a.bounds.empty()) {
    if (a.bounds.size() != 2) throw Error(ErrorKind::InvalidConfig, "--bounds takes lo,hi");
    config.bounds.assign(config.bounds.size(), Bounds{a.bounds[0], a.bounds[1]});
  }
  if (a.generations) config.generation_count = *a.generations;
  if (a.generation_size) config.generation_size = *a.generation_size;
  if (a.crossover) config.crossover_prob = *a.crossover;
  if (a.mutation) config.mutation_prob = *a.mutation;
  if (a.samples) config.sample_count = *a.samples;
  if (a.n) config.n_divisions = *a.n;
  config.validate();

  const auto result = run(config, target, threads_from_env());

  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create output directory '" + a.out + "'");

  write_text_file(dir / "config.json", config_to_json(config));
  write_text_file(dir / "target.json", target_to_json(target));
  write_text_file(dir / "result.json", result_to_json(result));
  write_stats(result, dir);
  render_charts(result, dir);

  json manifest = {{"tool", "modalid"},
                   {"tool_version", MODALID_VERSION},
                   {"command", "identify"},
                   {"config_path", a.config},
                   {"target_path", a.target},
                   {"seed", config.seed},
                   {"config_echo", "config.json"},
                   {"target_echo", "target.json"},
                   {"outputs",
                    {"result.json", "generations.csv", "individuals.csv", "std_mse1.svg",
                     "std_mse2.svg", "mean_mse1.svg", "mean_mse2.svg", "scatter.svg"}}};
  if (a.record_timestamps) {
    manifest["timestamps"] = {{"started", started}, {"finished", utc_now()}};
  }
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

  out << "pareto front (" << result.pareto_front.size() << " individuals):\n";
  for (const auto& ind : result.pareto_front) {
    out << "  gen " << ind.generation << " #" << ind.index << "  mse1 "
        << format_double(ind.fitness->mse1) << "  mse2 " << format_double(ind.fitness->mse2)
        << "  genome " << genome_text(ind.genome) << "\n";
  }
  out << "best genome: " << genome_text(result.best.genome) << "\n"
      << "best fitness: " << format_double(result.best.fitness->mse1) << " "
      << format_double(result.best.fitness->mse2) << "\n";
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  CoeffArgs coeffs;
  std::string target;
  std::string candidate;
  std::size_t samples = kDefaultSampleCount;
};

FitnessPair eval_candidate_file(const std::string& path, const TargetConfiguration& target) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (doc.is_object() && doc.contains("points")) {
    std::vector<Eigen::Vector3d> pts;
    try {
      for (const auto& p : doc["points"]) {
        pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::SchemaError, e.what());
    }
    return evaluate_points(pts, target);
  }
  const auto cand = parse_target_json(doc.dump());
  if (cand.n != target.n) {
    throw Error(ErrorKind::LengthMismatch, "candidate n=" + std::to_string(cand.n) +
                                               " does not match target n=" + std::to_string(target.n));
  }
  return FitnessPair{mse_shape(cand.division_points, target.division_points, target.n),
                     mse_tcp(cand.tcp_vector, target.tcp_vector)};
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto target = load_target(a.target);
  const FitnessPair f = a.candidate.empty()
                            ? evaluate(a.coeffs.get(), target, {a.samples, IntegrationMode::PaperScript})
                            : eval_candidate_file(a.candidate, target);
  out << format_double(f.mse1) << " " << format_double(f.mse2) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modal coefficient identification for continuum-robot backbones", "modalid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MODALID_VERSION);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate a backbone and write its geometry");
  add_coeff_options(simulate, sim.coeffs);
  simulate->add_option("--length", sim.length, "backbone length L");
  simulate->add_option("--scale", sim.scale, "coordinate scale");
  simulate->add_option("--samples", sim.samples, "number of arclength samples");
  simulate->add_option("--mode", sim.mode, "paper_script | incremental");
  simulate->add_option("--n-divisions", sim.n, "division count for the exported points");
  simulate->add_option("--out", sim.out, "geometry JSON file")->required();

  TargetArgs tgt;
  auto* target = app.add_subcommand("target", "Create or import a target configuration");
  target->require_subcommand(1);
  auto* synth = target->add_subcommand("synth", "Synthesize a target from known coefficients");
  add_coeff_options(synth, tgt.coeffs);
  synth->add_option("--length", tgt.length);
  synth->add_option("--scale", tgt.scale);
  synth->add_option("--samples", tgt.samples);
  synth->add_option("--n-divisions", tgt.n);
  synth->add_option("--noise", tgt.noise, "position noise sigma, relative to L*scale");
  synth->add_option("--seed", tgt.seed);
  synth->add_option("--out", tgt.out)->required();
  auto* import = target->add_subcommand("import", "Validate an external target (CSV or JSON)");
  import->add_option("--in", tgt.in, "CSV of n+1 x,y,z rows plus a tcp row, or a target JSON")->required();
  import->add_option("--n-divisions", tgt.n);
  import->add_option("--length", tgt.length);
  import->add_option("--scale", tgt.scale);
  import->add_option("--out", tgt.out)->required();

  IdentifyArgs idf;
  auto* identify = app.add_subcommand("identify", "Run the evolutionary coefficient search");
  identify->add_option("--target", idf.target)->required();
  identify->add_option("--config", idf.config, "JSON solver configuration");
  identify->add_option("--out", idf.out, "output directory")->required();
  identify->add_option("--seed", idf.seed);
  identify->add_option("--bounds", idf.bounds, "lo,hi for every gene")->delimiter(',')->expected(2);
  identify->add_option("--generations", idf.generations);
  identify->add_option("--generation-size", idf.generation_size);
  identify->add_option("--crossover", idf.crossover);
  identify->add_option("--mutation", idf.mutation);
  identify->add_option("--samples", idf.samples);
  identify->add_option("--n-divisions", idf.n);
  identify->add_flag("--record-timestamps", idf.record_timestamps,
                     "add wall-clock times to manifest.json (breaks byte-identical reruns)");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score coefficients or a geometry file against a target");
  add_coeff_options(eval, ev.coeffs);
  eval->add_option("--target", ev.target)->required();
  eval->add_option("--candidate", ev.candidate, "geometry or target JSON instead of --cx/--cy");
  eval->add_option("--samples", ev.samples);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << MODALID_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*synth) return cmd_target_synth(tgt, out);
    if (*import) return cmd_target_import(tgt, out, err);
    if (*identify) return cmd_identify(idf, out, err);
    if (*eval) return cmd_eval(ev, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::IoError ? kExitIo : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: IoError: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace modalid::cli
