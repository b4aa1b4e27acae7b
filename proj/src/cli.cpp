#include "cfgprint/cli.hpp"

#include "cfgprint/cloneforge.hpp"
#include "cfgprint/error.hpp"
#include "cfgprint/index_store.hpp"
#include "cfgprint/pipeline.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace cfgprint::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  int alpha = kDefaultAlpha;
  double threshold = 0.5;
  std::size_t min_blocks = kDefaultMinBlocks;
  std::size_t max_paths = kDefaultMaxPaths;
  std::string mode = "containment";
  unsigned width = kDefaultWidth;
  bool json = false;
  unsigned jobs = 0;

  AnalysisConfig analysis() const { return {width, min_blocks, max_paths}; }
  QueryOptions query() const { return {alpha, threshold, parse_mode(mode)}; }
};

/// Raised for bad flag values; maps to exit status 1.
class ConfigError : public Error {
public:
  using Error::Error;
};

void validate(const RunConfig &c) {
  if (c.width == 0 || c.width > 64)
    throw ConfigError("--width must be in [1, 64]");
  if (c.alpha < 0 || c.alpha > static_cast<int>(c.width))
    throw ConfigError("--alpha must be in [0, " + std::to_string(c.width) +
                      "]");
  if (c.threshold < 0.0 || c.threshold > 1.0)
    throw ConfigError("--threshold must be in [0, 1]");
  if (c.min_blocks < 1)
    throw ConfigError("--min-blocks must be at least 1");
  if (c.max_paths < 1)
    throw ConfigError("--max-paths must be at least 1");
  if (c.mode != "containment" && c.mode != "resemblance")
    throw ConfigError("--mode must be containment or resemblance");
}

json config_json(const RunConfig &c) {
  return {{"alpha", c.alpha},           {"threshold", c.threshold},
          {"min_blocks", c.min_blocks}, {"max_paths", c.max_paths},
          {"mode", c.mode},             {"width", c.width}};
}

json timings_json(const StageTimings &t, std::optional<double> query_ms = {}) {
  json j = {{"parse", t.parse_ms},
            {"cfg", t.cfg_ms},
            {"paths", t.paths_ms},
            {"fingerprint", t.fingerprint_ms}};
  if (query_ms)
    j["query"] = *query_ms;
  return j;
}

json score_json(const SimilarityScore &s) {
  return {{"value", s.value},
          {"mode", to_string(s.mode)},
          {"alpha", s.alpha},
          {"matched", s.matched_count},
          {"denominator", s.denominator}};
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// Text renderings walk the JSON report so both forms carry the same data.
void render_scalar(std::ostream &os, const json &v) {
  if (v.is_string())
    os << v.get<std::string>();
  else if (v.is_number_float())
    os << fixed(v.get<double>());
  else
    os << v.dump();
}

void render_object_inline(std::ostream &os, const json &obj) {
  bool first = true;
  for (const auto &[k, v] : obj.items()) {
    os << (first ? "" : "  ") << k << '=';
    render_scalar(os, v);
    first = false;
  }
}

std::string candidate_grade(const CloneCandidate &c) {
  if (c.evidence.empty())
    return std::string(to_string(CloneGrade::dissimilar));
  int worst = 0;
  for (const auto &e : c.evidence)
    worst = std::max(worst, e.distance);
  return std::string(to_string(classify(worst)));
}

unsigned resolve_jobs(unsigned requested) {
  if (requested > 0)
    return requested;
  if (const char *env = std::getenv("CFGPRINT_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    } catch (const std::exception &) {
    }
  }
  return 1;
}

double ms_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t)
      .count();
}

ProgramAnalysis analyze_file(const std::string &path, const std::string &id,
                             const AnalysisConfig &config) {
  return analyze_source(read_file(path), id, config);
}

//===----------------------------------------------------------------------===//
// index
//===----------------------------------------------------------------------===//

int cmd_index(const std::string &dir, const std::string &out_path,
              const RunConfig &config, std::ostream &out, std::ostream &err) {
  if (!fs::is_directory(dir))
    throw IoError("directory '" + dir + "' not found");

  std::vector<fs::path> files;
  for (const auto &entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mp")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  struct Outcome {
    std::optional<ProgramAnalysis> analysis;
    std::string error;
  };
  std::vector<Outcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) {
      const std::string id =
          fs::relative(files[i], dir).generic_string();
      try {
        outcomes[i].analysis =
            analyze_file(files[i].string(), id, config.analysis());
      } catch (const Error &e) {
        outcomes[i].error = e.what();
      }
    }
  };
  const unsigned jobs =
      std::min<unsigned>(resolve_jobs(config.jobs),
                         static_cast<unsigned>(std::max<std::size_t>(1, files.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();

  ConfigStamp stamp;
  stamp.width = config.width;
  stamp.alpha = config.alpha;
  stamp.min_blocks = config.min_blocks;
  FingerprintIndex index(stamp);

  json diagnostics = json::array();
  std::size_t skipped = 0, unscoreable = 0, truncated = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string id = fs::relative(files[i], dir).generic_string();
    if (!outcomes[i].analysis) {
      ++skipped;
      err << "skipped " << id << ": " << outcomes[i].error << '\n';
      diagnostics.push_back({{"file", id}, {"error", outcomes[i].error}});
      continue;
    }
    auto &a = *outcomes[i].analysis;
    unscoreable += a.fingerprint.scoreable() ? 0 : 1;
    truncated += a.fingerprint.truncated ? 1 : 0;
    IndexRecord record;
    record.fingerprint = std::move(a.fingerprint);
    record.source_path = files[i].generic_string();
    record.stamp = stamp;
    index.add_program(std::move(record));
  }
  save(index, out_path);

  json summary = {{"output", out_path},
                  {"indexed", index.size()},
                  {"skipped", skipped},
                  {"unscoreable", unscoreable},
                  {"truncated", truncated},
                  {"diagnostics", diagnostics}};
  if (config.json) {
    out << summary.dump(2) << '\n';
  } else {
    out << "indexed " << index.size() << " programs into " << out_path
        << " (skipped " << skipped << ", unscoreable " << unscoreable
        << ", truncated " << truncated << ")\n";
  }
  return kOk;
}

//===----------------------------------------------------------------------===//
// query
//===----------------------------------------------------------------------===//

/// Index settings win unless the user asked for something different, which
/// is an incompatibility.
RunConfig reconcile(RunConfig config, const ConfigStamp &stamp,
                    bool min_blocks_given) {
  if (min_blocks_given && config.min_blocks != stamp.min_blocks)
    throw IncompatibleIndex(
        "incompatible index configuration: index built with min_blocks " +
        std::to_string(stamp.min_blocks) + ", requested " +
        std::to_string(config.min_blocks));
  config.min_blocks = stamp.min_blocks;
  config.width = stamp.width;
  validate(config);
  return config;
}

json query_report(const std::string &file, const ProgramAnalysis &probe,
                  const std::vector<CloneCandidate> &candidates,
                  const RunConfig &config, double query_ms) {
  json cands = json::array();
  for (const auto &c : candidates) {
    json evidence = json::array();
    for (const auto &e : c.evidence)
      evidence.push_back({{"query", to_hex(e.query_bits)},
                          {"corpus", to_hex(e.corpus_bits)},
                          {"distance", e.distance},
                          {"grade", to_string(classify(e.distance))}});
    cands.push_back({{"id", c.program_id},
                     {"score", score_json(c.score)},
                     {"grade", candidate_grade(c)},
                     {"evidence", evidence}});
  }
  json warnings = json::array();
  if (probe.fingerprint.truncated)
    warnings.push_back("path enumeration truncated at " +
                       std::to_string(config.max_paths) + " paths");
  return {{"query", file},
          {"config", config_json(config)},
          {"probe",
           {{"paths", probe.fingerprint.path_count},
            {"fingerprints", probe.fingerprint.fingerprints.size()}}},
          {"candidates", cands},
          {"timings_ms", timings_json(probe.timings, query_ms)},
          {"warnings", warnings}};
}

void render_query_text(const json &r, std::ostream &os) {
  os << "query: " << r["query"].get<std::string>() << '\n';
  os << "config: ";
  render_object_inline(os, r["config"]);
  os << "\nprobe: ";
  render_object_inline(os, r["probe"]);
  os << "\ncandidates: " << r["candidates"].size() << '\n';
  std::size_t rank = 1;
  for (const auto &c : r["candidates"]) {
    const auto &s = c["score"];
    os << "  " << std::setw(3) << rank++ << "  " << std::left
       << std::setw(32) << c["id"].get<std::string>() << std::right << "  "
       << fixed(s["value"].get<double>()) << "  " << s["matched"].dump() << '/'
       << s["denominator"].dump() << "  " << s["mode"].get<std::string>()
       << "  alpha=" << s["alpha"].dump() << "  "
       << c["grade"].get<std::string>() << '\n';
    for (const auto &e : c["evidence"])
      os << "         " << e["query"].get<std::string>() << " ~ "
         << e["corpus"].get<std::string>() << "  d=" << std::setw(2)
         << e["distance"].dump() << "  " << e["grade"].get<std::string>()
         << '\n';
  }
  os << "timings_ms: ";
  render_object_inline(os, r["timings_ms"]);
  os << '\n';
  for (const auto &w : r["warnings"])
    os << "warning: " << w.get<std::string>() << '\n';
}

int cmd_query(const std::string &file, const std::string &index_path,
              RunConfig config, bool min_blocks_given, std::ostream &out) {
  validate(config);
  const FingerprintIndex index = load(index_path);
  config = reconcile(config, index.config(), min_blocks_given);

  const ProgramAnalysis probe = analyze_file(file, file, config.analysis());
  json report;
  if (!probe.fingerprint.scoreable()) {
    report = query_report(file, probe, {}, config, 0.0);
    report["warnings"].push_back("unscoreable program: no path has at least " +
                                 std::to_string(config.min_blocks) +
                                 " blocks");
  } else {
    const auto t = std::chrono::steady_clock::now();
    const auto candidates = query(index, probe.fingerprint, config.query());
    report = query_report(file, probe, candidates, config, ms_since(t));
  }
  if (config.json)
    out << report.dump(2) << '\n';
  else
    render_query_text(report, out);
  return kOk;
}

//===----------------------------------------------------------------------===//
// compare
//===----------------------------------------------------------------------===//

json path_grades(const ProgramFingerprint &from, const ProgramFingerprint &to) {
  json rows = json::array();
  for (const auto &x : from.fingerprints) {
    int best = static_cast<int>(from.width);
    std::uint64_t nearest = 0;
    for (const auto &y : to.fingerprints) {
      const int d = hamming(x.bits, y.bits);
      if (d < best) {
        best = d;
        nearest = y.bits;
      }
    }
    rows.push_back({{"fingerprint", to_hex(x.bits)},
                    {"nearest", to_hex(nearest)},
                    {"distance", best},
                    {"grade", to_string(classify(best))}});
  }
  return rows;
}

json program_json(const ProgramAnalysis &a) {
  json fps = json::array();
  for (const auto &fp : a.fingerprint.fingerprints)
    fps.push_back(to_hex(fp.bits));
  return {{"id", a.fingerprint.program_id},
          {"blocks", a.cfg.size() - 1},
          {"paths", a.fingerprint.path_count},
          {"truncated", a.fingerprint.truncated},
          {"fingerprints", fps}};
}

int cmd_compare(const std::string &file_a, const std::string &file_b,
                const RunConfig &config, std::ostream &out) {
  validate(config);
  const ProgramAnalysis a = analyze_file(file_a, file_a, config.analysis());
  const ProgramAnalysis b = analyze_file(file_b, file_b, config.analysis());
  StageTimings timings = a.timings;
  timings += b.timings;

  json report = {{"a", program_json(a)},
                 {"b", program_json(b)},
                 {"config", config_json(config)},
                 {"timings_ms", timings_json(timings)}};
  const bool scoreable =
      a.fingerprint.scoreable() && b.fingerprint.scoreable();
  report["verdict"] = scoreable ? "scored" : "unscoreable";
  if (scoreable) {
    report["containment"] = score_json(
        similarity_containment(a.fingerprint, b.fingerprint, config.alpha));
    report["resemblance"] = score_json(
        similarity_resemblance(a.fingerprint, b.fingerprint, config.alpha));
    const PairDistanceSet d = path_distance_set(a.fingerprint, b.fingerprint);
    json matrix = json::array();
    for (std::size_t i = 0; i < d.size_a; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < d.size_b; ++j)
        row.push_back(d.at(i, j));
      matrix.push_back(row);
    }
    report["distances"] = matrix;
    report["a_paths"] = path_grades(a.fingerprint, b.fingerprint);
    report["b_paths"] = path_grades(b.fingerprint, a.fingerprint);
  }

  if (config.json) {
    out << report.dump(2) << '\n';
    return kOk;
  }
  for (const char *side : {"a", "b"}) {
    const auto &p = report[side];
    out << side << ": " << p["id"].get<std::string>()
        << "  blocks=" << p["blocks"].dump() << "  paths=" << p["paths"].dump()
        << "  fingerprints=" << p["fingerprints"].size()
        << "  truncated=" << p["truncated"].dump() << '\n';
  }
  out << "config: ";
  render_object_inline(out, report["config"]);
  out << "\nverdict: " << report["verdict"].get<std::string>() << '\n';
  if (scoreable) {
    for (const char *mode : {"containment", "resemblance"}) {
      const auto &s = report[mode];
      out << mode << ": " << fixed(s["value"].get<double>()) << "  ("
          << s["matched"].dump() << '/' << s["denominator"].dump()
          << ", alpha=" << s["alpha"].dump() << ")\n";
    }
    out << "distances (rows: a, columns: b):\n";
    for (const auto &row : report["distances"]) {
      out << " ";
      for (const auto &v : row)
        out << ' ' << std::setw(2) << v.dump();
      out << '\n';
    }
    for (const char *side : {"a_paths", "b_paths"}) {
      out << side << ":\n";
      for (const auto &p : report[side])
        out << "  " << p["fingerprint"].get<std::string>() << " ~ "
            << p["nearest"].get<std::string>() << "  d=" << std::setw(2)
            << p["distance"].dump() << "  " << p["grade"].get<std::string>()
            << '\n';
    }
  }
  out << "timings_ms: ";
  render_object_inline(out, report["timings_ms"]);
  out << '\n';
  return kOk;
}

//===----------------------------------------------------------------------===//
// dot, cluster
//===----------------------------------------------------------------------===//

int cmd_dot(const std::string &file, const std::string &out_path,
            std::ostream &out) {
  const auto statements = normalize_source(read_file(file));
  const std::string dot = export_dot(build_cfg(statements));
  if (out_path.empty()) {
    out << dot;
    return kOk;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw IoError("cannot write '" + out_path + "'");
  f << dot;
  if (!f)
    throw IoError("write failed for '" + out_path + "'");
  return kOk;
}

int cmd_cluster(const std::string &index_path, RunConfig config,
                std::ostream &out) {
  validate(config);
  const FingerprintIndex index = load(index_path);
  config = reconcile(config, index.config(), false);
  const auto groups = cluster(index, config.query());

  json gs = json::array();
  for (const auto &g : groups)
    gs.push_back({{"members", g.members}, {"mean_score", g.mean_score}});
  json unscoreable = json::array();
  for (const auto &[id, r] : index.records())
    if (!r.fingerprint.scoreable())
      unscoreable.push_back(id);
  json report = {{"index", index_path},
                 {"config", config_json(config)},
                 {"programs", index.size()},
                 {"groups", gs},
                 {"unscoreable", unscoreable}};
  if (config.json) {
    out << report.dump(2) << '\n';
    return kOk;
  }
  out << "index: " << index_path << "  programs=" << index.size() << '\n';
  out << "config: ";
  render_object_inline(out, report["config"]);
  out << "\ngroups: " << groups.size() << '\n';
  for (std::size_t i = 0; i < groups.size(); ++i) {
    out << "  group " << i + 1 << "  size=" << groups[i].members.size()
        << "  mean_score=" << fixed(groups[i].mean_score) << '\n';
    for (const auto &m : groups[i].members)
      out << "    " << m << '\n';
  }
  if (!unscoreable.empty())
    out << "unscoreable: " << unscoreable.size() << '\n';
  return kOk;
}

//===----------------------------------------------------------------------===//
// generate, evaluate
//===----------------------------------------------------------------------===//

int cmd_generate(const std::string &dir, const forge::CorpusSpec &spec,
                 std::ostream &out) {
  const forge::Corpus corpus = forge::generate_corpus(spec);
  forge::write_corpus(corpus, dir);
  out << "wrote " << corpus.files.size() << " programs and "
      << corpus.manifest.size() << " labeled pairs to " << dir << '\n';
  return kOk;
}

int cmd_evaluate(const std::string &dir, const RunConfig &config,
                 int alpha_max, const std::string &csv_path,
                 std::ostream &out) {
  validate(config);
  if (alpha_max < 0 || alpha_max > static_cast<int>(config.width))
    throw ConfigError("--alpha-max out of range");
  std::vector<int> alphas;
  for (int a = 0; a <= alpha_max; ++a)
    alphas.push_back(a);
  forge::EvalConfig eval{config.analysis(), config.threshold,
                         parse_mode(config.mode)};
  const auto results = forge::evaluate(fs::path(dir), eval, alphas);
  if (!csv_path.empty()) {
    std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
    if (!f)
      throw IoError("cannot write '" + csv_path + "'");
    f << forge::results_csv(results);
  }
  out << (config.json ? forge::results_json(results)
                      : forge::results_csv(results));
  return kOk;
}

//===----------------------------------------------------------------------===//
// Command line
//===----------------------------------------------------------------------===//

void add_scoring_flags(CLI::App &cmd, RunConfig &c, bool with_alpha = true) {
  if (with_alpha)
    cmd.add_option("--alpha", c.alpha, "Max Hamming distance for a path match")
        ->capture_default_str();
  cmd.add_option("--threshold", c.threshold, "Min similarity for a clone")
      ->capture_default_str();
  cmd.add_option("--mode", c.mode, "containment | resemblance")
      ->capture_default_str();
}

void add_analysis_flags(CLI::App &cmd, RunConfig &c) {
  cmd.add_option("--max-paths", c.max_paths, "Path enumeration cap per CFG")
      ->capture_default_str();
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Control-flow fingerprint clone detector for MiniProc"};
  app.name("cfgprint");
  app.require_subcommand(1);

  RunConfig config;
  std::string dir, file, file_b, index_path, out_path, csv_path;
  int alpha_max = 10;
  forge::CorpusSpec corpus_spec;

  auto *index_cmd = app.add_subcommand("index", "Fingerprint every .mp file");
  index_cmd->add_option("dir", dir, "Source directory")->required();
  index_cmd->add_option("-o,--out", out_path, "Index file (.cdx)")->required();
  index_cmd->add_option("--width", config.width, "Fingerprint bits")
      ->capture_default_str();
  index_cmd->add_option("--jobs", config.jobs,
                        "Worker threads (default: $CFGPRINT_JOBS or 1)");

  auto *query_cmd = app.add_subcommand("query", "Find clones of one file");
  query_cmd->add_option("file", file, "Probe source file")->required();
  query_cmd->add_option("--index", index_path, "Index file")->required();

  auto *compare_cmd = app.add_subcommand("compare", "Score two files");
  compare_cmd->add_option("file_a", file, "First file")->required();
  compare_cmd->add_option("file_b", file_b, "Second file")->required();

  auto *dot_cmd = app.add_subcommand("dot", "Export the CFG as DOT");
  dot_cmd->add_option("file", file, "Source file")->required();
  dot_cmd->add_option("-o,--out", out_path, "Output path (default stdout)");

  auto *cluster_cmd = app.add_subcommand("cluster", "Group an index");
  cluster_cmd->add_option("--index", index_path, "Index file")->required();

  auto *generate_cmd =
      app.add_subcommand("generate", "Write a labeled synthetic corpus");
  generate_cmd->add_option("dir", dir, "Output directory")->required();
  generate_cmd->add_option("--originals", corpus_spec.originals)
      ->capture_default_str();
  generate_cmd->add_option("--unrelated", corpus_spec.unrelated)
      ->capture_default_str();
  generate_cmd->add_option("--seed", corpus_spec.seed)->capture_default_str();
  generate_cmd->add_option("--statements", corpus_spec.size.statements)
      ->capture_default_str();

  auto *evaluate_cmd =
      app.add_subcommand("evaluate", "Precision over an alpha sweep");
  evaluate_cmd->add_option("dir", dir, "Corpus directory")->required();
  evaluate_cmd->add_option("--alpha-max", alpha_max, "Sweep 0..alpha-max")
      ->capture_default_str();
  evaluate_cmd->add_option("--csv", csv_path, "Also write CSV here");

  CLI::Option *min_blocks_opt = nullptr;
  for (auto *cmd : {index_cmd, query_cmd, compare_cmd, evaluate_cmd}) {
    auto *opt = cmd->add_option("--min-blocks", config.min_blocks,
                                "Drop paths with fewer real blocks")
                    ->capture_default_str();
    if (cmd == query_cmd)
      min_blocks_opt = opt;
    add_analysis_flags(*cmd, config);
  }
  for (auto *cmd : {index_cmd, query_cmd, compare_cmd, cluster_cmd,
                    evaluate_cmd})
    cmd->add_flag("--json", config.json, "Machine-readable output");
  for (auto *cmd : {query_cmd, compare_cmd, cluster_cmd})
    add_scoring_flags(*cmd, config);
  add_scoring_flags(*evaluate_cmd, config, false);
  index_cmd->add_option("--alpha", config.alpha, "Default alpha recorded in the index")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (index_cmd->parsed()) {
      validate(config);
      return cmd_index(dir, out_path, config, out, err);
    }
    if (query_cmd->parsed())
      return cmd_query(file, index_path, config,
                       min_blocks_opt->count() > 0, out);
    if (compare_cmd->parsed())
      return cmd_compare(file, file_b, config, out);
    if (dot_cmd->parsed())
      return cmd_dot(file, out_path, out);
    if (cluster_cmd->parsed())
      return cmd_cluster(index_path, config, out);
    if (generate_cmd->parsed())
      return cmd_generate(dir, corpus_spec, out);
    if (evaluate_cmd->parsed())
      return cmd_evaluate(dir, config, alpha_max, csv_path, out);
  } catch (const IoError &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const fs::filesystem_error &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

} // namespace cfgprint::cli
