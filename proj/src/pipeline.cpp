#include "cfgprint/pipeline.hpp"

#include "cfgprint/error.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace cfgprint {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since)
      .count();
}

} // namespace

StageTimings &StageTimings::operator+=(const StageTimings &other) {
  parse_ms += other.parse_ms;
  cfg_ms += other.cfg_ms;
  paths_ms += other.paths_ms;
  fingerprint_ms += other.fingerprint_ms;
  return *this;
}

ProgramAnalysis analyze_source(std::string_view source, std::string program_id,
                               const AnalysisConfig &config) {
  ProgramAnalysis a;
  auto t = Clock::now();
  a.statements = normalize_source(source);
  a.timings.parse_ms = elapsed_ms(t);

  t = Clock::now();
  a.cfg = build_cfg(a.statements);
  a.timings.cfg_ms = elapsed_ms(t);

  t = Clock::now();
  a.enumerated = enumerate_paths(a.cfg, config.max_paths);
  a.kept = filter_paths(a.enumerated.paths, config.min_blocks);
  a.timings.paths_ms = elapsed_ms(t);

  t = Clock::now();
  a.fingerprint = fingerprint_program(a.kept, a.cfg, std::move(program_id),
                                      config.width, a.enumerated.truncated);
  a.timings.fingerprint_ms = elapsed_ms(t);
  return a;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace cfgprint
