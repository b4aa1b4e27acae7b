#pragma once

#include "cfgprint/cfg.hpp"
#include "cfgprint/fingerprint.hpp"
#include "cfgprint/paths.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cfgprint {

struct AnalysisConfig {
  unsigned width = kDefaultWidth;
  std::size_t min_blocks = kDefaultMinBlocks;
  std::size_t max_paths = kDefaultMaxPaths;
};

/// Wall-clock milliseconds spent in each stage.
struct StageTimings {
  double parse_ms = 0;
  double cfg_ms = 0;
  double paths_ms = 0;
  double fingerprint_ms = 0;

  StageTimings &operator+=(const StageTimings &other);
};

struct ProgramAnalysis {
  std::vector<NormalizedStatement> statements;
  ControlFlowGraph cfg;
  PathSet enumerated;
  std::vector<ExecutionPath> kept;
  ProgramFingerprint fingerprint;
  StageTimings timings;
};

/// Source text to program fingerprint. Throws SyntaxError on bad input and
/// Error("empty program") when there is nothing to analyze.
ProgramAnalysis analyze_source(std::string_view source, std::string program_id,
                               const AnalysisConfig &config = {});

/// Reads a whole file; throws Error if it cannot be opened.
std::string read_file(const std::string &path);

} // namespace cfgprint
