//===----------------------------------------------------------------------===//
//
// Synthetic MiniProc corpora with known clone pairs, and the harness that
// measures detector precision over an alpha sweep and query-time scaling.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "cfgprint/index_store.hpp"
#include "cfgprint/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cfgprint::forge {

struct SizeSpec {
  std::size_t statements = 30;
  int max_depth = 2;
};

/// Deterministic for a given seed; always contains at least one control
/// construct.
std::string generate_program(std::uint64_t seed, const SizeSpec &size = {});

enum class CloneType { type1, type2, type3 };

std::string_view to_string(CloneType type);
CloneType parse_clone_type(std::string_view text);

struct MutationSpec {
  CloneType kind = CloneType::type2;
  std::size_t inserts = 0;
  std::size_t deletes = 0;
  std::size_t reorders = 0;
  std::uint64_t seed = 0;
};

struct Mutant {
  std::string source;
  CloneType label = CloneType::type2;
};

/// type1: same tokens, new layout and comments. type2: consistent identifier
/// renaming plus fresh literal values. type3: type2 plus the requested
/// statement inserts, deletes and adjacent swaps. Throws Error if a type3
/// spec requests no edits or the edits cannot be applied (for example
/// deleting every plain statement).
Mutant mutate(const std::string &source, const MutationSpec &spec);

struct ManifestEntry {
  std::string original;
  std::string mutant;
  CloneType type = CloneType::type2;
};

struct CorpusSpec {
  std::size_t originals = 100;
  std::size_t unrelated = 100;
  std::uint64_t seed = 1;
  SizeSpec size;
  /// Mutation kinds cycle through this list, one per original.
  std::vector<CloneType> mix = {CloneType::type1, CloneType::type2,
                                CloneType::type3};
  /// Only keep programs with at least one fingerprinted path under this
  /// configuration.
  AnalysisConfig analysis;
};

struct Corpus {
  /// File name -> source.
  std::map<std::string, std::string> files;
  std::vector<ManifestEntry> manifest;
};

Corpus generate_corpus(const CorpusSpec &spec);

/// Writes every file plus `manifest.json` into `dir` (created if missing).
void write_corpus(const Corpus &corpus, const std::filesystem::path &dir);

/// Reads the `.mp` files and `manifest.json` from `dir`. Throws Error when
/// the manifest names a file that is not there.
Corpus read_corpus(const std::filesystem::path &dir);

struct BucketCounts {
  std::size_t candidates = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
};

struct EvalResult {
  int alpha = 0;
  std::size_t candidates_found = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  /// TP / (TP + FP); 1 when nothing was reported.
  double precision = 1.0;
  /// Keyed by the smaller program's real block count, binned.
  std::map<std::string, BucketCounts> by_blocks;
  /// Keyed by the smaller program's line count, binned.
  std::map<std::string, BucketCounts> by_lines;
  double wall_ms = 0.0;
};

struct EvalConfig {
  AnalysisConfig analysis;
  double threshold = 0.5;
  ScoreMode mode = ScoreMode::containment;
};

/// Fingerprints the corpus once, then for every alpha scores every unordered
/// program pair and compares the pairs at or above the threshold with the
/// manifest.
std::vector<EvalResult> evaluate(const Corpus &corpus, const EvalConfig &config,
                                 const std::vector<int> &alphas);

std::vector<EvalResult> evaluate(const std::filesystem::path &corpus_dir,
                                 const EvalConfig &config,
                                 const std::vector<int> &alphas);

/// `alpha,candidates,tp,fp,precision` with a header row.
std::string results_csv(const std::vector<EvalResult> &results);
std::string results_json(const std::vector<EvalResult> &results);

struct ScalingRow {
  std::size_t corpus_size = 0;
  /// Mean wall time of one query, milliseconds.
  double query_ms = 0.0;
  std::size_t candidates = 0;
  std::size_t scored = 0;
};

struct ScalingConfig {
  EvalConfig eval;
  std::uint64_t seed = 7;
  SizeSpec size;
  /// Each timing sample runs the query until at least this much time passed.
  double min_sample_ms = 20.0;
  int samples = 5;
};

/// For every size, builds an index of that many generated programs and times
/// one probe query against it. Sizes must be ascending.
std::vector<ScalingRow> scaling_run(const std::vector<std::size_t> &sizes,
                                    const ScalingConfig &config);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit y = slope * x + intercept.
LinearFit fit_line(const std::vector<double> &xs, const std::vector<double> &ys);

} // namespace cfgprint::forge
