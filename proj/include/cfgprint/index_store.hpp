//===----------------------------------------------------------------------===//
//
// Persistent fingerprint index. On disk an index is a JSON Lines file
// (`.cdx`): line 1 is a header carrying the configuration stamp, every
// following line is one program record with its path fingerprints as
// 16-digit lowercase hex.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "cfgprint/similarity.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cfgprint {

inline constexpr int kIndexFormatVersion = 1;
inline constexpr std::string_view kIndexFormatName = "cfgprint-index";

/// Settings that must agree for fingerprints to be comparable.
struct ConfigStamp {
  unsigned width = kDefaultWidth;
  int alpha = kDefaultAlpha;
  std::size_t min_blocks = kDefaultMinBlocks;
  std::string hash_name{kHashName};
  int normalization_version = kNormalizationVersion;

  bool operator==(const ConfigStamp &) const = default;
};

struct IndexRecord {
  ProgramFingerprint fingerprint;
  std::string source_path;
  ConfigStamp stamp;

  const std::string &program_id() const { return fingerprint.program_id; }
};

class FingerprintIndex {
public:
  explicit FingerprintIndex(ConfigStamp stamp = {}) : stamp_(std::move(stamp)) {}

  const ConfigStamp &config() const { return stamp_; }

  /// Inserts or replaces by program id. Throws IncompatibleIndex when the
  /// record was built under a different configuration.
  void add_program(IndexRecord record);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const IndexRecord *find(const std::string &program_id) const;

  /// Records ordered by program id.
  const std::map<std::string, IndexRecord> &records() const {
    return records_;
  }

private:
  ConfigStamp stamp_;
  std::map<std::string, IndexRecord> records_;
};

struct PathMatch {
  std::uint64_t query_bits = 0;
  std::uint64_t corpus_bits = 0;
  int distance = 0;
};

struct CloneCandidate {
  std::string program_id;
  SimilarityScore score;
  /// For every probe fingerprint with a corpus fingerprint within alpha, its
  /// nearest one.
  std::vector<PathMatch> evidence;
};

struct QueryOptions {
  int alpha = kDefaultAlpha;
  double threshold = 0.5;
  ScoreMode mode = ScoreMode::containment;
};

struct QueryStats {
  std::size_t scanned = 0;
  std::size_t scored = 0;
};

/// Linear scan over the index. Candidates scoring at least the threshold,
/// best first, ties by program id. The probe's own id is skipped, as are
/// unscoreable records.
std::vector<CloneCandidate> query(const FingerprintIndex &index,
                                  const ProgramFingerprint &probe,
                                  const QueryOptions &options,
                                  QueryStats *stats = nullptr);

std::vector<PathMatch> match_evidence(const ProgramFingerprint &probe,
                                      const ProgramFingerprint &other,
                                      int alpha);

struct CloneGroup {
  std::vector<std::string> members;
  /// Mean score over every member pair.
  double mean_score = 0.0;
};

/// Single-linkage groups: connected components of the graph joining two
/// programs whose score reaches the threshold. Singletons are dropped;
/// groups are ordered by their smallest member.
std::vector<CloneGroup> cluster(const FingerprintIndex &index,
                                const QueryOptions &options);

void save(const FingerprintIndex &index, std::ostream &out);
void save(const FingerprintIndex &index, const std::string &path);

/// Throws IndexFormatError (with line number) for malformed input and
/// IncompatibleIndex for a header from another format version or hash.
FingerprintIndex load(std::istream &in);
FingerprintIndex load(const std::string &path);

} // namespace cfgprint
