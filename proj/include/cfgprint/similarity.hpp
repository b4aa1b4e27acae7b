#pragma once

#include "cfgprint/fingerprint.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace cfgprint {

inline constexpr int kDefaultAlpha = 5;

/// All pairwise Hamming distances between two fingerprint sets, row-major
/// (row = fingerprint of A).
struct PairDistanceSet {
  std::vector<int> distances;
  std::size_t size_a = 0;
  std::size_t size_b = 0;

  int at(std::size_t i, std::size_t j) const {
    return distances[i * size_b + j];
  }
};

enum class ScoreMode { containment, resemblance };

struct SimilarityScore {
  double value = 0.0;
  ScoreMode mode = ScoreMode::containment;
  int alpha = kDefaultAlpha;
  std::size_t matched_count = 0;
  std::size_t denominator = 0;
};

enum class CloneGrade { identical, near_identical, similar, dissimilar };

/// Throws Error("unscoreable program") if either set is empty.
PairDistanceSet path_distance_set(const ProgramFingerprint &a,
                                  const ProgramFingerprint &b);

/// Fingerprints of `from` within `alpha` bits of some fingerprint of `to`.
std::size_t matched_paths(const ProgramFingerprint &from,
                          const ProgramFingerprint &to, int alpha);

/// Matched paths of the smaller program over its path count. When both
/// programs have the same number of paths the larger direction counts.
SimilarityScore similarity_containment(const ProgramFingerprint &a,
                                       const ProgramFingerprint &b,
                                       int alpha);

/// Matched paths on both sides over the total path count.
SimilarityScore similarity_resemblance(const ProgramFingerprint &a,
                                       const ProgramFingerprint &b,
                                       int alpha);

SimilarityScore similarity(const ProgramFingerprint &a,
                           const ProgramFingerprint &b, int alpha,
                           ScoreMode mode);

/// 0 identical, 1-3 near-identical, 4-7 similar, 8+ dissimilar.
CloneGrade classify(int distance);

std::string_view to_string(CloneGrade grade);
std::string_view to_string(ScoreMode mode);
/// Throws Error for anything but "containment" or "resemblance".
ScoreMode parse_mode(std::string_view text);

} // namespace cfgprint
