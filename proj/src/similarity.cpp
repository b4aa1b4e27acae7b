#include "cfgprint/similarity.hpp"

#include "cfgprint/error.hpp"

#include <algorithm>

namespace cfgprint {

namespace {

void check_scoreable(const ProgramFingerprint &a, const ProgramFingerprint &b) {
  if (!a.scoreable() || !b.scoreable())
    throw Error("unscoreable program '" +
                (a.scoreable() ? b.program_id : a.program_id) + "'");
  if (a.width != b.width)
    throw Error("fingerprint widths differ (" + std::to_string(a.width) +
                " vs " + std::to_string(b.width) + ")");
}

void check_alpha(const ProgramFingerprint &a, int alpha) {
  if (alpha < 0 || alpha > static_cast<int>(a.width))
    throw Error("alpha " + std::to_string(alpha) + " outside [0, " +
                std::to_string(a.width) + "]");
}

} // namespace

PairDistanceSet path_distance_set(const ProgramFingerprint &a,
                                  const ProgramFingerprint &b) {
  check_scoreable(a, b);
  PairDistanceSet set;
  set.size_a = a.fingerprints.size();
  set.size_b = b.fingerprints.size();
  set.distances.reserve(set.size_a * set.size_b);
  for (const auto &x : a.fingerprints)
    for (const auto &y : b.fingerprints)
      set.distances.push_back(hamming(x.bits, y.bits));
  return set;
}

std::size_t matched_paths(const ProgramFingerprint &from,
                          const ProgramFingerprint &to, int alpha) {
  std::size_t matched = 0;
  for (const auto &x : from.fingerprints) {
    const bool hit =
        std::any_of(to.fingerprints.begin(), to.fingerprints.end(),
                    [&](const auto &y) { return hamming(x.bits, y.bits) <= alpha; });
    matched += hit ? 1 : 0;
  }
  return matched;
}

SimilarityScore similarity_containment(const ProgramFingerprint &a,
                                       const ProgramFingerprint &b,
                                       int alpha) {
  check_scoreable(a, b);
  check_alpha(a, alpha);
  const std::size_t na = a.fingerprints.size();
  const std::size_t nb = b.fingerprints.size();

  SimilarityScore score;
  score.mode = ScoreMode::containment;
  score.alpha = alpha;
  score.denominator = std::min(na, nb);
  if (na < nb)
    score.matched_count = matched_paths(a, b, alpha);
  else if (nb < na)
    score.matched_count = matched_paths(b, a, alpha);
  else
    score.matched_count =
        std::max(matched_paths(a, b, alpha), matched_paths(b, a, alpha));
  score.value = static_cast<double>(score.matched_count) /
                static_cast<double>(score.denominator);
  return score;
}

SimilarityScore similarity_resemblance(const ProgramFingerprint &a,
                                       const ProgramFingerprint &b,
                                       int alpha) {
  check_scoreable(a, b);
  check_alpha(a, alpha);
  SimilarityScore score;
  score.mode = ScoreMode::resemblance;
  score.alpha = alpha;
  score.matched_count = matched_paths(a, b, alpha) + matched_paths(b, a, alpha);
  score.denominator = a.fingerprints.size() + b.fingerprints.size();
  score.value = static_cast<double>(score.matched_count) /
                static_cast<double>(score.denominator);
  return score;
}

SimilarityScore similarity(const ProgramFingerprint &a,
                           const ProgramFingerprint &b, int alpha,
                           ScoreMode mode) {
  return mode == ScoreMode::containment ? similarity_containment(a, b, alpha)
                                        : similarity_resemblance(a, b, alpha);
}

CloneGrade classify(int distance) {
  if (distance <= 0)
    return CloneGrade::identical;
  if (distance <= 3)
    return CloneGrade::near_identical;
  if (distance <= 7)
    return CloneGrade::similar;
  return CloneGrade::dissimilar;
}

std::string_view to_string(CloneGrade grade) {
  switch (grade) {
  case CloneGrade::identical:
    return "identical";
  case CloneGrade::near_identical:
    return "near-identical";
  case CloneGrade::similar:
    return "similar";
  case CloneGrade::dissimilar:
    return "dissimilar";
  }
  return "dissimilar";
}

std::string_view to_string(ScoreMode mode) {
  return mode == ScoreMode::containment ? "containment" : "resemblance";
}

ScoreMode parse_mode(std::string_view text) {
  if (text == "containment")
    return ScoreMode::containment;
  if (text == "resemblance")
    return ScoreMode::resemblance;
  throw Error("unknown score mode '" + std::string(text) + "'");
}

} // namespace cfgprint
