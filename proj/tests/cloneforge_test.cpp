#include "cfgprint/cloneforge.hpp"
#include "cfgprint/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>

using namespace cfgprint;
using namespace cfgprint::forge;

namespace {

std::vector<std::uint64_t> bits_of(const ProgramFingerprint &p) {
  std::vector<std::uint64_t> out;
  for (const auto &f : p.fingerprints)
    out.push_back(f.bits);
  return out;
}

std::vector<int> sweep() {
  std::vector<int> alphas;
  for (int a = 0; a <= 10; ++a)
    alphas.push_back(a);
  return alphas;
}

} // namespace

TEST(GenerateProgram, Deterministic) {
  EXPECT_EQ(generate_program(42), generate_program(42));
  EXPECT_NE(generate_program(42), generate_program(43));
}

TEST(GenerateProgram, ParsesAndHasControl) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto stmts = normalize_source(generate_program(seed, {30, 2}));
    EXPECT_TRUE(std::any_of(stmts.begin(), stmts.end(),
                            [](const auto &s) { return s.is_control(); }))
        << seed;
  }
}

TEST(GenerateProgram, BlockCountModeInRange) {
  std::map<std::size_t, int> histogram;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto a = analyze_source(generate_program(seed), "p");
    ++histogram[a.cfg.size() - 1];
  }
  auto mode = std::max_element(
      histogram.begin(), histogram.end(),
      [](const auto &x, const auto &y) { return x.second < y.second; });
  EXPECT_GE(mode->first, 5u);
  EXPECT_LE(mode->first, 20u);
}

TEST(Mutate, Type1KeepsNormalizedText) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto src = generate_program(seed);
    const auto m = mutate(src, {CloneType::type1, 0, 0, 0, seed});
    EXPECT_EQ(m.label, CloneType::type1);
    EXPECT_NE(m.source, src);
    EXPECT_EQ(normalize_source(m.source), normalize_source(src));
  }
}

TEST(Mutate, Type2FingerprintIdentical) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto src = generate_program(seed);
    const auto m = mutate(src, {CloneType::type2, 0, 0, 0, seed});
    EXPECT_NE(m.source, src);
    EXPECT_EQ(bits_of(analyze_source(src, "a").fingerprint),
              bits_of(analyze_source(m.source, "b").fingerprint));
  }
}

TEST(Mutate, Type3RequiresEdits) {
  const auto src = generate_program(1);
  EXPECT_THROW(mutate(src, {CloneType::type3, 0, 0, 0, 1}), Error);
  EXPECT_THROW(mutate("x = 1;", {CloneType::type3, 0, 5, 0, 1}), Error);
  const auto m = mutate(src, {CloneType::type3, 1, 1, 1, 1});
  EXPECT_NO_THROW(normalize_source(m.source));
  EXPECT_NE(normalize_source(m.source), normalize_source(src));
}

// One inserted statement usually moves some path, and not by much.
TEST(Mutate, Type3SingleInsertDistance) {
  std::vector<int> nearest;
  int moved = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto src = generate_program(seed);
    const auto a = analyze_source(src, "a").fingerprint;
    const auto b = analyze_source(
        mutate(src, {CloneType::type3, 1, 0, 0, seed}).source, "b").fingerprint;
    if (!a.scoreable() || !b.scoreable())
      continue;
    bool any_nonzero = false;
    for (const auto &fb : b.fingerprints) {
      int best = 64;
      for (const auto &fa : a.fingerprints)
        best = std::min(best, hamming(fa.bits, fb.bits));
      nearest.push_back(best);
      any_nonzero |= best > 0;
    }
    moved += any_nonzero;
  }
  ASSERT_FALSE(nearest.empty());
  std::sort(nearest.begin(), nearest.end());
  EXPECT_LE(nearest[nearest.size() / 2], 5);
  EXPECT_GT(moved, 50);
}

TEST(Corpus, DeterministicAndRoundTrips) {
  CorpusSpec spec;
  spec.originals = 6;
  spec.unrelated = 4;
  spec.seed = 3;
  const Corpus a = generate_corpus(spec);
  const Corpus b = generate_corpus(spec);
  EXPECT_EQ(a.files, b.files);
  EXPECT_EQ(a.files.size(), 16u);
  ASSERT_EQ(a.manifest.size(), 6u);
  EXPECT_EQ(a.manifest[0].type, CloneType::type1);
  EXPECT_EQ(a.manifest[1].type, CloneType::type2);
  EXPECT_EQ(a.manifest[2].type, CloneType::type3);

  auto dir = std::filesystem::temp_directory_path() / "cfgprint_forge_test";
  std::filesystem::remove_all(dir);
  write_corpus(a, dir);
  const Corpus back = read_corpus(dir);
  EXPECT_EQ(back.files, a.files);
  ASSERT_EQ(back.manifest.size(), a.manifest.size());
  EXPECT_EQ(back.manifest[2].mutant, a.manifest[2].mutant);

  std::filesystem::remove(dir / a.manifest[0].mutant);
  EXPECT_THROW(read_corpus(dir), Error);
  std::filesystem::remove_all(dir);
}

TEST(Evaluate, PureType1AtAlphaZero) {
  CorpusSpec spec;
  spec.originals = 20;
  spec.unrelated = 0;
  spec.mix = {CloneType::type1};
  auto results = evaluate(generate_corpus(spec), {}, {0});
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].true_positives, 20u);
  EXPECT_DOUBLE_EQ(results[0].precision, 1.0);
}

TEST(Evaluate, MonotoneInAlpha) {
  CorpusSpec spec;
  spec.originals = 30;
  spec.unrelated = 30;
  auto results = evaluate(generate_corpus(spec), {}, sweep());
  ASSERT_EQ(results.size(), 11u);
  for (std::size_t i = 1; i < results.size(); ++i) {
    EXPECT_GE(results[i].candidates_found, results[i - 1].candidates_found);
    EXPECT_GE(results[i].false_positives, results[i - 1].false_positives);
  }
  for (const auto &r : results) {
    EXPECT_EQ(r.candidates_found, r.true_positives + r.false_positives);
    std::size_t bucketed = 0;
    for (const auto &[bin, counts] : r.by_blocks)
      bucketed += counts.candidates;
    EXPECT_EQ(bucketed, r.candidates_found);
  }
  const auto csv = results_csv(results);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,candidates,tp,fp,precision");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
}

TEST(Scaling, SingleSizeAndDeterministicCounts) {
  ScalingConfig config;
  config.min_sample_ms = 1;
  config.samples = 1;
  auto one = scaling_run({20}, config);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].scored, 20u);
  auto again = scaling_run({20}, config);
  EXPECT_EQ(again[0].candidates, one[0].candidates);
}

TEST(FitLine, ExactLine) {
  auto fit = fit_line({1, 2, 4}, {3, 5, 9});
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}
