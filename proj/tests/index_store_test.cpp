#include "cfgprint/error.hpp"
#include "cfgprint/index_store.hpp"

#include "support/oracles.hpp"
#include "support/random_programs.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

using namespace cfgprint;

namespace {

IndexRecord record(const std::string &id, const std::vector<std::uint64_t> &bits) {
  IndexRecord r;
  r.fingerprint = testgen::as_program(bits, id);
  r.source_path = id + ".mp";
  return r;
}

std::string saved(const FingerprintIndex &index) {
  std::ostringstream os;
  save(index, os);
  return os.str();
}

FingerprintIndex loaded(const std::string &text) {
  std::istringstream is(text);
  return load(is);
}

std::vector<std::pair<std::string, double>>
ranking(const std::vector<CloneCandidate> &c) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto &x : c)
    out.emplace_back(x.program_id, x.score.value);
  return out;
}

FingerprintIndex random_index(testgen::Rng &rng, std::size_t n,
                              const std::vector<std::uint64_t> &centers) {
  FingerprintIndex index;
  for (std::size_t i = 0; i < n; ++i)
    index.add_program(record("p" + std::to_string(100 + i),
                             testgen::random_bits_set(rng, 6, centers)));
  return index;
}

} // namespace

TEST(AddProgram, InsertReplaceMismatch) {
  FingerprintIndex index;
  index.add_program(record("a", {1, 2}));
  EXPECT_EQ(index.size(), 1u);
  index.add_program(record("a", {3}));
  ASSERT_EQ(index.size(), 1u);
  EXPECT_EQ(index.find("a")->fingerprint.fingerprints.size(), 1u);
  EXPECT_EQ(index.find("a")->fingerprint.fingerprints[0].bits, 3u);

  auto narrow = record("b", {1});
  narrow.stamp.width = 32;
  narrow.fingerprint.width = 32;
  EXPECT_THROW(index.add_program(narrow), IncompatibleIndex);
  auto other_hash = record("c", {1});
  other_hash.stamp.hash_name = "murmur64";
  EXPECT_THROW(index.add_program(other_hash), IncompatibleIndex);
  EXPECT_EQ(index.size(), 1u);
}

TEST(Query, IdenticalProgramScoresOne) {
  FingerprintIndex index;
  index.add_program(record("a", {0x10, 0x20}));
  index.add_program(record("b", {~0ULL}));
  auto probe = testgen::as_program({0x10, 0x20}, "probe");
  QueryOptions opts;
  opts.threshold = 1.0;
  auto result = query(index, probe, opts);
  ASSERT_EQ(result.size(), 1u);
  EXPECT_EQ(result[0].program_id, "a");
  EXPECT_EQ(result[0].score.value, 1.0);
  ASSERT_EQ(result[0].evidence.size(), 2u);
  for (const auto &m : result[0].evidence)
    EXPECT_EQ(m.distance, 0);
}

TEST(Query, ThresholdZeroReturnsAllScoreable) {
  FingerprintIndex index;
  index.add_program(record("a", {1}));
  index.add_program(record("b", {~0ULL}));
  index.add_program(record("empty", {}));
  index.add_program(record("probe", {1}));
  QueryOptions opts;
  opts.threshold = 0.0;
  QueryStats stats;
  auto result = query(index, testgen::as_program({1}, "probe"), opts, &stats);
  EXPECT_EQ(ranking(result),
            (std::vector<std::pair<std::string, double>>{{"a", 1.0},
                                                          {"b", 0.0}}));
  EXPECT_EQ(stats.scanned, 4u);
  EXPECT_EQ(stats.scored, 2u);
}

TEST(Query, EmptyIndex) {
  FingerprintIndex index;
  EXPECT_TRUE(query(index, testgen::as_program({1}), {}).empty());
}

TEST(Query, ScansEveryRecordOnce) {
  testgen::Rng rng(3);
  for (std::size_t n : {1u, 10u, 57u}) {
    auto index = random_index(rng, n, {rng(), rng()});
    QueryStats stats;
    query(index, testgen::as_program({rng()}, "probe"), {}, &stats);
    EXPECT_EQ(stats.scanned, n);
    EXPECT_EQ(stats.scored, n);
  }
}

TEST(Query, OrderingAndDeterminism) {
  testgen::Rng rng(11);
  const std::vector<std::uint64_t> centers = {rng(), rng()};
  auto index = random_index(rng, 40, centers);
  auto probe = testgen::as_program(testgen::random_bits_set(rng, 6, centers), "q");
  QueryOptions opts;
  opts.threshold = 0.0;
  auto first = query(index, probe, opts);
  EXPECT_EQ(ranking(first), ranking(query(index, probe, opts)));
  for (std::size_t i = 1; i < first.size(); ++i) {
    const auto &x = first[i - 1], &y = first[i];
    EXPECT_TRUE(x.score.value > y.score.value ||
                (x.score.value == y.score.value && x.program_id < y.program_id));
  }
  for (const auto &c : first)
    for (const auto &m : c.evidence)
      EXPECT_LE(m.distance, opts.alpha);
}

TEST(Cluster, Examples) {
  QueryOptions opts;
  FingerprintIndex trio;
  for (const char *id : {"x", "y", "z"})
    trio.add_program(record(id, {0x55}));
  auto groups = cluster(trio, opts);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].members, (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_DOUBLE_EQ(groups[0].mean_score, 1.0);

  FingerprintIndex apart;
  apart.add_program(record("a", {0}));
  apart.add_program(record("b", {0xffff}));
  apart.add_program(record("c", {0xffff0000}));
  EXPECT_TRUE(cluster(apart, opts).empty());

  // a~b and b~c within alpha 5, but a and c are 8 bits apart.
  FingerprintIndex chain;
  chain.add_program(record("a", {0x00}));
  chain.add_program(record("b", {0x0f}));
  chain.add_program(record("c", {0xff}));
  opts.threshold = 1.0;
  EXPECT_EQ(similarity_containment(chain.find("a")->fingerprint,
                                   chain.find("c")->fingerprint, 5)
                .value,
            0.0);
  groups = cluster(chain, opts);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].members, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Cluster, MatchesBruteForceComponents) {
  testgen::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    std::vector<std::uint64_t> centers;
    for (int c = 0; c < 6; ++c)
      centers.push_back(rng());
    auto index = random_index(rng, n, centers);
    QueryOptions opts;
    opts.threshold = 0.5;
    std::vector<std::string> ids;
    for (const auto &[id, r] : index.records())
      ids.push_back(id);
    std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        linked[i][j] =
            i != j && similarity(index.find(ids[i])->fingerprint,
                                 index.find(ids[j])->fingerprint, opts.alpha,
                                 opts.mode)
                              .value >= opts.threshold;
    std::set<std::vector<std::string>> expected;
    for (const auto &comp : oracle::components(n, linked)) {
      if (comp.size() < 2)
        continue;
      std::vector<std::string> names;
      for (auto i : comp)
        names.push_back(ids[i]);
      std::sort(names.begin(), names.end());
      expected.insert(names);
    }
    std::set<std::vector<std::string>> got;
    std::string previous;
    for (const auto &g : cluster(index, opts)) {
      EXPECT_GT(g.members.front(), previous);
      previous = g.members.front();
      got.insert(g.members);
    }
    EXPECT_EQ(got, expected);
  }
}

TEST(Persistence, RoundTrip) {
  testgen::Rng rng(5);
  const std::vector<std::uint64_t> centers = {rng(), rng(), rng()};
  auto index = random_index(rng, 30, centers);
  auto truncated = record("trunc", {rng()});
  truncated.fingerprint.truncated = true;
  truncated.fingerprint.path_count = 10000;
  index.add_program(truncated);
  index.add_program(record("zero", {}));

  const std::string text = saved(index);
  auto back = loaded(text);
  EXPECT_EQ(back.size(), index.size());
  EXPECT_EQ(back.config(), index.config());
  EXPECT_EQ(saved(back), text);
  EXPECT_TRUE(back.find("trunc")->fingerprint.truncated);
  EXPECT_EQ(back.find("trunc")->fingerprint.path_count, 10000u);
  for (const auto &[id, r] : index.records()) {
    const auto &f = back.find(id)->fingerprint.fingerprints;
    ASSERT_EQ(f.size(), r.fingerprint.fingerprints.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      EXPECT_EQ(f[i].bits, r.fingerprint.fingerprints[i].bits);
  }
  QueryOptions opts;
  opts.threshold = 0.0;
  for (int i = 0; i < 10; ++i) {
    auto probe = testgen::as_program(testgen::random_bits_set(rng, 6, centers), "q");
    EXPECT_EQ(ranking(query(index, probe, opts)),
              ranking(query(back, probe, opts)));
  }
}

TEST(Persistence, FileRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "cfgprint_index_test";
  std::filesystem::create_directories(dir);
  FingerprintIndex index;
  index.add_program(record("a", {1, 2, 3}));
  const std::string path = (dir / "x.cdx").string();
  save(index, path);
  EXPECT_EQ(saved(load(path)), saved(index));
  EXPECT_THROW(load((dir / "missing.cdx").string()), IoError);
  std::filesystem::remove_all(dir);
}

TEST(Persistence, TruncatedFile) {
  FingerprintIndex index;
  index.add_program(record("a", {1, 2, 3}));
  index.add_program(record("b", {4}));
  const std::string text = saved(index);
  for (std::size_t cut : {text.size() - 1, text.size() - 10, text.size() / 2})
    EXPECT_THROW(loaded(text.substr(0, cut)), IndexFormatError) << cut;
  EXPECT_THROW(loaded(""), IndexFormatError);
}

TEST(Persistence, ErrorsCarryLineNumbers) {
  FingerprintIndex index;
  index.add_program(record("a", {1}));
  std::string text = saved(index);
  text += "{\"id\": 5}\n";
  try {
    loaded(text);
    FAIL();
  } catch (const IndexFormatError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Persistence, HeaderMismatch) {
  FingerprintIndex index;
  index.add_program(record("a", {1}));
  const std::string text = saved(index);
  auto swap = [&](const std::string &from, const std::string &to) {
    std::string t = text;
    auto pos = t.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return t.replace(pos, from.size(), to);
  };
  EXPECT_THROW(loaded(swap("\"fnv1a64\"", "\"murmur64\"")), IncompatibleIndex);
  EXPECT_THROW(loaded(swap("\"version\":1", "\"version\":2")), IncompatibleIndex);
  EXPECT_THROW(loaded(swap("\"cfgprint-index\"", "\"other\"")), Error);
}
