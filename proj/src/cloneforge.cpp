#include "cfgprint/cloneforge.hpp"

#include "cfgprint/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace cfgprint::forge {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index) {
  return splitmix64(splitmix64(base ^ (stream * 0x632be59bd9b4e019ULL)) +
                    index);
}

// Draws use plain modulo on the engine output so that sequences are the same
// on every standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n);
  }
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + below(hi - lo + 1);
  }
  bool chance(unsigned percent) { return below(100) < percent; }
  std::uint64_t next() { return engine_(); }

  template <typename T> const T &pick(const std::vector<T> &items) {
    return items[below(items.size())];
  }

private:
  std::mt19937_64 engine_;
};

//===----------------------------------------------------------------------===//
// Program generation
//===----------------------------------------------------------------------===//

class ProgramGenerator {
public:
  ProgramGenerator(std::uint64_t seed, const SizeSpec &size)
      : rng_(seed), size_(size) {
    const std::size_t n_locals = rng_.between(2, 4);
    const std::size_t n_globals = rng_.between(2, 4);
    for (std::size_t i = 0; i < n_locals; ++i)
      locals_.push_back("t" + std::to_string(i));
    for (std::size_t i = 0; i < n_globals; ++i)
      globals_.push_back("g" + std::to_string(i));
    for (std::size_t i = 0; i < 3; ++i)
      funcs_.push_back("proc" + std::to_string(i));
    vars_ = locals_;
    vars_.insert(vars_.end(), globals_.begin(), globals_.end());
  }

  std::string run() {
    for (const auto &name : locals_) {
      if (rng_.chance(50))
        line(0, "declare " + name + " = " + expression(1) + ";");
      else
        line(0, "declare " + name + ";");
      ++used_;
    }
    // One construct is always placed somewhere in the first half.
    const std::size_t remaining =
        size_.statements > used_ ? size_.statements - used_ : 1;
    forced_at_ = used_ + rng_.below(std::max<std::size_t>(1, remaining / 2));
    while (used_ < size_.statements || constructs_ == 0)
      statement(0);
    return out_.str();
  }

private:
  Rng rng_;
  SizeSpec size_;
  std::vector<std::string> locals_, globals_, funcs_, vars_;
  std::ostringstream out_;
  std::size_t used_ = 0;
  std::size_t constructs_ = 0;
  std::size_t forced_at_ = 0;

  void line(int depth, const std::string &text) {
    out_ << std::string(static_cast<std::size_t>(depth) * 2, ' ') << text
         << '\n';
  }

  std::string operand() {
    if (rng_.chance(62))
      return rng_.pick(vars_);
    if (rng_.chance(15))
      return "\"s" + std::to_string(rng_.below(100)) + "\"";
    return std::to_string(rng_.below(1000));
  }

  std::string expression(int depth) {
    if (depth <= 0 || rng_.chance(35))
      return operand();
    static const std::vector<std::string> ops = {"+", "-", "*", "/", "%"};
    std::string lhs = expression(depth - 1);
    std::string rhs = expression(depth - 1);
    std::string e = lhs + " " + rng_.pick(ops) + " " + rhs;
    if (rng_.chance(30))
      e = "(" + e + ")";
    return e;
  }

  std::string condition() {
    static const std::vector<std::string> cmps = {"<",  ">",  "<=",
                                                  ">=", "==", "!="};
    std::string c = expression(1) + " " + rng_.pick(cmps) + " " + expression(1);
    if (rng_.chance(20)) {
      c += rng_.chance(50) ? " and " : " or ";
      c += rng_.pick(vars_) + " " + rng_.pick(cmps) + " " + operand();
    }
    return "(" + c + ")";
  }

  void simple(int depth) {
    const std::size_t roll = rng_.below(100);
    if (roll < 62) {
      line(depth, rng_.pick(vars_) + " = " + expression(2) + ";");
    } else if (roll < 82) {
      std::string args;
      const std::size_t n = rng_.below(4);
      for (std::size_t i = 0; i < n; ++i)
        args += (i ? ", " : "") + expression(1);
      line(depth, "call " + rng_.pick(funcs_) + "(" + args + ");");
    } else {
      line(depth, "output " + expression(2) + ";");
    }
    ++used_;
  }

  void body(int depth) {
    const std::size_t n = rng_.between(1, 4);
    for (std::size_t i = 0; i < n; ++i)
      statement(depth);
  }

  void statement(int depth) {
    const bool forced = constructs_ == 0 && used_ >= forced_at_;
    const unsigned p = depth == 0 ? 16 : 10;
    if (forced || (depth < size_.max_depth && rng_.chance(p)))
      construct(depth);
    else
      simple(depth);
  }

  void construct(int depth) {
    ++constructs_;
    ++used_;
    const std::size_t roll = rng_.below(100);
    if (roll < 45) {
      line(depth, "if " + condition());
      body(depth + 1);
      const std::size_t elseifs = rng_.chance(25) ? rng_.between(1, 2) : 0;
      for (std::size_t i = 0; i < elseifs; ++i) {
        line(depth, "elseif " + condition());
        ++used_;
        body(depth + 1);
      }
      if (rng_.chance(50)) {
        line(depth, "else");
        ++used_;
        body(depth + 1);
      }
      line(depth, "endif");
    } else if (roll < 65) {
      line(depth, "while " + condition());
      body(depth + 1);
      line(depth, "endwhile");
    } else if (roll < 85) {
      line(depth, "for " + rng_.pick(vars_) + " = " + expression(1) + " to " +
                      expression(1));
      body(depth + 1);
      line(depth, "endfor");
    } else {
      line(depth, "case " + rng_.pick(vars_));
      const std::size_t whens = rng_.between(1, 3);
      for (std::size_t i = 0; i < whens; ++i) {
        line(depth, "when " + std::to_string(rng_.below(10)));
        ++used_;
        body(depth + 1);
      }
      if (rng_.chance(50)) {
        line(depth, "else");
        ++used_;
        body(depth + 1);
      }
      line(depth, "endcase");
    }
  }
};

//===----------------------------------------------------------------------===//
// Mutation
//===----------------------------------------------------------------------===//

bool is_simple(const Statement &s) {
  return s.kind == StmtKind::assign || s.kind == StmtKind::declare ||
         s.kind == StmtKind::call || s.kind == StmtKind::output;
}

// Statement lists that may hold statements; a case has only its arms.
void collect_bodies(Statement &s, std::vector<std::vector<Statement> *> &out) {
  if (s.kind != StmtKind::case_)
    out.push_back(&s.body);
  for (auto &child : s.body)
    if (!is_simple(child))
      collect_bodies(child, out);
  for (auto &alt : s.alternatives)
    collect_bodies(alt, out);
}

template <typename Fn> void for_each_token_list(Statement &s, Fn &&fn) {
  fn(s.tokens);
  fn(s.end);
  for (auto &child : s.body)
    for_each_token_list(child, fn);
  for (auto &alt : s.alternatives)
    for_each_token_list(alt, fn);
}

void rename_and_relabel(Statement &root, Rng &rng) {
  std::map<std::string, std::string> names;
  const std::string prefix =
      std::string(1, static_cast<char>('a' + rng.below(26))) +
      std::to_string(rng.below(1000));
  for_each_token_list(root, [&](std::vector<Token> &tokens) {
    for (auto &t : tokens) {
      if (t.kind == TokenKind::identifier) {
        auto [it, inserted] = names.try_emplace(t.lexeme);
        if (inserted)
          it->second = prefix + "_" + std::to_string(names.size());
        t.lexeme = it->second;
      } else if (t.kind == TokenKind::literal) {
        if (t.lexeme.front() == '"') {
          t.lexeme = "\"m" + std::to_string(rng.below(10000)) + "\"";
        } else {
          std::string fresh = std::to_string(rng.below(100000));
          if (fresh == t.lexeme)
            fresh += "1";
          t.lexeme = fresh;
        }
      }
    }
  });
}

std::vector<std::string> identifiers_in(Statement &root) {
  std::set<std::string> seen;
  for_each_token_list(root, [&](std::vector<Token> &tokens) {
    for (const auto &t : tokens)
      if (t.kind == TokenKind::identifier)
        seen.insert(t.lexeme);
  });
  return {seen.begin(), seen.end()};
}

Statement make_statement(const std::string &text) {
  Statement tree = parse(tokenize(text));
  if (tree.body.size() != 1)
    throw Error("mutate: generated edit is not one statement");
  return std::move(tree.body.front());
}

void insert_statement(Statement &root, Rng &rng) {
  auto names = identifiers_in(root);
  if (names.empty())
    names.push_back("fresh");
  std::vector<std::vector<Statement> *> bodies;
  collect_bodies(root, bodies);
  auto &target = *bodies[rng.below(bodies.size())];
  const std::string var = names[rng.below(names.size())];
  const std::string other = names[rng.below(names.size())];
  std::string text;
  switch (rng.below(3)) {
  case 0:
    text = var + " = " + other + " + " + std::to_string(rng.below(100)) + ";";
    break;
  case 1:
    text = "output " + var + " * " + other + ";";
    break;
  default:
    text = var + " = " + var + " - " + other + ";";
  }
  const std::size_t at = rng.below(target.size() + 1);
  target.insert(target.begin() + static_cast<std::ptrdiff_t>(at),
                make_statement(text));
}

void delete_statement(Statement &root, Rng &rng) {
  std::vector<std::pair<std::vector<Statement> *, std::size_t>> simple;
  std::vector<std::vector<Statement> *> bodies;
  collect_bodies(root, bodies);
  for (auto *b : bodies)
    for (std::size_t i = 0; i < b->size(); ++i)
      if (is_simple((*b)[i]))
        simple.emplace_back(b, i);
  if (simple.empty())
    throw Error("mutate: deletion would empty the program");
  auto [body, index] = simple[rng.below(simple.size())];
  body->erase(body->begin() + static_cast<std::ptrdiff_t>(index));
  if (root.body.empty())
    throw Error("mutate: deletion would empty the program");
}

void reorder_statements(Statement &root, Rng &rng) {
  std::vector<std::pair<std::vector<Statement> *, std::size_t>> pairs;
  std::vector<std::vector<Statement> *> bodies;
  collect_bodies(root, bodies);
  for (auto *b : bodies)
    for (std::size_t i = 0; i + 1 < b->size(); ++i)
      if (is_simple((*b)[i]) && is_simple((*b)[i + 1]))
        pairs.emplace_back(b, i);
  if (pairs.empty())
    throw Error("mutate: no adjacent statements to reorder");
  auto [body, index] = pairs[rng.below(pairs.size())];
  std::swap((*body)[index], (*body)[index + 1]);
}

//===----------------------------------------------------------------------===//
// Evaluation helpers
//===----------------------------------------------------------------------===//

std::size_t count_lines(const std::string &source) {
  std::size_t n = 0;
  std::istringstream in(source);
  std::string text;
  while (std::getline(in, text)) {
    const auto pos = text.find_first_not_of(" \t\r");
    if (pos != std::string::npos && text[pos] != '#')
      ++n;
  }
  return n;
}

std::string block_bin(std::size_t blocks) {
  if (blocks < 5)
    return "1-4";
  if (blocks < 10)
    return "5-9";
  if (blocks < 20)
    return "10-19";
  return "20+";
}

std::string line_bin(std::size_t lines) {
  if (lines < 10)
    return "1-9";
  if (lines < 20)
    return "10-19";
  if (lines < 40)
    return "20-39";
  return "40+";
}

void tally(BucketCounts &bucket, bool true_positive) {
  ++bucket.candidates;
  if (true_positive)
    ++bucket.true_positives;
  else
    ++bucket.false_positives;
}

IndexRecord make_index_record(const ProgramFingerprint &fp,
                              const std::string &source,
                              const EvalConfig &config) {
  IndexRecord r;
  r.fingerprint = fp;
  r.source_path = source;
  r.stamp.width = config.analysis.width;
  r.stamp.min_blocks = config.analysis.min_blocks;
  return r;
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

} // namespace

std::string generate_program(std::uint64_t seed, const SizeSpec &size) {
  return ProgramGenerator(seed, size).run();
}

std::string_view to_string(CloneType type) {
  switch (type) {
  case CloneType::type1:
    return "type1";
  case CloneType::type2:
    return "type2";
  case CloneType::type3:
    return "type3";
  }
  return "type2";
}

CloneType parse_clone_type(std::string_view text) {
  if (text == "type1")
    return CloneType::type1;
  if (text == "type2")
    return CloneType::type2;
  if (text == "type3")
    return CloneType::type3;
  throw Error("unknown clone type '" + std::string(text) + "'");
}

Mutant mutate(const std::string &source, const MutationSpec &spec) {
  Statement tree = parse(tokenize(source));
  Rng rng(spec.seed);
  Mutant m;
  m.label = spec.kind;

  if (spec.kind == CloneType::type1) {
    PrintStyle style;
    style.indent = 4;
    style.comments = true;
    style.comment_text = "copy " + std::to_string(rng.below(1000));
    m.source = to_source(tree, style);
    return m;
  }

  rename_and_relabel(tree, rng);
  if (spec.kind == CloneType::type3) {
    if (spec.inserts + spec.deletes + spec.reorders == 0)
      throw Error("mutate: type3 needs at least one edit");
    for (std::size_t i = 0; i < spec.inserts; ++i)
      insert_statement(tree, rng);
    for (std::size_t i = 0; i < spec.deletes; ++i)
      delete_statement(tree, rng);
    for (std::size_t i = 0; i < spec.reorders; ++i)
      reorder_statements(tree, rng);
  }
  m.source = to_source(tree);
  return m;
}

//===----------------------------------------------------------------------===//
// Corpora
//===----------------------------------------------------------------------===//

namespace {

bool has_fingerprint(const std::string &source, const AnalysisConfig &config) {
  try {
    return analyze_source(source, "probe", config).fingerprint.scoreable();
  } catch (const Error &) {
    return false;
  }
}

std::string numbered(const char *prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%03zu.mp", prefix, i);
  return buf;
}

} // namespace

Corpus generate_corpus(const CorpusSpec &spec) {
  if (spec.mix.empty())
    throw Error("generate_corpus: empty mutation mix");
  Corpus corpus;
  std::uint64_t attempt = 0;

  auto scoreable_program = [&](std::uint64_t stream) {
    for (;;) {
      std::string src =
          generate_program(derive_seed(spec.seed, stream, attempt++), spec.size);
      if (has_fingerprint(src, spec.analysis))
        return src;
    }
  };

  for (std::size_t i = 0; i < spec.originals; ++i) {
    const CloneType kind = spec.mix[i % spec.mix.size()];
    for (;;) {
      std::string original = scoreable_program(1);
      MutationSpec m;
      m.kind = kind;
      m.seed = derive_seed(spec.seed, 2, attempt++);
      if (kind == CloneType::type3)
        m.inserts = 1;
      Mutant mutant = mutate(original, m);
      if (!has_fingerprint(mutant.source, spec.analysis))
        continue;
      const std::string orig_name = numbered("orig", i);
      const std::string mut_name = numbered("mut", i);
      corpus.files[orig_name] = std::move(original);
      corpus.files[mut_name] = std::move(mutant.source);
      corpus.manifest.push_back({orig_name, mut_name, kind});
      break;
    }
  }
  for (std::size_t i = 0; i < spec.unrelated; ++i)
    corpus.files[numbered("unrel", i)] = scoreable_program(3);
  return corpus;
}

void write_corpus(const Corpus &corpus, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  for (const auto &[name, source] : corpus.files) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out)
      throw IoError("cannot write '" + (dir / name).string() + "'");
    out << source;
  }
  json manifest = json::array();
  for (const auto &e : corpus.manifest)
    manifest.push_back({{"original", e.original},
                        {"mutant", e.mutant},
                        {"type", to_string(e.type)}});
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out)
    throw IoError("cannot write manifest in '" + dir.string() + "'");
  out << manifest.dump(2) << '\n';
}

Corpus read_corpus(const std::filesystem::path &dir) {
  Corpus corpus;
  if (!std::filesystem::is_directory(dir))
    throw IoError("corpus directory '" + dir.string() + "' not found");
  for (const auto &entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mp")
      corpus.files[entry.path().filename().string()] =
          read_file(entry.path().string());

  json manifest;
  try {
    manifest = json::parse(read_file((dir / "manifest.json").string()));
  } catch (const json::exception &e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
  if (!manifest.is_array())
    throw Error("malformed manifest: expected a JSON array");
  for (const auto &item : manifest) {
    ManifestEntry e;
    try {
      e.original = item.at("original").get<std::string>();
      e.mutant = item.at("mutant").get<std::string>();
      e.type = parse_clone_type(item.at("type").get<std::string>());
    } catch (const json::exception &ex) {
      throw Error(std::string("malformed manifest entry: ") + ex.what());
    }
    for (const auto *name : {&e.original, &e.mutant})
      if (!corpus.files.count(*name))
        throw Error("manifest names '" + *name + "' which is not in the corpus");
    corpus.manifest.push_back(std::move(e));
  }
  return corpus;
}

//===----------------------------------------------------------------------===//
// Evaluation
//===----------------------------------------------------------------------===//

std::vector<EvalResult> evaluate(const Corpus &corpus, const EvalConfig &config,
                                 const std::vector<int> &alphas) {
  for (const auto &e : corpus.manifest)
    if (!corpus.files.count(e.original) || !corpus.files.count(e.mutant))
      throw Error("manifest does not match corpus");

  std::set<std::pair<std::string, std::string>> labeled;
  for (const auto &e : corpus.manifest)
    labeled.insert(std::minmax(e.original, e.mutant));

  ConfigStamp stamp;
  stamp.width = config.analysis.width;
  stamp.min_blocks = config.analysis.min_blocks;
  FingerprintIndex index(stamp);
  std::map<std::string, std::size_t> blocks, lines;
  std::vector<ProgramFingerprint> probes;
  for (const auto &[name, source] : corpus.files) {
    ProgramAnalysis a;
    try {
      a = analyze_source(source, name, config.analysis);
    } catch (const Error &) {
      continue;
    }
    blocks[name] = a.cfg.size() - 1;
    lines[name] = count_lines(source);
    index.add_program(make_index_record(a.fingerprint, name, config));
    if (a.fingerprint.scoreable())
      probes.push_back(std::move(a.fingerprint));
  }

  std::vector<EvalResult> results;
  for (int alpha : alphas) {
    const auto start = Clock::now();
    QueryOptions options{alpha, config.threshold, config.mode};
    std::set<std::pair<std::string, std::string>> found;
    for (const auto &probe : probes)
      for (const auto &c : query(index, probe, options))
        found.insert(std::minmax(probe.program_id, c.program_id));

    EvalResult r;
    r.alpha = alpha;
    r.candidates_found = found.size();
    for (const auto &pair : found) {
      const bool tp = labeled.count(pair) > 0;
      if (tp)
        ++r.true_positives;
      else
        ++r.false_positives;
      tally(r.by_blocks[block_bin(std::min(blocks[pair.first],
                                           blocks[pair.second]))],
            tp);
      tally(r.by_lines[line_bin(std::min(lines[pair.first],
                                         lines[pair.second]))],
            tp);
    }
    r.precision = r.candidates_found == 0
                      ? 1.0
                      : static_cast<double>(r.true_positives) /
                            static_cast<double>(r.candidates_found);
    r.wall_ms = ms_since(start);
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<EvalResult> evaluate(const std::filesystem::path &corpus_dir,
                                 const EvalConfig &config,
                                 const std::vector<int> &alphas) {
  return evaluate(read_corpus(corpus_dir), config, alphas);
}

std::string results_csv(const std::vector<EvalResult> &results) {
  std::ostringstream os;
  os << "alpha,candidates,tp,fp,precision\n";
  for (const auto &r : results)
    os << r.alpha << ',' << r.candidates_found << ',' << r.true_positives << ','
       << r.false_positives << ',' << r.precision << '\n';
  return os.str();
}

std::string results_json(const std::vector<EvalResult> &results) {
  auto buckets = [](const std::map<std::string, BucketCounts> &m) {
    json out = json::object();
    for (const auto &[bin, c] : m)
      out[bin] = {{"candidates", c.candidates},
                  {"tp", c.true_positives},
                  {"fp", c.false_positives}};
    return out;
  };
  json out = json::array();
  for (const auto &r : results)
    out.push_back({{"alpha", r.alpha},
                   {"candidates", r.candidates_found},
                   {"tp", r.true_positives},
                   {"fp", r.false_positives},
                   {"precision", r.precision},
                   {"by_blocks", buckets(r.by_blocks)},
                   {"by_lines", buckets(r.by_lines)},
                   {"wall_ms", r.wall_ms}});
  return out.dump(2) + "\n";
}

//===----------------------------------------------------------------------===//
// Scaling
//===----------------------------------------------------------------------===//

std::vector<ScalingRow> scaling_run(const std::vector<std::size_t> &sizes,
                                    const ScalingConfig &config) {
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    throw Error("scaling_run: sizes must be ascending");
  if (sizes.empty())
    return {};

  const std::size_t largest = sizes.back();
  std::vector<IndexRecord> records;
  std::uint64_t attempt = 0;
  while (records.size() < largest) {
    const std::string src =
        generate_program(derive_seed(config.seed, 5, attempt++), config.size);
    ProgramAnalysis a;
    try {
      a = analyze_source(src, numbered("prog", records.size()),
                         config.eval.analysis);
    } catch (const Error &) {
      continue;
    }
    if (a.fingerprint.scoreable())
      records.push_back(make_index_record(a.fingerprint, "", config.eval));
  }

  const auto probe_src =
      mutate(generate_program(derive_seed(config.seed, 5, 0), config.size),
             {CloneType::type2, 0, 0, 0, config.seed})
          .source;
  const ProgramFingerprint probe =
      analyze_source(probe_src, "probe", config.eval.analysis).fingerprint;
  const QueryOptions options{kDefaultAlpha, config.eval.threshold,
                             config.eval.mode};

  std::vector<ScalingRow> rows;
  for (std::size_t size : sizes) {
    FingerprintIndex index(records.front().stamp);
    for (std::size_t i = 0; i < size; ++i)
      index.add_program(records[i]);

    ScalingRow row;
    row.corpus_size = size;
    QueryStats stats;
    row.candidates = query(index, probe, options, &stats).size();
    row.scored = stats.scored;

    // Calibrate repetitions so one sample lasts at least min_sample_ms.
    std::size_t reps = 1;
    for (;;) {
      const auto t = Clock::now();
      for (std::size_t r = 0; r < reps; ++r)
        query(index, probe, options);
      if (ms_since(t) >= config.min_sample_ms || reps >= (1U << 24))
        break;
      reps *= 2;
    }
    double best = 0.0;
    for (int s = 0; s < std::max(1, config.samples); ++s) {
      const auto t = Clock::now();
      for (std::size_t r = 0; r < reps; ++r)
        query(index, probe, options);
      const double per_query = ms_since(t) / static_cast<double>(reps);
      best = s == 0 ? per_query : std::min(best, per_query);
    }
    row.query_ms = best;
    rows.push_back(row);
  }
  return rows;
}

LinearFit fit_line(const std::vector<double> &xs,
                   const std::vector<double> &ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw Error("fit_line: need at least two points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LinearFit fit;
  if (sxx == 0.0)
    throw Error("fit_line: x values are all equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += e * e;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

} // namespace cfgprint::forge
