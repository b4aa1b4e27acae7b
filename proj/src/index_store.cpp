#include "cfgprint/index_store.hpp"

#include "cfgprint/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace cfgprint {

using nlohmann::json;

void FingerprintIndex::add_program(IndexRecord record) {
  if (!(record.stamp == stamp_))
    throw IncompatibleIndex("incompatible index configuration for '" +
                            record.program_id() + "'");
  if (record.fingerprint.width != stamp_.width)
    throw IncompatibleIndex("incompatible index configuration: width " +
                            std::to_string(record.fingerprint.width));
  std::string id = record.program_id();
  records_.insert_or_assign(std::move(id), std::move(record));
}

const IndexRecord *FingerprintIndex::find(const std::string &program_id) const {
  auto it = records_.find(program_id);
  return it == records_.end() ? nullptr : &it->second;
}

//===----------------------------------------------------------------------===//
// Query and clustering
//===----------------------------------------------------------------------===//

std::vector<PathMatch> match_evidence(const ProgramFingerprint &probe,
                                      const ProgramFingerprint &other,
                                      int alpha) {
  std::vector<PathMatch> evidence;
  for (const auto &x : probe.fingerprints) {
    const PathFingerprint *best = nullptr;
    int best_distance = alpha + 1;
    for (const auto &y : other.fingerprints) {
      const int d = hamming(x.bits, y.bits);
      if (d < best_distance) {
        best_distance = d;
        best = &y;
      }
    }
    if (best)
      evidence.push_back({x.bits, best->bits, best_distance});
  }
  return evidence;
}

namespace {

void check_options(const QueryOptions &options) {
  if (options.threshold < 0.0 || options.threshold > 1.0)
    throw Error("threshold must be in [0, 1]");
}

} // namespace

std::vector<CloneCandidate> query(const FingerprintIndex &index,
                                  const ProgramFingerprint &probe,
                                  const QueryOptions &options,
                                  QueryStats *stats) {
  check_options(options);
  if (!probe.scoreable())
    throw Error("unscoreable program '" + probe.program_id + "'");

  QueryStats local;
  std::vector<CloneCandidate> found;
  for (const auto &[id, record] : index.records()) {
    ++local.scanned;
    if (id == probe.program_id || !record.fingerprint.scoreable())
      continue;
    ++local.scored;
    SimilarityScore score =
        similarity(probe, record.fingerprint, options.alpha, options.mode);
    if (score.value < options.threshold)
      continue;
    found.push_back({id, score,
                     match_evidence(probe, record.fingerprint, options.alpha)});
  }
  std::sort(found.begin(), found.end(), [](const auto &a, const auto &b) {
    if (a.score.value != b.score.value)
      return a.score.value > b.score.value;
    return a.program_id < b.program_id;
  });
  if (stats)
    *stats = local;
  return found;
}

std::vector<CloneGroup> cluster(const FingerprintIndex &index,
                                const QueryOptions &options) {
  check_options(options);
  std::vector<const IndexRecord *> members;
  for (const auto &[id, record] : index.records())
    if (record.fingerprint.scoreable())
      members.push_back(&record);

  const std::size_t n = members.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<double> scores(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = similarity(members[i]->fingerprint,
                                  members[j]->fingerprint, options.alpha,
                                  options.mode)
                           .value;
      scores[i * n + j] = scores[j * n + i] = s;
      if (s >= options.threshold)
        parent[root(i)] = root(j);
    }
  }

  // Members are already in id order, so the first index seen per root is the
  // group's smallest id.
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    auto &group = by_root[root(i)];
    if (group.empty())
      order.push_back(root(i));
    group.push_back(i);
  }

  std::vector<CloneGroup> groups;
  for (std::size_t r : order) {
    const auto &idx = by_root[r];
    if (idx.size() < 2)
      continue;
    CloneGroup g;
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      g.members.push_back(members[idx[a]]->program_id());
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        total += scores[idx[a] * n + idx[b]];
        ++pairs;
      }
    }
    g.mean_score = total / static_cast<double>(pairs);
    groups.push_back(std::move(g));
  }
  return groups;
}

//===----------------------------------------------------------------------===//
// Persistence
//===----------------------------------------------------------------------===//

namespace {

json header_json(const ConfigStamp &stamp) {
  return json{{"format", kIndexFormatName},
              {"version", kIndexFormatVersion},
              {"width", stamp.width},
              {"hash", stamp.hash_name},
              {"normalization", stamp.normalization_version},
              {"min_blocks", stamp.min_blocks},
              {"alpha", stamp.alpha}};
}

json record_json(const IndexRecord &record) {
  json fps = json::array();
  for (const auto &fp : record.fingerprint.fingerprints)
    fps.push_back(to_hex(fp.bits));
  return json{{"id", record.program_id()},
              {"source", record.source_path},
              {"fingerprints", std::move(fps)},
              {"path_count", record.fingerprint.path_count},
              {"truncated", record.fingerprint.truncated}};
}

template <typename T>
T field(const json &obj, const char *name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end())
    throw IndexFormatError(line, std::string("missing field '") + name + "'");
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    throw IndexFormatError(line, std::string("bad value for '") + name + "'");
  }
}

json parse_line(const std::string &text, std::size_t line) {
  try {
    json value = json::parse(text);
    if (!value.is_object())
      throw IndexFormatError(line, "expected a JSON object");
    return value;
  } catch (const json::parse_error &e) {
    throw IndexFormatError(line, std::string("invalid JSON: ") + e.what());
  }
}

ConfigStamp parse_header(const json &h) {
  if (field<std::string>(h, "format", 1) != kIndexFormatName)
    throw IndexFormatError(1, "not a cfgprint index");
  const int version = field<int>(h, "version", 1);
  if (version != kIndexFormatVersion)
    throw IncompatibleIndex("incompatible index configuration: format version " +
                            std::to_string(version) + ", expected " +
                            std::to_string(kIndexFormatVersion));
  ConfigStamp stamp;
  stamp.width = field<unsigned>(h, "width", 1);
  stamp.hash_name = field<std::string>(h, "hash", 1);
  stamp.normalization_version = field<int>(h, "normalization", 1);
  stamp.min_blocks = field<std::size_t>(h, "min_blocks", 1);
  stamp.alpha = field<int>(h, "alpha", 1);
  if (stamp.hash_name != kHashName)
    throw IncompatibleIndex("incompatible index configuration: hash '" +
                            stamp.hash_name + "', expected '" +
                            std::string(kHashName) + "'");
  if (stamp.normalization_version != kNormalizationVersion)
    throw IncompatibleIndex(
        "incompatible index configuration: normalization version " +
        std::to_string(stamp.normalization_version));
  if (stamp.width == 0 || stamp.width > 64)
    throw IndexFormatError(1, "width must be in [1, 64]");
  return stamp;
}

IndexRecord parse_record(const json &r, const ConfigStamp &stamp,
                         std::size_t line) {
  IndexRecord record;
  record.stamp = stamp;
  auto &fp = record.fingerprint;
  fp.program_id = field<std::string>(r, "id", line);
  fp.width = stamp.width;
  fp.path_count = field<std::size_t>(r, "path_count", line);
  fp.truncated = field<bool>(r, "truncated", line);
  record.source_path = field<std::string>(r, "source", line);

  const auto hexes = field<std::vector<std::string>>(r, "fingerprints", line);
  const std::uint64_t mask =
      stamp.width == 64 ? ~std::uint64_t{0}
                        : (std::uint64_t{1} << stamp.width) - 1;
  for (std::size_t i = 0; i < hexes.size(); ++i) {
    PathFingerprint p;
    try {
      p.bits = from_hex(hexes[i]);
    } catch (const Error &e) {
      throw IndexFormatError(line, e.what());
    }
    if ((p.bits & ~mask) != 0)
      throw IndexFormatError(line, "fingerprint wider than index width");
    if (!fp.fingerprints.empty() && fp.fingerprints.back().bits >= p.bits)
      throw IndexFormatError(line, "fingerprints not sorted and unique");
    p.width = stamp.width;
    p.program_id = fp.program_id;
    p.path_index = i;
    fp.fingerprints.push_back(std::move(p));
  }
  return record;
}

} // namespace

void save(const FingerprintIndex &index, std::ostream &out) {
  out << header_json(index.config()).dump() << '\n';
  for (const auto &[id, record] : index.records())
    out << record_json(record).dump() << '\n';
}

void save(const FingerprintIndex &index, const std::string &path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot write '" + path + "'");
    save(index, out);
    out.flush();
    if (!out)
      throw IoError("write failed for '" + path + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot write '" + path + "'");
  }
}

FingerprintIndex load(std::istream &in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string content = ss.str();
  if (content.empty())
    throw IndexFormatError(1, "missing header");

  std::vector<std::string> lines;
  std::size_t begin = 0;
  while (begin < content.size()) {
    const std::size_t nl = content.find('\n', begin);
    if (nl == std::string::npos) {
      throw IndexFormatError(lines.size() + 1,
                             "truncated record (no line terminator)");
    }
    lines.push_back(content.substr(begin, nl - begin));
    begin = nl + 1;
  }

  FingerprintIndex index(parse_header(parse_line(lines.front(), 1)));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line = i + 1;
    IndexRecord record =
        parse_record(parse_line(lines[i], line), index.config(), line);
    if (index.find(record.program_id()))
      throw IndexFormatError(line, "duplicate program id '" +
                                       record.program_id() + "'");
    index.add_program(std::move(record));
  }
  return index;
}

FingerprintIndex load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "'");
  return load(in);
}

} // namespace cfgprint
