#include "mirrorgate/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "mirrorgate/errors.hpp"
#include "mirrorgate/util/rng.hpp"
#include "mirrorgate/util/sha256.hpp"

namespace mirrorgate::mirror {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kReasonNames[kReasonCount] = {
    "instruction_override", "roleplay_jailbreak", "meta_probe",
    "exfiltration",         "adversarial_suffix", "indirect_injection",
    "obfuscation",          "constraint_bypass",
};

constexpr const char* kLanguageNames[kLanguageCount] = {"en", "zh", "ar", "ru"};

constexpr const char* kStatusNames[3] = {"open", "closed", "accepted_miss"};

}  // namespace

const char* to_string(ReasonCategory r) {
  return kReasonNames[static_cast<std::uint8_t>(r)];
}

ReasonCategory reason_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kReasonCount; ++i)
    if (s == kReasonNames[i]) return static_cast<ReasonCategory>(i);
  throw InvalidSample("unknown reason category: " + std::string(s));
}

const char* to_string(Language l) {
  return kLanguageNames[static_cast<std::uint8_t>(l)];
}

Language language_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kLanguageCount; ++i)
    if (s == kLanguageNames[i]) return static_cast<Language>(i);
  throw InvalidSample("unknown language: " + std::string(s));
}

const char* to_string(CellStatus s) {
  return kStatusNames[static_cast<std::uint8_t>(s)];
}

CellStatus cell_status_from_string(std::string_view s) {
  for (std::size_t i = 0; i < 3; ++i)
    if (s == kStatusNames[i]) return static_cast<CellStatus>(i);
  throw SpecError("unknown cell status: " + std::string(s));
}

const char* to_string(RouteKind k) {
  switch (k) {
    case RouteKind::kCell: return "cell";
    case RouteKind::kResidual: return "residual";
    case RouteKind::kBackground: return "background";
    case RouteKind::kQuarantine: return "quarantine";
  }
  return "quarantine";
}

std::string content_hash(std::string_view normalized_text) {
  return util::sha256_hex(normalized_text);
}

// ---------------------------------------------------------------------------
// Sample I/O.

namespace {

const json& require_field(const json& row, const char* key) {
  const auto it = row.find(key);
  if (it == row.end())
    throw InvalidSample(std::string("missing field: ") + key);
  return *it;
}

std::string require_string(const json& row, const char* key) {
  const json& v = require_field(row, key);
  if (!v.is_string())
    throw InvalidSample(std::string("field is not a string: ") + key);
  return v.get<std::string>();
}

}  // namespace

Sample make_sample(const json& row, const textnorm::NormConfig& norm) {
  if (!row.is_object()) throw InvalidSample("sample row is not a JSON object");
  static const std::set<std::string> kKnown = {
      "id",        "text",         "label",
      "language",  "reason",       "source_id",
      "content_hash", "content_safety_only"};
  for (const auto& [key, value] : row.items())
    if (!kKnown.count(key)) throw InvalidSample("unknown field: " + key);

  Sample s;
  s.id = require_string(row, "id");
  if (s.id.empty()) throw InvalidSample("empty id");
  s.text = require_string(row, "text");
  s.label = label_from_string(require_string(row, "label"));
  s.language = language_from_string(require_string(row, "language"));
  s.source_id = require_string(row, "source_id");
  if (s.source_id.empty()) throw InvalidSample("empty source_id");

  if (const auto it = row.find("reason"); it != row.end() && !it->is_null()) {
    if (!it->is_string()) throw InvalidSample("field is not a string: reason");
    s.reason = reason_from_string(it->get<std::string>());
  }
  if (const auto it = row.find("content_safety_only"); it != row.end()) {
    if (!it->is_boolean())
      throw InvalidSample("field is not a boolean: content_safety_only");
    s.content_safety_only = it->get<bool>();
  }

  s.content_hash = content_hash(textnorm::normalize(s.text, norm));
  if (const auto it = row.find("content_hash"); it != row.end()) {
    if (!it->is_string())
      throw InvalidSample("field is not a string: content_hash");
    if (it->get<std::string>() != s.content_hash)
      throw InvalidSample("content_hash mismatch for id " + s.id +
                          ": row says " + it->get<std::string>() +
                          ", normalized text hashes to " + s.content_hash);
  }
  return s;
}

ordered_json to_json(const Sample& s) {
  ordered_json row;
  row["id"] = s.id;
  row["text"] = s.text;
  row["label"] = to_string(s.label);
  row["language"] = to_string(s.language);
  if (s.reason)
    row["reason"] = to_string(*s.reason);
  else
    row["reason"] = nullptr;
  row["source_id"] = s.source_id;
  row["content_hash"] = s.content_hash;
  if (s.content_safety_only) row["content_safety_only"] = true;
  return row;
}

std::vector<Sample> load_samples_jsonl(std::string_view content,
                                       const textnorm::NormConfig& norm) {
  std::vector<Sample> samples;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (line.empty()) continue;
    json row = json::parse(line, nullptr, false);
    if (row.is_discarded())
      throw InvalidSample("line " + std::to_string(line_no) +
                          ": not valid JSON");
    try {
      samples.push_back(make_sample(row, norm));
    } catch (const InvalidSample& e) {
      throw InvalidSample("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

std::string save_samples_jsonl(const std::vector<Sample>& samples) {
  std::string out;
  for (const Sample& s : samples) {
    out += to_json(s).dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus spec.

CorpusSpec parse_corpus_spec(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SpecError("corpus spec is not valid JSON");
  if (!doc.is_object()) throw SpecError("corpus spec is not a JSON object");
  try {
    CorpusSpec spec;
    if (!doc.contains("format_version") ||
        !doc["format_version"].is_number_unsigned())
      throw SpecError("corpus spec needs an unsigned format_version");
    spec.format_version = doc["format_version"].get<std::uint32_t>();
    if (spec.format_version != 1)
      throw UnsupportedVersion("corpus spec format_version " +
                               std::to_string(spec.format_version) +
                               " is not readable");
    spec.spec_version = doc.value("spec_version", std::string{});
    if (!doc.contains("cells") || !doc["cells"].is_array())
      throw SpecError("corpus spec needs a cells array");
    std::set<std::pair<std::uint8_t, std::uint8_t>> seen;
    for (const json& c : doc["cells"]) {
      CellSpec cell;
      cell.reason = reason_from_string(c.at("reason").get<std::string>());
      cell.language = language_from_string(c.at("language").get<std::string>());
      cell.quota_pos = c.at("quota_pos").get<std::uint32_t>();
      cell.quota_neg = c.at("quota_neg").get<std::uint32_t>();
      for (const json& src : c.at("allowed_sources"))
        cell.allowed_sources.insert(src.get<std::string>());
      if (c.contains("status"))
        cell.status = cell_status_from_string(c["status"].get<std::string>());
      const auto key = std::make_pair(static_cast<std::uint8_t>(cell.reason),
                                      static_cast<std::uint8_t>(cell.language));
      if (!seen.insert(key).second)
        throw SpecError(std::string("duplicate cell: ") +
                        to_string(cell.reason) + "/" + to_string(cell.language));
      spec.cells.push_back(std::move(cell));
    }
    return spec;
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed corpus spec: ") + e.what());
  } catch (const InvalidSample& e) {
    // Enum parse failures inside a spec document are spec errors.
    throw SpecError(std::string("malformed corpus spec: ") + e.what());
  }
}

std::string serialize_corpus_spec(const CorpusSpec& spec) {
  ordered_json doc;
  doc["format_version"] = spec.format_version;
  doc["spec_version"] = spec.spec_version;
  doc["cells"] = ordered_json::array();
  for (const CellSpec& cell : spec.cells) {
    ordered_json c;
    c["reason"] = to_string(cell.reason);
    c["language"] = to_string(cell.language);
    c["quota_pos"] = cell.quota_pos;
    c["quota_neg"] = cell.quota_neg;
    c["allowed_sources"] = cell.allowed_sources;  // std::set: sorted
    c["status"] = to_string(cell.status);
    doc["cells"].push_back(std::move(c));
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Corpus building.

CorpusBuilder::CorpusBuilder(CorpusSpec spec, textnorm::NormConfig norm)
    : spec_(std::move(spec)), norm_(norm) {
  for (std::size_t i = 0; i < spec_.cells.size(); ++i) {
    const CellSpec& cell = spec_.cells[i];
    const auto key = std::make_pair(static_cast<std::uint8_t>(cell.reason),
                                    static_cast<std::uint8_t>(cell.language));
    if (!cell_index_.emplace(key, i).second)
      throw SpecError(std::string("duplicate cell: ") + to_string(cell.reason) +
                      "/" + to_string(cell.language));
    fills_.push_back(CellFill{cell, {}, {}});
  }
}

Routing CorpusBuilder::route(const Sample& s) {
  if (s.id.empty() || s.source_id.empty() || s.content_hash.empty())
    throw InvalidSample("sample " + s.id +
                        " is missing id, source_id, or content_hash");

  Routing r;
  auto land = [&](RouteKind kind, std::vector<Sample>& pool,
                  std::string note) {
    r.kind = kind;
    r.note = std::move(note);
    pool.push_back(s);
  };

  if (s.content_safety_only) {
    land(RouteKind::kQuarantine, quarantine_, "content_safety_only");
    return r;
  }
  if (s.label == Label::kMalicious && !s.reason) {
    land(RouteKind::kQuarantine, quarantine_, "missing_reason");
    return r;
  }
  source_hashes_[s.source_id].insert(s.content_hash);

  if (!s.reason) {  // benign with no mirrored-cell assignment
    land(RouteKind::kBackground, background_, "");
    return r;
  }

  const auto key = std::make_pair(static_cast<std::uint8_t>(*s.reason),
                                  static_cast<std::uint8_t>(s.language));
  const auto it = cell_index_.find(key);
  if (it == cell_index_.end()) {
    land(RouteKind::kResidual, residual_, "no_such_cell");
    return r;
  }
  CellFill& fill = fills_[it->second];
  if (!fill.spec.allowed_sources.count(s.source_id)) {
    land(RouteKind::kResidual, residual_, "source_not_allowed");
    return r;
  }
  auto& side = s.label == Label::kMalicious ? fill.pos : fill.neg;
  const std::uint32_t quota =
      s.label == Label::kMalicious ? fill.spec.quota_pos : fill.spec.quota_neg;
  if (side.size() >= quota) {
    land(RouteKind::kResidual, residual_, "quota_met");
    return r;
  }
  r.kind = RouteKind::kCell;
  r.cell = std::make_pair(*s.reason, s.language);
  side.push_back(s);
  return r;
}

std::vector<Sample> CorpusBuilder::cell_corpus() const {
  std::vector<Sample> out;
  for (const CellFill& fill : fills_) {
    out.insert(out.end(), fill.pos.begin(), fill.pos.end());
    out.insert(out.end(), fill.neg.begin(), fill.neg.end());
  }
  return out;
}

CorpusManifest CorpusBuilder::manifest(std::optional<SplitInfo> split) const {
  CorpusManifest m;
  m.spec_version = spec_.spec_version;
  m.norm_config = norm_;
  for (const CellFill& fill : fills_) {
    ManifestCell cell;
    cell.reason = fill.spec.reason;
    cell.language = fill.spec.language;
    cell.quota_pos = fill.spec.quota_pos;
    cell.quota_neg = fill.spec.quota_neg;
    cell.pos = static_cast<std::uint32_t>(fill.pos.size());
    cell.neg = static_cast<std::uint32_t>(fill.neg.size());
    if (cell.pos >= cell.quota_pos && cell.neg >= cell.quota_neg)
      cell.status = CellStatus::kClosed;
    else if (fill.spec.status == CellStatus::kAcceptedMiss)
      cell.status = CellStatus::kAcceptedMiss;
    else
      cell.status = CellStatus::kOpen;
    m.cells.push_back(cell);
  }
  m.residual = static_cast<std::uint32_t>(residual_.size());
  m.background = static_cast<std::uint32_t>(background_.size());
  m.quarantine = static_cast<std::uint32_t>(quarantine_.size());
  for (const auto& [source, hashes] : source_hashes_)
    m.source_hashes[source] =
        std::vector<std::string>(hashes.begin(), hashes.end());
  m.split = std::move(split);
  return m;
}

// ---------------------------------------------------------------------------
// Manifest serialization.

namespace {

ordered_json norm_config_to_json(const textnorm::NormConfig& n) {
  ordered_json out;
  out["lowercase"] = n.lowercase;
  out["unicode_form"] = textnorm::to_string(n.unicode_form);
  out["collapse_whitespace"] = n.collapse_whitespace;
  out["max_bytes"] = n.max_bytes;
  return out;
}

textnorm::NormConfig norm_config_from_json(const json& doc) {
  textnorm::NormConfig n;
  n.lowercase = doc.at("lowercase").get<bool>();
  n.unicode_form = textnorm::unicode_form_from_string(
      doc.at("unicode_form").get<std::string>());
  n.collapse_whitespace = doc.at("collapse_whitespace").get<bool>();
  n.max_bytes = doc.at("max_bytes").get<std::uint32_t>();
  return n;
}

}  // namespace

std::string serialize_manifest(const CorpusManifest& m) {
  ordered_json doc;
  doc["format_version"] = m.format_version;
  doc["spec_version"] = m.spec_version;
  doc["norm_config"] = norm_config_to_json(m.norm_config);
  doc["cells"] = ordered_json::array();
  for (const ManifestCell& cell : m.cells) {
    ordered_json c;
    c["reason"] = to_string(cell.reason);
    c["language"] = to_string(cell.language);
    c["quota_pos"] = cell.quota_pos;
    c["quota_neg"] = cell.quota_neg;
    c["pos"] = cell.pos;
    c["neg"] = cell.neg;
    c["status"] = to_string(cell.status);
    doc["cells"].push_back(std::move(c));
  }
  doc["routing"] = {{"residual", m.residual},
                    {"background", m.background},
                    {"quarantine", m.quarantine}};
  doc["sources"] = ordered_json::object();
  for (const auto& [source, hashes] : m.source_hashes)
    doc["sources"][source] = hashes;
  if (m.split) {
    ordered_json s;
    s["fraction"] = m.split->fraction;
    s["seed"] = m.split->seed;
    s["train_count"] = m.split->train_count;
    s["holdout_count"] = m.split->holdout_count;
    s["train_digest"] = m.split->train_digest;
    s["holdout_digest"] = m.split->holdout_digest;
    s["holdout_hashes"] = m.split->holdout_hashes;
    doc["split"] = std::move(s);
  } else {
    doc["split"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

CorpusManifest parse_manifest(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SpecError("manifest is not valid JSON");
  try {
    CorpusManifest m;
    m.format_version = doc.at("format_version").get<std::uint32_t>();
    if (m.format_version != 1)
      throw UnsupportedVersion("manifest format_version " +
                               std::to_string(m.format_version) +
                               " is not readable");
    m.spec_version = doc.at("spec_version").get<std::string>();
    m.norm_config = norm_config_from_json(doc.at("norm_config"));
    for (const json& c : doc.at("cells")) {
      ManifestCell cell;
      cell.reason = reason_from_string(c.at("reason").get<std::string>());
      cell.language = language_from_string(c.at("language").get<std::string>());
      cell.quota_pos = c.at("quota_pos").get<std::uint32_t>();
      cell.quota_neg = c.at("quota_neg").get<std::uint32_t>();
      cell.pos = c.at("pos").get<std::uint32_t>();
      cell.neg = c.at("neg").get<std::uint32_t>();
      cell.status = cell_status_from_string(c.at("status").get<std::string>());
      m.cells.push_back(cell);
    }
    const json& routing = doc.at("routing");
    m.residual = routing.at("residual").get<std::uint32_t>();
    m.background = routing.at("background").get<std::uint32_t>();
    m.quarantine = routing.at("quarantine").get<std::uint32_t>();
    for (const auto& [source, hashes] : doc.at("sources").items())
      m.source_hashes[source] = hashes.get<std::vector<std::string>>();
    if (doc.contains("split") && !doc["split"].is_null()) {
      const json& s = doc["split"];
      SplitInfo info;
      info.fraction = s.at("fraction").get<double>();
      info.seed = s.at("seed").get<std::uint64_t>();
      info.train_count = s.at("train_count").get<std::uint32_t>();
      info.holdout_count = s.at("holdout_count").get<std::uint32_t>();
      info.train_digest = s.at("train_digest").get<std::string>();
      info.holdout_digest = s.at("holdout_digest").get<std::string>();
      info.holdout_hashes = s.at("holdout_hashes").get<std::vector<std::string>>();
      m.split = std::move(info);
    }
    return m;
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed manifest: ") + e.what());
  } catch (const InvalidSample& e) {
    throw SpecError(std::string("malformed manifest: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Splits.

std::string hash_set_digest(std::vector<std::string> hashes) {
  std::sort(hashes.begin(), hashes.end());
  std::string joined;
  for (const std::string& h : hashes) {
    joined += h;
    joined += '\n';
  }
  return util::sha256_hex(joined);
}

namespace {

// Stratum key: (label, language, reason slot 0=none / 1..8). The numeric
// stream index is stable across runs and input orders.
std::uint64_t stratum_index(const Sample& s) {
  const std::uint64_t label = s.label == Label::kMalicious ? 1 : 0;
  const std::uint64_t lang = static_cast<std::uint64_t>(s.language);
  const std::uint64_t reason =
      s.reason ? 1 + static_cast<std::uint64_t>(*s.reason) : 0;
  return label * (kLanguageCount * (kReasonCount + 1)) +
         lang * (kReasonCount + 1) + reason;
}

std::string stratum_name(const Sample& s) {
  std::string name = std::string("label=") + to_string(s.label) +
                     " language=" + to_string(s.language) + " reason=";
  name += s.reason ? to_string(*s.reason) : "none";
  return name;
}

}  // namespace

Split carve_holdout(const std::vector<Sample>& corpus, double fraction,
                    std::uint64_t seed) {
  if (!(fraction > 0.0) || !(fraction < 1.0))
    throw InvalidConfig("holdout fraction must lie strictly between 0 and 1");

  std::unordered_map<std::string, int> hash_count;
  for (const Sample& s : corpus) ++hash_count[s.content_hash];
  std::vector<std::string> dups;
  for (const auto& [hash, count] : hash_count)
    if (count > 1) dups.push_back(hash);
  if (!dups.empty()) {
    std::sort(dups.begin(), dups.end());
    std::string msg = "corpus has duplicate content hashes:";
    for (const std::string& h : dups) msg += " " + h;
    throw LeakageError(msg);
  }

  // Group by stratum, deterministically ordered within each stratum.
  std::map<std::uint64_t, std::vector<const Sample*>> strata;
  for (const Sample& s : corpus) strata[stratum_index(s)].push_back(&s);

  std::unordered_set<std::string> holdout_hashes;
  for (auto& [index, members] : strata) {
    if (members.size() < 2)
      throw StratumTooSmall(
          "stratum " + stratum_name(*members.front()) + " has " +
          std::to_string(members.size()) +
          " sample(s); need at least one for the holdout and one remainder");
    std::sort(members.begin(), members.end(),
              [](const Sample* a, const Sample* b) {
                return a->content_hash < b->content_hash;
              });
    const auto want = std::llround(fraction * static_cast<double>(members.size()));
    const std::size_t take = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::max<long long>(want, 0)), 1,
        members.size() - 1);
    util::Rng rng = util::Rng::derive(seed, index);
    rng.shuffle(members);
    for (std::size_t i = 0; i < take; ++i)
      holdout_hashes.insert(members[i]->content_hash);
  }

  Split split;
  for (const Sample& s : corpus) {
    if (holdout_hashes.count(s.content_hash))
      split.holdout.push_back(s);
    else
      split.train.push_back(s);
  }
  assert_disjoint(split.train, split.holdout);  // checked, not assumed

  split.info.fraction = fraction;
  split.info.seed = seed;
  split.info.train_count = static_cast<std::uint32_t>(split.train.size());
  split.info.holdout_count = static_cast<std::uint32_t>(split.holdout.size());
  std::vector<std::string> train_hashes, hold_hashes;
  for (const Sample& s : split.train) train_hashes.push_back(s.content_hash);
  for (const Sample& s : split.holdout) hold_hashes.push_back(s.content_hash);
  split.info.train_digest = hash_set_digest(train_hashes);
  split.info.holdout_digest = hash_set_digest(hold_hashes);
  std::sort(hold_hashes.begin(), hold_hashes.end());
  split.info.holdout_hashes = std::move(hold_hashes);
  return split;
}

std::vector<std::string> intersection_hashes(const std::vector<Sample>& a,
                                             const std::vector<Sample>& b) {
  std::set<std::string> in_a;
  for (const Sample& s : a) in_a.insert(s.content_hash);
  std::set<std::string> hits;
  for (const Sample& s : b)
    if (in_a.count(s.content_hash)) hits.insert(s.content_hash);
  return {hits.begin(), hits.end()};
}

void assert_disjoint(const std::vector<Sample>& train,
                     const std::vector<Sample>& holdout) {
  const auto hits = intersection_hashes(train, holdout);
  if (hits.empty()) return;
  std::string msg = "train/holdout content-hash leakage (" +
                    std::to_string(hits.size()) + " hashes):";
  for (const std::string& h : hits) msg += " " + h;
  throw LeakageError(msg);
}

// ---------------------------------------------------------------------------
// Coverage.

CoverageReport coverage_matrix(const CorpusManifest& m) {
  CoverageReport report;
  std::uint64_t quota_total = 0;
  for (std::size_t r = 0; r < kReasonCount; ++r) {
    for (std::size_t l = 0; l < kLanguageCount; ++l) {
      CoverageCell& cell = report.cells[r * kLanguageCount + l];
      cell.reason = static_cast<ReasonCategory>(r);
      cell.language = static_cast<Language>(l);
    }
  }
  for (const ManifestCell& cell : m.cells) {
    CoverageCell& out =
        report.cells[static_cast<std::size_t>(cell.reason) * kLanguageCount +
                     static_cast<std::size_t>(cell.language)];
    out.in_spec = true;
    out.quota_pos = cell.quota_pos;
    out.quota_neg = cell.quota_neg;
    out.pos = cell.pos;
    out.neg = cell.neg;
    out.status = cell.status;
    quota_total += cell.quota_pos + cell.quota_neg;
  }
  for (const CoverageCell& cell : report.cells) {
    switch (cell.status) {
      case CellStatus::kClosed: ++report.closed; break;
      case CellStatus::kOpen: ++report.open; break;
      case CellStatus::kAcceptedMiss: ++report.accepted_miss; break;
    }
  }
  report.degenerate = quota_total == 0;

  const std::uint32_t total = static_cast<std::uint32_t>(report.cells.size());
  report.summary =
      std::to_string(report.closed) + "/" + std::to_string(total) + " closed";
  if (report.open > 0)
    report.summary += ", " + std::to_string(report.open) + " open";
  if (report.accepted_miss > 0)
    report.summary +=
        ", " + std::to_string(report.accepted_miss) + " accepted_miss";
  return report;
}

std::string render(const CoverageReport& report) {
  constexpr int kNameWidth = 22;
  std::string out(kNameWidth, ' ');
  for (std::size_t l = 0; l < kLanguageCount; ++l) {
    out += ' ';
    out += kLanguageNames[l];
  }
  out += '\n';
  for (std::size_t r = 0; r < kReasonCount; ++r) {
    std::string row = kReasonNames[r];
    row.resize(kNameWidth, ' ');
    for (std::size_t l = 0; l < kLanguageCount; ++l) {
      const CoverageCell& cell = report.cells[r * kLanguageCount + l];
      char mark = '.';
      if (cell.status == CellStatus::kClosed) mark = '#';
      if (cell.status == CellStatus::kAcceptedMiss) mark = 'x';
      row += ' ';
      row += mark;
      row += ' ';  // align under the two-letter language codes
    }
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out += row;
    out += '\n';
  }
  out += "legend: # closed  . open  x accepted_miss";
  if (report.degenerate) out += "  (degenerate: all quotas zero)";
  out += '\n';
  out += report.summary;
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Blends.

std::vector<Sample> mix_blend(const std::vector<Sample>& mirror_pool,
                              const std::vector<Sample>& nonmirror_pool,
                              std::uint32_t ratio_m, std::uint32_t ratio_nm,
                              std::uint64_t seed, std::size_t target_size) {
  if (ratio_m == 0 && ratio_nm == 0)
    throw InvalidConfig("blend ratio must have a nonzero component");
  const double share = static_cast<double>(ratio_m) /
                       (static_cast<double>(ratio_m) + ratio_nm);
  const std::size_t n_mirror = static_cast<std::size_t>(
      std::llround(share * static_cast<double>(target_size)));
  const std::size_t n_non = target_size - n_mirror;
  if (n_mirror > mirror_pool.size())
    throw PoolExhausted("mirror pool short by " +
                        std::to_string(n_mirror - mirror_pool.size()) +
                        " sample(s)");
  if (n_non > nonmirror_pool.size())
    throw PoolExhausted("non-mirror pool short by " +
                        std::to_string(n_non - nonmirror_pool.size()) +
                        " sample(s)");

  std::vector<Sample> mirror_copy = mirror_pool;
  std::vector<Sample> non_copy = nonmirror_pool;
  util::Rng rng_m = util::Rng::derive(seed, 0);
  util::Rng rng_n = util::Rng::derive(seed, 1);
  rng_m.shuffle(mirror_copy);
  rng_n.shuffle(non_copy);

  std::vector<Sample> out;
  out.reserve(target_size);
  out.insert(out.end(), mirror_copy.begin(), mirror_copy.begin() + n_mirror);
  out.insert(out.end(), non_copy.begin(), non_copy.begin() + n_non);
  util::Rng rng_out = util::Rng::derive(seed, 2);
  rng_out.shuffle(out);
  return out;
}

}  // namespace mirrorgate::mirror
