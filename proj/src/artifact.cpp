#include "mirrorgate/artifact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "mirrorgate/errors.hpp"
#include "mirrorgate/trainer.hpp"
#include "mirrorgate/util/binio.hpp"
#include "mirrorgate/util/sha256.hpp"

namespace mirrorgate::artifact {

namespace {

constexpr char kMagic[4] = {'M', 'I', 'R', 'C'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kDigestBytes = 32;

// splitmix64 finalizer: a bijective avalanche mix.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Seeded 64-bit string hash: 8-byte little-endian chunks folded through
// mix64, with the length mixed into the tail. Byte-order independent of the
// host, so artifacts hash identically everywhere. The per-chunk mix keeps
// the result nonlinear in the seed: two distinct terms that collide under
// one seed separate under another, which the seed-retry loop relies on.
std::uint64_t hash_term(std::uint64_t seed, std::string_view s) {
  std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
  std::size_t i = 0;
  while (i + 8 <= s.size()) {
    std::uint64_t chunk = 0;
    for (int j = 0; j < 8; ++j)
      chunk |= std::uint64_t(static_cast<unsigned char>(s[i + j])) << (8 * j);
    h = mix64(h ^ chunk);
    i += 8;
  }
  std::uint64_t tail = std::uint64_t(s.size()) << 56;
  for (std::size_t j = 0; i + j < s.size(); ++j)
    tail |= std::uint64_t(static_cast<unsigned char>(s[i + j])) << (8 * j);
  return mix64(h ^ tail);
}

struct TermHashes {
  std::uint64_t g;  // bucket selector
  std::uint64_t f;  // slot base: f1 = high 32, f2 = (low 32) | 1
};

TermHashes term_hashes(std::uint64_t seed, std::string_view s) {
  const std::uint64_t h = hash_term(seed, s);
  return {h, mix64(h ^ 0x6A09E667F3BCC909ULL)};
}

std::uint64_t slot_base(std::uint64_t f, std::uint32_t d1) {
  const std::uint64_t f1 = f >> 32;
  const std::uint64_t f2 = (f & 0xFFFFFFFFULL) | 1ULL;
  return f1 + std::uint64_t(d1) * f2;
}

struct Phf {
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> d1;
  std::vector<std::uint32_t> d2;
  std::vector<std::uint32_t> slot_of;  // key index -> slot
};

constexpr std::uint32_t kMaxSeedAttempts = 4096;
constexpr std::uint32_t kMaxD1 = 1 << 16;

bool try_build_phf(std::uint64_t seed, const std::vector<std::string>& terms,
                   std::uint32_t m, Phf& out) {
  const std::uint32_t n = static_cast<std::uint32_t>(terms.size());
  std::vector<std::vector<std::uint32_t>> buckets(m);
  std::vector<std::uint64_t> f(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const TermHashes h = term_hashes(seed, terms[i]);
    buckets[h.g % m].push_back(i);
    f[i] = h.f;
  }

  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return buckets[a].size() > buckets[b].size();
                   });

  out.seed = seed;
  out.d1.assign(m, 0);
  out.d2.assign(m, 0);
  out.slot_of.assign(n, 0);
  std::vector<char> occupied(n, 0);
  std::vector<std::uint32_t> slots;

  for (std::uint32_t b : order) {
    const auto& keys = buckets[b];
    if (keys.empty()) break;  // sorted descending: the rest are empty too
    bool placed = false;
    for (std::uint32_t d1 = 0; d1 < kMaxD1 && !placed; ++d1) {
      slots.clear();
      bool distinct = true;
      for (std::uint32_t k : keys) {
        const std::uint32_t s =
            static_cast<std::uint32_t>(slot_base(f[k], d1) % n);
        for (std::uint32_t prev : slots)
          if (prev == s) {
            distinct = false;
            break;
          }
        if (!distinct) break;
        slots.push_back(s);
      }
      if (!distinct) continue;
      for (std::uint32_t d2 = 0; d2 < n; ++d2) {
        bool free_run = true;
        for (std::uint32_t s : slots)
          if (occupied[(s + d2) % n]) {
            free_run = false;
            break;
          }
        if (!free_run) continue;
        for (std::size_t k = 0; k < keys.size(); ++k) {
          const std::uint32_t s = (slots[k] + d2) % n;
          occupied[s] = 1;
          out.slot_of[keys[k]] = s;
        }
        out.d1[b] = d1;
        out.d2[b] = d2;
        placed = true;
        break;
      }
    }
    if (!placed) return false;
  }
  return true;
}

Phf build_phf(const std::vector<std::string>& terms) {
  const std::uint32_t n = static_cast<std::uint32_t>(terms.size());
  const std::uint32_t m = std::max<std::uint32_t>(1, (n + 3) / 4);
  Phf phf;
  for (std::uint32_t attempt = 0; attempt < kMaxSeedAttempts; ++attempt) {
    if (try_build_phf(attempt, terms, m, phf)) return phf;
  }
  // Unreachable for distinct terms: each independent seed succeeds with
  // overwhelming probability.
  throw std::logic_error("perfect hash construction exhausted seed attempts");
}

double sigmoid_open(double x) {
  double p;
  if (x >= 0) {
    const double e = std::exp(-x);
    p = 1.0 / (1.0 + e);
  } else {
    const double e = std::exp(x);
    p = e / (1.0 + e);
  }
  if (p <= 0.0) p = std::numeric_limits<double>::denorm_min();
  if (p >= 1.0) p = std::nextafter(1.0, 0.0);
  return p;
}

void append_hex_comment(std::string& out, const char* name,
                        const std::string& value) {
  out += "// ";
  out += name;
  out += ": ";
  out += value;
  out += '\n';
}

std::string format_u32_array(const std::vector<std::uint32_t>& v) {
  std::string out;
  char buf[16];
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i % 12 == 0) out += "\n    ";
    std::snprintf(buf, sizeof buf, "%uu,", v[i]);
    out += buf;
    out += ' ';
  }
  out += "\n";
  return out;
}

std::string format_f64(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);  // hex float: exact round trip
  return buf;
}

}  // namespace

std::optional<std::uint32_t> CompiledModel::find_slot(
    std::string_view term) const {
  const std::uint32_t n = static_cast<std::uint32_t>(terms_.size());
  const std::uint32_t m = static_cast<std::uint32_t>(d1_.size());
  const TermHashes h = term_hashes(seed_, term);
  const std::uint32_t b = static_cast<std::uint32_t>(h.g % m);
  const std::uint32_t slot =
      static_cast<std::uint32_t>((slot_base(h.f, d1_[b]) + d2_[b]) % n);
  if (terms_[slot] != term) return std::nullopt;
  return slot;
}

std::optional<double> CompiledModel::weight_of(std::string_view term) const {
  const auto slot = find_slot(term);
  if (!slot) return std::nullopt;
  return weights_[*slot];
}

void CompiledModel::check_self_consistent() const {
  const std::size_t n = terms_.size();
  if (n == 0) throw CorruptArtifact("artifact holds no vocabulary entries");
  if (ids_.size() != n || weights_.size() != n)
    throw CorruptArtifact("slot array sizes disagree");
  if (d1_.empty() || d1_.size() != d2_.size())
    throw CorruptArtifact("displacement array sizes disagree");
  try {
    ngram_.validate();
  } catch (const InvalidConfig& e) {
    throw CorruptArtifact(std::string("invalid n-gram config: ") + e.what());
  }
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (ids_[i] >= n || seen[ids_[i]])
      throw CorruptArtifact("slot ids are not a permutation of [0, n)");
    seen[ids_[i]] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto slot = find_slot(terms_[i]);
    if (!slot || *slot != i)
      throw CorruptArtifact("perfect hash table is not self-consistent");
  }
}

namespace {

std::string serialize_artifact(const CompiledModel& cm) {
  util::ByteWriter w;
  w.bytes(std::string_view(kMagic, 4));
  w.u32(kFormatVersion);

  w.u8(cm.norm_config().lowercase ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(cm.norm_config().unicode_form));
  w.u8(cm.norm_config().collapse_whitespace ? 1 : 0);
  w.u32(cm.norm_config().max_bytes);

  w.u32(cm.ngram_config().n_min);
  w.u32(cm.ngram_config().n_max);
  w.u32(cm.ngram_config().min_df);
  w.u32(cm.ngram_config().max_features);
  w.u8(cm.ngram_config().binary ? 1 : 0);

  w.str(cm.vocab_fingerprint());
  w.str(cm.model_hash());
  w.f64(cm.bias());

  return w.take();
}

}  // namespace

CompileResult compile_model(std::string_view model_bytes,
                            const featurizer::Vocabulary& vocab) {
  const trainer::LinearModel model = trainer::load_model(model_bytes);
  if (model.vocab_fingerprint != vocab.fingerprint())
    throw CorruptModel("model was trained against vocabulary " +
                       model.vocab_fingerprint + ", not " +
                       vocab.fingerprint());
  if (model.weights.size() != vocab.size())
    throw CorruptModel("model carries " + std::to_string(model.weights.size()) +
                       " weights for a vocabulary of " +
                       std::to_string(vocab.size()) + " terms");

  const std::uint32_t n = static_cast<std::uint32_t>(vocab.size());
  const Phf phf = build_phf(vocab.terms());

  CompiledModel cm;
  cm.norm_ = model.norm_config;
  cm.ngram_ = model.ngram_config;
  cm.bias_ = model.bias;
  cm.seed_ = phf.seed;
  cm.d1_ = phf.d1;
  cm.d2_ = phf.d2;
  cm.terms_.resize(n);
  cm.ids_.resize(n);
  cm.weights_.resize(n);
  for (std::uint32_t id = 0; id < n; ++id) {
    const std::uint32_t slot = phf.slot_of[id];
    cm.terms_[slot] = vocab.terms()[id];
    cm.ids_[slot] = id;
    cm.weights_[slot] = model.weights[id];
  }
  cm.vocab_fingerprint_ = vocab.fingerprint();
  cm.model_hash_ = util::sha256_hex(model_bytes);
  cm.check_self_consistent();

  util::ByteWriter w;
  w.bytes(serialize_artifact(cm));
  w.u64(cm.seed_);
  w.u32(static_cast<std::uint32_t>(cm.d1_.size()));
  for (std::size_t i = 0; i < cm.d1_.size(); ++i) {
    w.u32(cm.d1_[i]);
    w.u32(cm.d2_[i]);
  }
  w.u32(n);
  for (std::uint32_t slot = 0; slot < n; ++slot) {
    w.str(cm.terms_[slot]);
    w.u32(cm.ids_[slot]);
    w.f64(cm.weights_[slot]);
  }
  std::string bytes = w.take();
  const auto digest = util::sha256(bytes);
  bytes.append(reinterpret_cast<const char*>(digest.data()), digest.size());

  CompileResult result;
  result.artifact_bytes = std::move(bytes);
  result.model_hash = cm.model_hash_;

  // Generated static source table: deterministic layout, embeddable at
  // build time, round-trips through from_embedded() to identical scoring.
  std::string src;
  src.reserve(1024 + 48 * n);
  src += "// Generated scoring table. Do not edit.\n";
  append_hex_comment(src, "model_hash", cm.model_hash_);
  append_hex_comment(src, "vocab_fingerprint", cm.vocab_fingerprint_);
  src += "#include \"mirrorgate/artifact.hpp\"\n\n";
  src += "#include <cstdint>\n\n";
  src += "namespace mirrorgate::embedded {\nnamespace {\n";

  src += "const std::uint32_t kD1[] = {";
  src += format_u32_array(cm.d1_);
  src += "};\n";
  src += "const std::uint32_t kD2[] = {";
  src += format_u32_array(cm.d2_);
  src += "};\n";

  std::string concat;
  std::vector<std::uint32_t> offsets(1, 0);
  for (const std::string& t : cm.terms_) {
    concat += t;
    offsets.push_back(static_cast<std::uint32_t>(concat.size()));
  }
  src += "const unsigned char kTermBytes[] = {";
  if (concat.empty()) {
    src += "0x00";
  } else {
    char buf[8];
    for (std::size_t i = 0; i < concat.size(); ++i) {
      if (i % 16 == 0) src += "\n    ";
      std::snprintf(buf, sizeof buf, "0x%02X,",
                    static_cast<unsigned char>(concat[i]));
      src += buf;
    }
    src += "\n";
  }
  src += "};\n";
  src += "const std::uint32_t kTermOffsets[] = {";
  src += format_u32_array(offsets);
  src += "};\n";
  src += "const std::uint32_t kIds[] = {";
  src += format_u32_array(cm.ids_);
  src += "};\n";

  src += "const double kWeights[] = {";
  for (std::size_t i = 0; i < cm.weights_.size(); ++i) {
    if (i % 4 == 0) src += "\n    ";
    src += format_f64(cm.weights_[i]);
    src += ", ";
  }
  src += "\n};\n";
  src += "}  // namespace\n\n";

  char buf[64];
  src += "extern const ::mirrorgate::artifact::EmbeddedTable kScoringTable;\n";
  src += "const ::mirrorgate::artifact::EmbeddedTable kScoringTable = {\n";
  src += "    .unicode_form = \"";
  src += textnorm::to_string(cm.norm_.unicode_form);
  src += "\",\n";
  src += std::string("    .lowercase = ") +
         (cm.norm_.lowercase ? "true" : "false") + ",\n";
  src += std::string("    .collapse_whitespace = ") +
         (cm.norm_.collapse_whitespace ? "true" : "false") + ",\n";
  std::snprintf(buf, sizeof buf, "    .max_bytes = %uu,\n", cm.norm_.max_bytes);
  src += buf;
  std::snprintf(buf, sizeof buf, "    .n_min = %uu,\n", cm.ngram_.n_min);
  src += buf;
  std::snprintf(buf, sizeof buf, "    .n_max = %uu,\n", cm.ngram_.n_max);
  src += buf;
  std::snprintf(buf, sizeof buf, "    .min_df = %uu,\n", cm.ngram_.min_df);
  src += buf;
  std::snprintf(buf, sizeof buf, "    .max_features = %uu,\n",
                cm.ngram_.max_features);
  src += buf;
  src += std::string("    .binary = ") + (cm.ngram_.binary ? "true" : "false") +
         ",\n";
  src += "    .vocab_fingerprint = \"" + cm.vocab_fingerprint_ + "\",\n";
  src += "    .model_hash = \"" + cm.model_hash_ + "\",\n";
  src += "    .bias = " + format_f64(cm.bias_) + ",\n";
  std::snprintf(buf, sizeof buf, "    .seed = %lluULL,\n",
                static_cast<unsigned long long>(cm.seed_));
  src += buf;
  std::snprintf(buf, sizeof buf, "    .bucket_count = %uu,\n",
                static_cast<unsigned>(cm.d1_.size()));
  src += buf;
  src += "    .d1 = kD1,\n    .d2 = kD2,\n";
  std::snprintf(buf, sizeof buf, "    .entry_count = %uu,\n", n);
  src += buf;
  src += "    .term_bytes = kTermBytes,\n";
  src += "    .term_offsets = kTermOffsets,\n";
  src += "    .ids = kIds,\n";
  src += "    .weights = kWeights,\n";
  src += "};\n\n";
  src += "}  // namespace mirrorgate::embedded\n";

  result.generated_source = std::move(src);
  return result;
}

CompiledModel load_artifact(std::string_view bytes) {
  if (bytes.size() < 8) throw CorruptArtifact("artifact is truncated");
  if (bytes.substr(0, 4) != std::string_view(kMagic, 4))
    throw CorruptArtifact("bad magic (expected MIRC)");
  util::ByteReader r(bytes);
  r.bytes(4);
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion)
    throw UnsupportedVersion("artifact format version " +
                             std::to_string(version) + " is not readable");
  if (bytes.size() < 8 + kDigestBytes)
    throw CorruptArtifact("artifact is truncated");
  const std::string_view payload = bytes.substr(0, bytes.size() - kDigestBytes);
  const std::string_view digest = bytes.substr(bytes.size() - kDigestBytes);
  const auto expect = util::sha256(payload);
  if (digest != std::string_view(reinterpret_cast<const char*>(expect.data()),
                                 expect.size()))
    throw CorruptArtifact("integrity digest mismatch");

  CompiledModel cm;
  try {
    cm.norm_.lowercase = r.u8() != 0;
    const std::uint8_t form = r.u8();
    if (form > 1) throw CorruptArtifact("unknown unicode form tag");
    cm.norm_.unicode_form = static_cast<textnorm::UnicodeForm>(form);
    cm.norm_.collapse_whitespace = r.u8() != 0;
    cm.norm_.max_bytes = r.u32();

    cm.ngram_.n_min = r.u32();
    cm.ngram_.n_max = r.u32();
    cm.ngram_.min_df = r.u32();
    cm.ngram_.max_features = r.u32();
    cm.ngram_.binary = r.u8() != 0;

    cm.vocab_fingerprint_ = r.str();
    cm.model_hash_ = r.str();
    cm.bias_ = r.f64();
    cm.seed_ = r.u64();

    const std::uint32_t m = r.u32();
    cm.d1_.resize(m);
    cm.d2_.resize(m);
    for (std::uint32_t i = 0; i < m; ++i) {
      cm.d1_[i] = r.u32();
      cm.d2_[i] = r.u32();
    }
    const std::uint32_t n = r.u32();
    cm.terms_.resize(n);
    cm.ids_.resize(n);
    cm.weights_.resize(n);
    for (std::uint32_t slot = 0; slot < n; ++slot) {
      cm.terms_[slot] = r.str();
      cm.ids_[slot] = r.u32();
      cm.weights_[slot] = r.f64();
    }
    if (r.remaining() != kDigestBytes)
      throw CorruptArtifact("trailing bytes after artifact payload");
  } catch (const std::out_of_range&) {
    throw CorruptArtifact("artifact payload is truncated");
  }
  cm.check_self_consistent();
  return cm;
}

CompiledModel from_embedded(const EmbeddedTable& t) {
  CompiledModel cm;
  try {
    cm.norm_.unicode_form = textnorm::unicode_form_from_string(t.unicode_form);
  } catch (const std::exception& e) {
    throw CorruptArtifact(std::string("embedded table: ") + e.what());
  }
  cm.norm_.lowercase = t.lowercase;
  cm.norm_.collapse_whitespace = t.collapse_whitespace;
  cm.norm_.max_bytes = t.max_bytes;
  cm.ngram_.n_min = t.n_min;
  cm.ngram_.n_max = t.n_max;
  cm.ngram_.min_df = t.min_df;
  cm.ngram_.max_features = t.max_features;
  cm.ngram_.binary = t.binary;
  cm.vocab_fingerprint_ = t.vocab_fingerprint;
  cm.model_hash_ = t.model_hash;
  cm.bias_ = t.bias;
  cm.seed_ = t.seed;
  cm.d1_.assign(t.d1, t.d1 + t.bucket_count);
  cm.d2_.assign(t.d2, t.d2 + t.bucket_count);
  cm.terms_.resize(t.entry_count);
  cm.ids_.assign(t.ids, t.ids + t.entry_count);
  cm.weights_.assign(t.weights, t.weights + t.entry_count);
  for (std::uint32_t i = 0; i < t.entry_count; ++i) {
    const std::uint32_t begin = t.term_offsets[i];
    const std::uint32_t end = t.term_offsets[i + 1];
    if (end < begin) throw CorruptArtifact("embedded term offsets not sorted");
    cm.terms_[i].assign(reinterpret_cast<const char*>(t.term_bytes) + begin,
                        end - begin);
  }
  cm.check_self_consistent();
  return cm;
}

Verdict score(const CompiledModel& cm, std::string_view raw_text,
              double threshold) {
  const std::string normalized = textnorm::normalize(raw_text, cm.norm_config());

  std::vector<std::pair<std::uint32_t, double>> matched;  // (vocab id, weight)
  featurizer::for_each_wb_ngram(
      normalized, cm.ngram_config(), [&](std::string_view term) {
        if (const auto slot = cm.find_slot(term))
          matched.emplace_back(cm.id_at(*slot), cm.weight_at(*slot));
      });
  std::sort(matched.begin(), matched.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  matched.erase(std::unique(matched.begin(), matched.end(),
                            [](const auto& a, const auto& b) {
                              return a.first == b.first;
                            }),
                matched.end());

  // Bias-initialized dot product in vocabulary-id order: the same addends
  // in the same order as trainer::margin over a vectorized FeatureSet.
  double margin = cm.bias();
  for (const auto& [id, weight] : matched) margin += weight;

  Verdict v;
  v.margin = margin;
  v.probability = sigmoid_open(margin);
  v.threshold = threshold;
  v.label = margin > threshold ? Label::kMalicious : Label::kBenign;
  v.matched_feature_count = static_cast<std::uint32_t>(matched.size());
  return v;
}

Label classify(const CompiledModel& cm, std::string_view raw_text,
               double threshold) {
  return score(cm, raw_text, threshold).label;
}

}  // namespace mirrorgate::artifact
