#include "mirrorgate/featurizer.hpp"

#include <algorithm>
#include <cstdint>

#include "mirrorgate/errors.hpp"
#include "mirrorgate/util/binio.hpp"
#include "mirrorgate/util/sha256.hpp"

namespace mirrorgate::featurizer {

namespace {

constexpr char kMagic[4] = {'M', 'I', 'R', 'V'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

void NGramConfig::validate() const {
  if (n_min < 1 || n_min > n_max || n_max > 10) {
    throw InvalidConfig("ngram range must satisfy 1 <= n_min <= n_max <= 10");
  }
  if (min_df < 1) {
    throw InvalidConfig("min_df must be >= 1");
  }
  if (max_features < 1) {
    throw InvalidConfig("max_features must be >= 1");
  }
}

std::vector<std::string> extract_ngrams(std::string_view text, const NGramConfig& cfg) {
  cfg.validate();
  std::vector<std::string> out;
  for_each_wb_ngram(text, cfg, [&](std::string_view ng) { out.emplace_back(ng); });
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, NGramConfig config)
    : terms_(std::move(terms)), config_(config) {
  config_.validate();
  if (terms_.empty()) {
    throw EmptyVocabulary("vocabulary has no terms");
  }
  if (terms_.size() > config_.max_features) {
    throw InvalidConfig("vocabulary exceeds max_features");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i + 1 < terms_.size(); ++i) {
    if (!(terms_[i] < terms_[i + 1])) {
      throw InvalidConfig("vocabulary terms must be sorted and unique");
    }
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
  fingerprint_ = util::sha256_hex(serialize());
}

std::string Vocabulary::serialize() const {
  util::ByteWriter w;
  w.bytes(std::string_view(kMagic, 4));
  w.u32(kFormatVersion);
  w.u32(config_.n_min);
  w.u32(config_.n_max);
  w.u32(config_.min_df);
  w.u32(config_.max_features);
  w.u8(config_.binary ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(terms_.size()));
  for (const std::string& t : terms_) {
    w.str(t);
  }
  return w.take();
}

Vocabulary Vocabulary::deserialize(std::string_view bytes) {
  try {
    util::ByteReader r(bytes);
    if (r.bytes(4) != std::string_view(kMagic, 4)) {
      throw CorruptVocabulary("bad vocabulary magic");
    }
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion) {
      throw UnsupportedVersion("vocabulary format version " + std::to_string(version));
    }
    NGramConfig cfg;
    cfg.n_min = r.u32();
    cfg.n_max = r.u32();
    cfg.min_df = r.u32();
    cfg.max_features = r.u32();
    cfg.binary = r.u8() != 0;
    const std::uint32_t count = r.u32();
    std::vector<std::string> terms;
    terms.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      terms.push_back(r.str());
    }
    if (r.remaining() != 0) {
      throw CorruptVocabulary("trailing bytes after vocabulary");
    }
    return Vocabulary(std::move(terms), cfg);
  } catch (const std::out_of_range&) {
    throw CorruptVocabulary("vocabulary stream truncated");
  } catch (const InvalidConfig& e) {
    throw CorruptVocabulary(std::string("invalid vocabulary contents: ") + e.what());
  } catch (const EmptyVocabulary&) {
    throw CorruptVocabulary("vocabulary has no terms");
  }
}

Vocabulary build_vocabulary(const std::vector<std::string>& corpus, const NGramConfig& cfg) {
  cfg.validate();

  struct Stat {
    std::uint32_t df = 0;
    std::uint64_t count = 0;
  };
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, Stat, StringHash, std::equal_to<>> stats;
  std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>> local;

  for (const std::string& doc : corpus) {
    local.clear();
    for_each_wb_ngram(doc, cfg, [&](std::string_view ng) {
      auto it = local.find(ng);
      if (it == local.end()) {
        local.emplace(std::string(ng), 1);
      } else {
        ++it->second;
      }
    });
    for (const auto& [term, n] : local) {
      auto [it, inserted] = stats.try_emplace(term);
      it->second.df += 1;
      it->second.count += n;
    }
  }

  struct Candidate {
    const std::string* term;
    std::uint64_t count;
  };
  std::vector<Candidate> survivors;
  survivors.reserve(stats.size());
  for (const auto& [term, s] : stats) {
    if (s.df >= cfg.min_df) {
      survivors.push_back({&term, s.count});
    }
  }
  if (survivors.empty()) {
    throw EmptyVocabulary("no n-gram met min_df=" + std::to_string(cfg.min_df));
  }

  if (survivors.size() > cfg.max_features) {
    std::sort(survivors.begin(), survivors.end(), [](const Candidate& a, const Candidate& b) {
      if (a.count != b.count) return a.count > b.count;
      return *a.term < *b.term;
    });
    survivors.resize(cfg.max_features);
  }

  std::vector<std::string> terms;
  terms.reserve(survivors.size());
  for (const Candidate& c : survivors) {
    terms.push_back(*c.term);
  }
  std::sort(terms.begin(), terms.end());
  return Vocabulary(std::move(terms), cfg);
}

FeatureSet vectorize(std::string_view text, const Vocabulary& vocab) {
  FeatureSet fs;
  for_each_wb_ngram(text, vocab.config(), [&](std::string_view ng) {
    if (auto id = vocab.id_of(ng)) {
      fs.present_ids.push_back(*id);
    }
  });
  std::sort(fs.present_ids.begin(), fs.present_ids.end());
  fs.present_ids.erase(std::unique(fs.present_ids.begin(), fs.present_ids.end()),
                       fs.present_ids.end());
  return fs;
}

}  // namespace mirrorgate::featurizer
