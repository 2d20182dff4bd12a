#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mirrorgate/util/utf8.hpp"

namespace mirrorgate::featurizer {

/// Character word-boundary n-gram extraction parameters. N-gram lengths are
/// measured in code points; extracted keys are UTF-8 byte strings.
struct NGramConfig {
  std::uint32_t n_min = 3;
  std::uint32_t n_max = 5;
  std::uint32_t min_df = 5;
  std::uint32_t max_features = 15000;
  bool binary = true;

  bool operator==(const NGramConfig&) const = default;

  /// Throws InvalidConfig unless 1 <= n_min <= n_max <= 10, min_df >= 1,
  /// max_features >= 1.
  void validate() const;
};

/// Enumerates every word-boundary n-gram of `text` (already L0-normalized):
/// words are maximal runs without U+0020; each word is padded to " w "; for
/// each n in [n_min, n_max] all code-point windows of length n are emitted,
/// or the whole padded word once for that n when it is shorter than n.
/// `fn` receives a string_view valid only for the duration of the call.
template <typename Fn>
void for_each_wb_ngram(std::string_view text, const NGramConfig& cfg, Fn&& fn) {
  std::vector<char32_t> padded;
  std::string key;
  padded.reserve(64);
  key.reserve(4 * (cfg.n_max + 2));

  std::size_t pos = 0;
  const std::size_t size = text.size();
  while (pos < size) {
    while (pos < size && text[pos] == ' ') ++pos;
    if (pos >= size) break;
    const std::size_t start = pos;
    while (pos < size && text[pos] != ' ') ++pos;
    const std::string_view word = text.substr(start, pos - start);

    padded.clear();
    padded.push_back(U' ');
    std::size_t wp = 0;
    while (wp < word.size()) padded.push_back(util::decode_utf8(word, wp));
    padded.push_back(U' ');

    const std::size_t len = padded.size();
    for (std::uint32_t n = cfg.n_min; n <= cfg.n_max; ++n) {
      if (len >= n) {
        for (std::size_t i = 0; i + n <= len; ++i) {
          key.clear();
          for (std::size_t k = 0; k < n; ++k) util::encode_utf8(padded[i + k], key);
          fn(std::string_view(key));
        }
      } else {
        key.clear();
        for (char32_t cp : padded) util::encode_utf8(cp, key);
        fn(std::string_view(key));
      }
    }
  }
}

/// All n-grams of `text` in emission order (a multiset: duplicates kept).
std::vector<std::string> extract_ngrams(std::string_view text, const NGramConfig& cfg);

/// Binary presence feature vector: ids sorted ascending, unique.
struct FeatureSet {
  std::vector<std::uint32_t> present_ids;

  bool operator==(const FeatureSet&) const = default;
};

/// Immutable pruned n-gram vocabulary. Term ids are assigned in
/// lexicographic (bytewise UTF-8, equivalently code point) order.
class Vocabulary {
 public:
  /// `terms` must be lexicographically sorted and unique; ids become
  /// positions. Computes the fingerprint over the serialized stream.
  Vocabulary(std::vector<std::string> terms, NGramConfig config);

  const std::vector<std::string>& terms() const { return terms_; }
  const NGramConfig& config() const { return config_; }
  std::size_t size() const { return terms_.size(); }

  /// SHA-256 (lowercase hex) of serialize(): identifies (terms, config).
  const std::string& fingerprint() const { return fingerprint_; }

  std::optional<std::uint32_t> id_of(std::string_view term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Versioned byte stream: magic "MIRV", version, config, terms in id
  /// order as length-prefixed UTF-8.
  std::string serialize() const;

  /// Throws CorruptVocabulary on malformed input, UnsupportedVersion on a
  /// format version this build does not read.
  static Vocabulary deserialize(std::string_view bytes);

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> terms_;
  NGramConfig config_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> index_;
  std::string fingerprint_;
};

/// Builds the pruned vocabulary: document-frequency pruning at min_df, then
/// a max_features cap keeping the highest total-occurrence terms (ties to
/// the lexicographically smaller term). Throws EmptyVocabulary when nothing
/// survives.
Vocabulary build_vocabulary(const std::vector<std::string>& corpus, const NGramConfig& cfg);

/// Presence of vocabulary terms in `text`; counts discarded.
FeatureSet vectorize(std::string_view text, const Vocabulary& vocab);

}  // namespace mirrorgate::featurizer
