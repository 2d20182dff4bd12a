#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mirrorgate/featurizer.hpp"
#include "mirrorgate/label.hpp"
#include "mirrorgate/textnorm.hpp"

namespace mirrorgate::artifact {

using mirrorgate::Label;
using mirrorgate::to_string;

/// Scoring outcome for one text. probability is the plain logistic of the
/// raw margin, clamped to the open interval (0, 1) so downstream log-odds
/// math never sees 0 or 1 exactly.
struct Verdict {
  double margin = 0.0;
  double probability = 0.5;
  Label label = Label::kBenign;
  double threshold = 0.0;
  std::uint32_t matched_feature_count = 0;
};

/// A static scoring table generated by compile_model() for build-time
/// embedding. Every pointer refers to arrays with static storage duration
/// in the generated translation unit; from_embedded() copies them into an
/// owning CompiledModel.
struct EmbeddedTable {
  const char* unicode_form;  // "nfc" or "nfkc"
  bool lowercase;
  bool collapse_whitespace;
  std::uint32_t max_bytes;

  std::uint32_t n_min;
  std::uint32_t n_max;
  std::uint32_t min_df;
  std::uint32_t max_features;
  bool binary;

  const char* vocab_fingerprint;
  const char* model_hash;

  double bias;
  std::uint64_t seed;

  std::uint32_t bucket_count;
  const std::uint32_t* d1;  // bucket_count entries
  const std::uint32_t* d2;  // bucket_count entries

  std::uint32_t entry_count;
  const unsigned char* term_bytes;    // concatenated term UTF-8
  const std::uint32_t* term_offsets;  // entry_count + 1 entries
  const std::uint32_t* ids;           // vocabulary id per slot
  const double* weights;              // weight per slot
};

struct CompileResult;

/// Immutable constant-time term→weight lookup plus the configuration needed
/// to reproduce the training-time view of a text. Lookup is a minimal
/// perfect hash (displacement/CHD construction): exactly one slot per
/// vocabulary term, resolved with one hash and one displacement fetch, then
/// confirmed by exact byte comparison so non-vocabulary terms map to absent.
///
/// Instances are immutable after construction and safe to share across
/// threads; score()/classify() are reentrant and lock-free.
class CompiledModel {
 public:
  const textnorm::NormConfig& norm_config() const { return norm_; }
  const featurizer::NGramConfig& ngram_config() const { return ngram_; }
  double bias() const { return bias_; }
  const std::string& vocab_fingerprint() const { return vocab_fingerprint_; }
  const std::string& model_hash() const { return model_hash_; }
  std::size_t size() const { return terms_.size(); }

  /// Exact lookup: the trained weight for a vocabulary term, absent for
  /// anything else.
  std::optional<double> weight_of(std::string_view term) const;

  /// Slot-resolved lookup used by the scoring path: returns the slot index
  /// holding `term`, or nullopt.
  std::optional<std::uint32_t> find_slot(std::string_view term) const;

  std::uint32_t id_at(std::uint32_t slot) const { return ids_[slot]; }
  double weight_at(std::uint32_t slot) const { return weights_[slot]; }
  const std::string& term_at(std::uint32_t slot) const { return terms_[slot]; }

 private:
  friend CompiledModel load_artifact(std::string_view bytes);
  friend CompiledModel from_embedded(const EmbeddedTable& table);
  friend CompileResult compile_model(std::string_view model_bytes,
                                     const featurizer::Vocabulary& vocab);

  CompiledModel() = default;
  void check_self_consistent() const;  // throws CorruptArtifact

  textnorm::NormConfig norm_;
  featurizer::NGramConfig ngram_;
  double bias_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint32_t> d1_;
  std::vector<std::uint32_t> d2_;
  std::vector<std::string> terms_;      // slot order
  std::vector<std::uint32_t> ids_;      // slot order
  std::vector<double> weights_;         // slot order
  std::string vocab_fingerprint_;
  std::string model_hash_;
};

struct CompileResult {
  std::string artifact_bytes;     // portable "MIRC" file contents
  std::string generated_source;   // static C++ table for build-time embedding
  std::string model_hash;         // SHA-256 hex of the input model bytes
};

/// Compiles serialized LinearModel bytes against the vocabulary that
/// trained it into (a) a portable binary artifact and (b) a generated
/// static source table. Deterministic: identical inputs give byte-identical
/// outputs. Throws CorruptModel on malformed model bytes, a vocabulary
/// fingerprint mismatch, or a weight-vector/vocabulary size mismatch.
CompileResult compile_model(std::string_view model_bytes,
                            const featurizer::Vocabulary& vocab);

/// Parses and fully validates a "MIRC" artifact: trailing SHA-256 integrity
/// digest, magic, version, configs, and perfect-hash self-consistency.
/// Throws CorruptArtifact (bad digest/magic/structure) or
/// UnsupportedVersion.
CompiledModel load_artifact(std::string_view bytes);

/// Builds a CompiledModel from a generated static table (the build-time
/// embedding path). Validates the same structural invariants as
/// load_artifact; throws CorruptArtifact if the table is inconsistent.
CompiledModel from_embedded(const EmbeddedTable& table);

/// Normalizes raw text with cm's NormConfig, enumerates word-boundary
/// n-grams with cm's NGramConfig, and computes
///   margin = bias + sum of weights of distinct in-vocabulary terms
/// (binary presence: duplicate occurrences count once). Summation runs in
/// vocabulary-id order, matching trainer::margin bit for bit. Total: never
/// throws on any input text.
Verdict score(const CompiledModel& cm, std::string_view raw_text,
              double threshold = 0.0);

/// label == kMalicious iff score(cm, raw_text).margin > threshold.
Label classify(const CompiledModel& cm, std::string_view raw_text,
               double threshold);

}  // namespace mirrorgate::artifact
