#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mirrorgate/label.hpp"
#include "mirrorgate/textnorm.hpp"

namespace mirrorgate::mirror {

// ---------------------------------------------------------------------------
// Cell topology: 8 attack reasons × 4 languages.

enum class ReasonCategory : std::uint8_t {
  kInstructionOverride = 0,
  kRoleplayJailbreak = 1,
  kMetaProbe = 2,
  kExfiltration = 3,
  kAdversarialSuffix = 4,
  kIndirectInjection = 5,
  kObfuscation = 6,
  kConstraintBypass = 7,
};
inline constexpr std::size_t kReasonCount = 8;
inline constexpr std::array<ReasonCategory, kReasonCount> kAllReasons = {
    ReasonCategory::kInstructionOverride, ReasonCategory::kRoleplayJailbreak,
    ReasonCategory::kMetaProbe,           ReasonCategory::kExfiltration,
    ReasonCategory::kAdversarialSuffix,   ReasonCategory::kIndirectInjection,
    ReasonCategory::kObfuscation,         ReasonCategory::kConstraintBypass,
};

const char* to_string(ReasonCategory r);
ReasonCategory reason_from_string(std::string_view s);  // throws InvalidSample

enum class Language : std::uint8_t { kEn = 0, kZh = 1, kAr = 2, kRu = 3 };
inline constexpr std::size_t kLanguageCount = 4;
inline constexpr std::array<Language, kLanguageCount> kAllLanguages = {
    Language::kEn, Language::kZh, Language::kAr, Language::kRu};

const char* to_string(Language l);
Language language_from_string(std::string_view s);  // throws InvalidSample

// ---------------------------------------------------------------------------
// Samples.

/// SHA-256 (lowercase hex) over the UTF-8 bytes of already-normalized text.
std::string content_hash(std::string_view normalized_text);

/// One corpus row. `reason` is the attack reason for malicious rows
/// (mandatory there) and the mirrored-cell assignment for benign rows
/// (optional: benign rows without one are background filler).
struct Sample {
  std::string id;
  std::string text;  // raw UTF-8; content_hash is over its normalized form
  Label label = Label::kBenign;
  Language language = Language::kEn;
  std::optional<ReasonCategory> reason;
  std::string source_id;
  std::string content_hash;  // lowercase hex
  bool content_safety_only = false;

  bool operator==(const Sample&) const = default;
};

/// Builds a validated Sample from one parsed JSON row: required fields
/// present and well-typed, enum names known, no unknown keys, and
/// content_hash (computed over normalize(text, norm); if the row carries
/// one it must match). Throws InvalidSample.
Sample make_sample(const nlohmann::json& row, const textnorm::NormConfig& norm);

nlohmann::ordered_json to_json(const Sample& s);

/// One Sample per line. Throws InvalidSample with the offending line number.
std::vector<Sample> load_samples_jsonl(std::string_view content,
                                       const textnorm::NormConfig& norm);
std::string save_samples_jsonl(const std::vector<Sample>& samples);

// ---------------------------------------------------------------------------
// Corpus spec.

enum class CellStatus : std::uint8_t { kOpen = 0, kClosed = 1, kAcceptedMiss = 2 };
const char* to_string(CellStatus s);
CellStatus cell_status_from_string(std::string_view s);  // throws SpecError

struct CellSpec {
  ReasonCategory reason = ReasonCategory::kInstructionOverride;
  Language language = Language::kEn;
  std::uint32_t quota_pos = 0;
  std::uint32_t quota_neg = 0;
  std::set<std::string> allowed_sources;
  // Spec annotation: kAcceptedMiss concedes the cell up front; a conceded
  // cell that nevertheless fills reports closed.
  CellStatus status = CellStatus::kOpen;
};

struct CorpusSpec {
  std::uint32_t format_version = 1;
  std::string spec_version;
  std::vector<CellSpec> cells;
};

CorpusSpec parse_corpus_spec(std::string_view json_text);  // throws SpecError
std::string serialize_corpus_spec(const CorpusSpec& spec);

// ---------------------------------------------------------------------------
// Routing.

enum class RouteKind : std::uint8_t {
  kCell = 0,
  kResidual = 1,
  kBackground = 2,
  kQuarantine = 3,
};
const char* to_string(RouteKind k);

struct Routing {
  RouteKind kind = RouteKind::kQuarantine;
  std::optional<std::pair<ReasonCategory, Language>> cell;
  std::string note;  // quarantine/residual reason, empty otherwise
};

// ---------------------------------------------------------------------------
// Manifest.

struct SplitInfo {
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t train_count = 0;
  std::uint32_t holdout_count = 0;
  std::string train_digest;
  std::string holdout_digest;
  std::vector<std::string> holdout_hashes;  // sorted ascending

  bool operator==(const SplitInfo&) const = default;
};

struct ManifestCell {
  ReasonCategory reason = ReasonCategory::kInstructionOverride;
  Language language = Language::kEn;
  std::uint32_t quota_pos = 0;
  std::uint32_t quota_neg = 0;
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
  CellStatus status = CellStatus::kOpen;

  bool operator==(const ManifestCell&) const = default;
};

struct CorpusManifest {
  std::uint32_t format_version = 1;
  std::string spec_version;
  textnorm::NormConfig norm_config;
  std::vector<ManifestCell> cells;  // spec order
  std::uint32_t residual = 0;
  std::uint32_t background = 0;
  std::uint32_t quarantine = 0;
  // Everything that entered the corpus pipeline and was not quarantined,
  // hex hashes sorted ascending per source: rebuilding from the same
  // sources and spec reproduces these sets exactly.
  std::map<std::string, std::vector<std::string>> source_hashes;
  std::optional<SplitInfo> split;

  bool operator==(const CorpusManifest&) const = default;
};

std::string serialize_manifest(const CorpusManifest& m);  // deterministic
CorpusManifest parse_manifest(std::string_view json_text);  // throws SpecError

// ---------------------------------------------------------------------------
// Corpus building.

struct CellFill {
  CellSpec spec;
  std::vector<Sample> pos;  // arrival order
  std::vector<Sample> neg;
};

/// Stateful single-writer routing pipeline over a fixed cell topology.
/// route() is a total function: every sample lands in exactly one of
/// cell/residual/background/quarantine, and fills only ever grow.
class CorpusBuilder {
 public:
  /// Throws SpecError on duplicate (reason, language) cells.
  CorpusBuilder(CorpusSpec spec, textnorm::NormConfig norm);

  /// Routes one validated sample; throws InvalidSample for rows missing the
  /// structural basics (empty id, source, or content hash).
  Routing route(const Sample& s);

  const CorpusSpec& spec() const { return spec_; }
  const std::vector<CellFill>& fills() const { return fills_; }
  const std::vector<Sample>& residual() const { return residual_; }
  const std::vector<Sample>& background() const { return background_; }
  const std::vector<Sample>& quarantine() const { return quarantine_; }

  /// All cell-placed samples: cells in spec order, positives before
  /// negatives, each in arrival order.
  std::vector<Sample> cell_corpus() const;

  /// Manifest of everything routed so far; pass the split record once the
  /// holdout is carved.
  CorpusManifest manifest(std::optional<SplitInfo> split = std::nullopt) const;

 private:
  CorpusSpec spec_;
  textnorm::NormConfig norm_;
  std::map<std::pair<std::uint8_t, std::uint8_t>, std::size_t> cell_index_;
  std::vector<CellFill> fills_;
  std::vector<Sample> residual_;
  std::vector<Sample> background_;
  std::vector<Sample> quarantine_;
  std::map<std::string, std::set<std::string>> source_hashes_;
};

// ---------------------------------------------------------------------------
// Splits.

struct Split {
  std::vector<Sample> train;
  std::vector<Sample> holdout;
  SplitInfo info;
};

/// Seeded stratified carve over (label, language, reason) strata: members
/// are hash-sorted, each stratum is shuffled on its own derived stream, and
/// round(fraction * stratum size), clamped to [1, size-1], go to the
/// holdout. Throws InvalidConfig (fraction outside (0,1)), LeakageError
/// (duplicate content hashes in the input), StratumTooSmall (a nonempty
/// stratum with fewer than 2 members, named in the message).
Split carve_holdout(const std::vector<Sample>& corpus, double fraction,
                    std::uint64_t seed);

/// Sorted content hashes present in both sets (empty means disjoint).
std::vector<std::string> intersection_hashes(const std::vector<Sample>& a,
                                             const std::vector<Sample>& b);

/// Throws LeakageError listing every offending hash unless the two sets are
/// content-hash disjoint.
void assert_disjoint(const std::vector<Sample>& train,
                     const std::vector<Sample>& holdout);

/// Digest of a hash set: sorted ascending, newline-joined, SHA-256 hex.
std::string hash_set_digest(std::vector<std::string> hashes);

// ---------------------------------------------------------------------------
// Coverage.

struct CoverageCell {
  ReasonCategory reason = ReasonCategory::kInstructionOverride;
  Language language = Language::kEn;
  bool in_spec = false;
  std::uint32_t quota_pos = 0;
  std::uint32_t quota_neg = 0;
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
  CellStatus status = CellStatus::kOpen;
};

struct CoverageReport {
  std::array<CoverageCell, kReasonCount * kLanguageCount> cells;  // reason-major
  std::uint32_t closed = 0;
  std::uint32_t open = 0;
  std::uint32_t accepted_miss = 0;
  bool degenerate = false;  // every specified quota is zero
  std::string summary;      // e.g. "31/32 closed, 1 open"
};

/// Occupancy over the full 8×4 topology. Cells absent from the manifest
/// report open with zero quotas.
CoverageReport coverage_matrix(const CorpusManifest& m);

/// Text rendering of the coverage grid (languages across, reasons down).
std::string render(const CoverageReport& report);

// ---------------------------------------------------------------------------
// Blends.

/// Seeded sample without replacement: round(target_size * m / (m + nm))
/// from the mirror pool, the complement from the non-mirror pool, output
/// order shuffled deterministically. Throws InvalidConfig (both ratio
/// components zero) and PoolExhausted (with the deficit count).
std::vector<Sample> mix_blend(const std::vector<Sample>& mirror_pool,
                              const std::vector<Sample>& nonmirror_pool,
                              std::uint32_t ratio_m, std::uint32_t ratio_nm,
                              std::uint64_t seed, std::size_t target_size);

}  // namespace mirrorgate::mirror
