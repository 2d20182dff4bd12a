#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mirrorgate::textnorm {

enum class UnicodeForm : std::uint8_t { kNfc = 0, kNfkc = 1 };

/// Normalization contract applied identically at curation, training, and
/// inference time. Serialized into every manifest and artifact so a corpus
/// or model always records the exact text contract it was built under.
struct NormConfig {
  bool lowercase = true;
  UnicodeForm unicode_form = UnicodeForm::kNfkc;
  bool collapse_whitespace = true;
  std::uint32_t max_bytes = 65536;

  bool operator==(const NormConfig&) const = default;
};

/// Canonicalizes raw text: invalid UTF-8 is replaced with U+FFFD, code
/// points are folded through the configured Unicode form (with lowercasing
/// folded into the same fixpoint map when enabled), whitespace runs collapse
/// to single ASCII spaces, edges are trimmed, and the result is capped at
/// max_bytes on a code point boundary.
///
/// Total and idempotent: normalize(normalize(x)) == normalize(x).
std::string normalize(std::string_view raw, const NormConfig& cfg = {});

/// Whitespace classification used by the collapse step (frozen Unicode
/// table, exposed so tests and callers share one definition).
bool is_unicode_whitespace(char32_t cp);

const char* to_string(UnicodeForm f);
UnicodeForm unicode_form_from_string(std::string_view s);

}  // namespace mirrorgate::textnorm
