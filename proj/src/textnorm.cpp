#include "mirrorgate/textnorm.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mirrorgate/util/utf8.hpp"
#include "generated/unicode_tables.hpp"

namespace mirrorgate::textnorm {

namespace tables = mirrorgate::unicode_tables;

namespace {

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19;
constexpr int kHangulVCount = 21;
constexpr int kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

int table_index(const std::uint32_t* keys, std::size_t count, char32_t cp) {
  const std::uint32_t* end = keys + count;
  const std::uint32_t* it = std::lower_bound(keys, end, std::uint32_t(cp));
  if (it != end && *it == std::uint32_t(cp)) {
    return static_cast<int>(it - keys);
  }
  return -1;
}

std::uint8_t combining_class(char32_t cp) {
  int i = table_index(tables::kCccKeys, tables::kCccCount, cp);
  return i < 0 ? 0 : tables::kCccVals[i];
}

struct FoldTable {
  const std::uint32_t* keys;
  const std::uint32_t* offsets;
  const std::uint8_t* lens;
  std::size_t count;
};

FoldTable select_fold_table(const NormConfig& cfg) {
  if (cfg.unicode_form == UnicodeForm::kNfkc) {
    if (cfg.lowercase) {
      return {tables::kFoldNfkcLowerKeys, tables::kFoldNfkcLowerOffsets,
              tables::kFoldNfkcLowerLens, tables::kFoldNfkcLowerCount};
    }
    return {tables::kFoldNfkcPlainKeys, tables::kFoldNfkcPlainOffsets,
            tables::kFoldNfkcPlainLens, tables::kFoldNfkcPlainCount};
  }
  if (cfg.lowercase) {
    return {tables::kFoldNfcLowerKeys, tables::kFoldNfcLowerOffsets,
            tables::kFoldNfcLowerLens, tables::kFoldNfcLowerCount};
  }
  return {tables::kFoldNfcPlainKeys, tables::kFoldNfcPlainOffsets,
          tables::kFoldNfcPlainLens, tables::kFoldNfcPlainCount};
}

void canonical_decompose(char32_t cp, std::vector<char32_t>& out) {
  if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
    const int s = static_cast<int>(cp - kHangulSBase);
    out.push_back(kHangulLBase + s / kHangulNCount);
    out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
    const int t = s % kHangulTCount;
    if (t > 0) {
      out.push_back(kHangulTBase + t);
    }
    return;
  }
  int i = table_index(tables::kNfdKeys, tables::kNfdCount, cp);
  if (i < 0) {
    out.push_back(cp);
    return;
  }
  const std::uint32_t off = tables::kNfdOffsets[i];
  for (std::uint8_t k = 0; k < tables::kNfdLens[i]; ++k) {
    out.push_back(tables::kCpPool[off + k]);
  }
}

/// Canonical ordering: stable bubble of combining marks by ccc (UAX #15).
void canonical_reorder(std::vector<char32_t>& cps) {
  for (std::size_t i = 1; i < cps.size(); ++i) {
    const std::uint8_t cc = combining_class(cps[i]);
    if (cc == 0) continue;
    std::size_t j = i;
    while (j > 0 && combining_class(cps[j - 1]) > cc) {
      std::swap(cps[j - 1], cps[j]);
      --j;
    }
  }
}

char32_t compose_pair(char32_t a, char32_t b) {
  // Hangul LV / LVT composition.
  if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount &&
      b >= kHangulVBase && b < kHangulVBase + kHangulVCount) {
    const int l = static_cast<int>(a - kHangulLBase);
    const int v = static_cast<int>(b - kHangulVBase);
    return kHangulSBase + (l * kHangulVCount + v) * kHangulTCount;
  }
  if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount &&
      (a - kHangulSBase) % kHangulTCount == 0 && b > kHangulTBase &&
      b < kHangulTBase + kHangulTCount) {
    return a + (b - kHangulTBase);
  }

  const std::uint64_t key = (std::uint64_t(a) << 32) | std::uint64_t(b);
  const std::uint64_t* end = tables::kComposeKeys + tables::kComposeCount;
  const std::uint64_t* it = std::lower_bound(tables::kComposeKeys, end, key);
  if (it != end && *it == key) {
    return tables::kComposeVals[it - tables::kComposeKeys];
  }
  return 0;
}

/// Canonical composition over a decomposed, reordered buffer (UAX #15).
/// A character combines with the last starter when it directly follows it,
/// or when it is a mark not blocked by an equal-or-higher combining class.
void canonical_compose(std::vector<char32_t>& cps) {
  constexpr std::size_t kNone = std::size_t(-1);
  std::vector<char32_t> out;
  out.reserve(cps.size());
  std::size_t starter = kNone;
  std::uint8_t last_cc = 0;

  for (char32_t cp : cps) {
    const std::uint8_t cc = combining_class(cp);
    const bool adjacent = starter != kNone && out.size() == starter + 1;
    if (starter != kNone && (adjacent || (cc != 0 && last_cc < cc))) {
      if (char32_t comp = compose_pair(out[starter], cp); comp != 0) {
        out[starter] = comp;
        continue;  // absorbed; last_cc intentionally unchanged
      }
    }
    out.push_back(cp);
    if (cc == 0) {
      starter = out.size() - 1;
      last_cc = 0;
    } else {
      last_cc = cc;
    }
  }
  cps = std::move(out);
}

}  // namespace

bool is_unicode_whitespace(char32_t cp) {
  return table_index(tables::kWhitespace, tables::kWhitespaceCount, cp) >= 0;
}

std::string normalize(std::string_view raw, const NormConfig& cfg) {
  // 1. Decode with U+FFFD replacement.
  std::vector<char32_t> cps = util::decode_utf8_string(raw);

  // 2. Per-codepoint fold (compatibility folding and case folding together,
  //    precomputed to a fixpoint so re-normalizing cannot change anything).
  const FoldTable fold = select_fold_table(cfg);
  std::vector<char32_t> folded;
  folded.reserve(cps.size());
  for (char32_t cp : cps) {
    int i = table_index(fold.keys, fold.count, cp);
    if (i < 0) {
      folded.push_back(cp);
    } else {
      const std::uint32_t off = fold.offsets[i];
      for (std::uint8_t k = 0; k < fold.lens[i]; ++k) {
        folded.push_back(tables::kCpPool[off + k]);
      }
    }
  }

  // 3. Full canonical pass: decompose, reorder marks, recompose. Together
  //    with step 2 this yields the configured normal form for the whole
  //    string, not just per code point.
  std::vector<char32_t> decomposed;
  decomposed.reserve(folded.size() + 8);
  for (char32_t cp : folded) {
    canonical_decompose(cp, decomposed);
  }
  canonical_reorder(decomposed);
  canonical_compose(decomposed);

  // 4. Whitespace handling.
  std::vector<char32_t> spaced;
  spaced.reserve(decomposed.size());
  if (cfg.collapse_whitespace) {
    bool in_run = false;
    for (char32_t cp : decomposed) {
      if (is_unicode_whitespace(cp)) {
        in_run = true;
        continue;
      }
      if (in_run && !spaced.empty()) {
        spaced.push_back(U' ');
      }
      in_run = false;
      spaced.push_back(cp);
    }
    // trailing run dropped: that is the trim
  } else {
    std::size_t begin = 0, end = decomposed.size();
    while (begin < end && is_unicode_whitespace(decomposed[begin])) ++begin;
    while (end > begin && is_unicode_whitespace(decomposed[end - 1])) --end;
    spaced.assign(decomposed.begin() + begin, decomposed.begin() + end);
  }

  // 5. Encode and cap. Truncation can expose a trailing space; trim again.
  std::string encoded = util::encode_utf8_string(spaced);
  std::string_view capped = util::truncate_to_boundary(encoded, cfg.max_bytes);
  while (!capped.empty()) {
    std::size_t len = capped.size();
    std::size_t last = len - 1;
    while (last > 0 && (static_cast<std::uint8_t>(capped[last]) & 0xC0) == 0x80) {
      --last;
    }
    std::size_t pos = last;
    char32_t cp = util::decode_utf8(capped, pos);
    if (!is_unicode_whitespace(cp)) break;
    capped = capped.substr(0, last);
  }
  return std::string(capped);
}

const char* to_string(UnicodeForm f) {
  return f == UnicodeForm::kNfkc ? "nfkc" : "nfc";
}

UnicodeForm unicode_form_from_string(std::string_view s) {
  if (s == "nfkc" || s == "NFKC") return UnicodeForm::kNfkc;
  if (s == "nfc" || s == "NFC") return UnicodeForm::kNfc;
  throw std::invalid_argument("unknown unicode form: " + std::string(s));
}

}  // namespace mirrorgate::textnorm
