#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mirrorgate::util {

constexpr char32_t kReplacementChar = 0xFFFD;

/// Decodes one code point starting at `pos`. Invalid or truncated sequences
/// yield U+FFFD and advance past the offending lead byte (and any continuation
/// bytes that belong to it), so decoding always terminates.
char32_t decode_utf8(std::string_view s, std::size_t& pos);

/// Appends the UTF-8 encoding of `cp` to `out`. Surrogates and out-of-range
/// values are encoded as U+FFFD.
void encode_utf8(char32_t cp, std::string& out);

/// Full decode with U+FFFD replacement for invalid sequences.
std::vector<char32_t> decode_utf8_string(std::string_view s);

std::string encode_utf8_string(const std::vector<char32_t>& cps);

/// Number of code points (replacement-decoded).
std::size_t count_codepoints(std::string_view s);

/// Longest prefix of `s` that is at most `max_bytes` long and ends on a
/// code point boundary. `s` must already be valid UTF-8.
std::string_view truncate_to_boundary(std::string_view s, std::size_t max_bytes);

}  // namespace mirrorgate::util
