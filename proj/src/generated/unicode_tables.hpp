// Generated by tools/gen_unicode_tables.py -- do not edit.
// Unicode character database version: 13.0.0
#pragma once

#include <cstddef>
#include <cstdint>

namespace mirrorgate::unicode_tables {

inline constexpr const char* kUnicodeVersion = "13.0.0";

extern const std::uint32_t kFoldNfkcLowerKeys[];
extern const std::uint32_t kFoldNfkcLowerOffsets[];
extern const std::uint8_t kFoldNfkcLowerLens[];
extern const std::size_t kFoldNfkcLowerCount;

extern const std::uint32_t kFoldNfkcPlainKeys[];
extern const std::uint32_t kFoldNfkcPlainOffsets[];
extern const std::uint8_t kFoldNfkcPlainLens[];
extern const std::size_t kFoldNfkcPlainCount;

extern const std::uint32_t kFoldNfcLowerKeys[];
extern const std::uint32_t kFoldNfcLowerOffsets[];
extern const std::uint8_t kFoldNfcLowerLens[];
extern const std::size_t kFoldNfcLowerCount;

extern const std::uint32_t kFoldNfcPlainKeys[];
extern const std::uint32_t kFoldNfcPlainOffsets[];
extern const std::uint8_t kFoldNfcPlainLens[];
extern const std::size_t kFoldNfcPlainCount;

extern const std::uint32_t kNfdKeys[];
extern const std::uint32_t kNfdOffsets[];
extern const std::uint8_t kNfdLens[];
extern const std::size_t kNfdCount;

extern const std::uint64_t kComposeKeys[];
extern const std::uint32_t kComposeVals[];
extern const std::size_t kComposeCount;

extern const std::uint32_t kCccKeys[];
extern const std::uint8_t kCccVals[];
extern const std::size_t kCccCount;

extern const std::uint32_t kWhitespace[];
extern const std::size_t kWhitespaceCount;

extern const std::uint32_t kCpPool[];
extern const std::size_t kCpPoolSize;

}  // namespace mirrorgate::unicode_tables
