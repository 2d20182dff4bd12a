#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mirrorgate/errors.hpp"

namespace mirrorgate {

/// Binary classification target, shared by the corpus and scoring layers.
enum class Label : std::uint8_t { kBenign = 0, kMalicious = 1 };

inline const char* to_string(Label l) {
  return l == Label::kMalicious ? "malicious" : "benign";
}

inline Label label_from_string(std::string_view s) {
  if (s == "malicious") return Label::kMalicious;
  if (s == "benign") return Label::kBenign;
  throw InvalidSample("unknown label: " + std::string(s));
}

}  // namespace mirrorgate
