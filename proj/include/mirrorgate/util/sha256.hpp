#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace mirrorgate::util {

/// Incremental SHA-256 (FIPS 180-4). Self-contained so that content hashes
/// and artifact digests do not depend on system crypto library versions.
class Sha256 {
 public:
  Sha256() { reset(); }

  void reset();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }

  /// Finalizes and returns the 32-byte digest. The object must be reset()
  /// before further use.
  std::array<std::uint8_t, 32> finish();

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint64_t total_len_ = 0;
  std::uint8_t buffer_[64];
  std::size_t buffer_len_ = 0;
};

/// One-shot digest of a byte string.
std::array<std::uint8_t, 32> sha256(std::string_view data);

/// Lowercase hex encoding of an arbitrary byte digest.
std::string to_hex(const std::uint8_t* data, std::size_t len);
std::string to_hex(const std::array<std::uint8_t, 32>& digest);

/// One-shot lowercase hex digest, the form used in manifests.
std::string sha256_hex(std::string_view data);

}  // namespace mirrorgate::util
