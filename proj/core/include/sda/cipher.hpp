#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sda {

using Bytes = std::vector<std::uint8_t>;
using Key128 = std::array<std::uint8_t, 16>;

/// Authenticated symmetric encryption used by the key protocol. decrypt must
/// return std::nullopt for ciphertexts not produced under the same key.
class CipherSuite {
 public:
  virtual ~CipherSuite() = default;
  [[nodiscard]] virtual Bytes encrypt(const Key128& key, std::span<const std::uint8_t> plaintext) const = 0;
  [[nodiscard]] virtual std::optional<Bytes> decrypt(const Key128& key,
                                                     std::span<const std::uint8_t> ciphertext) const = 0;
};

/// Deterministic SIV construction over keyed SipHash-2-4 (libsodium
/// crypto_shorthash): an 8-byte tag over the plaintext doubles as the IV of a
/// SipHash counter-mode keystream. Layout: tag(8) || body.
class SipHashSivCipher final : public CipherSuite {
 public:
  static constexpr std::size_t kTagBytes = 8;

  SipHashSivCipher();
  [[nodiscard]] Bytes encrypt(const Key128& key, std::span<const std::uint8_t> plaintext) const override;
  [[nodiscard]] std::optional<Bytes> decrypt(const Key128& key,
                                             std::span<const std::uint8_t> ciphertext) const override;
};

/// Process-wide default suite.
const CipherSuite& default_cipher();

}  // namespace sda
