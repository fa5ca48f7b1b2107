#include "sda/cipher.hpp"

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

namespace sda {

namespace {

static_assert(crypto_shorthash_KEYBYTES == 16);
static_assert(crypto_shorthash_BYTES == SipHashSivCipher::kTagBytes);

using Tag = std::array<std::uint8_t, SipHashSivCipher::kTagBytes>;

Tag compute_tag(const Key128& key, std::span<const std::uint8_t> plaintext) {
  Bytes input;
  input.reserve(plaintext.size() + 1);
  input.push_back(0x00);
  input.insert(input.end(), plaintext.begin(), plaintext.end());
  Tag tag{};
  crypto_shorthash(tag.data(), input.data(), input.size(), key.data());
  return tag;
}

void apply_keystream(const Key128& key, const Tag& iv, std::span<std::uint8_t> data) {
  std::array<std::uint8_t, 1 + SipHashSivCipher::kTagBytes + 4> block_input{};
  block_input[0] = 0x01;
  std::copy(iv.begin(), iv.end(), block_input.begin() + 1);
  std::array<std::uint8_t, crypto_shorthash_BYTES> block{};
  for (std::size_t offset = 0, counter = 0; offset < data.size(); offset += block.size(), ++counter) {
    for (int i = 0; i < 4; ++i) {
      block_input[1 + iv.size() + static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(counter >> (24 - 8 * i));
    }
    crypto_shorthash(block.data(), block_input.data(), block_input.size(), key.data());
    for (std::size_t i = 0; i < block.size() && offset + i < data.size(); ++i) {
      data[offset + i] ^= block[i];
    }
  }
}

}  // namespace

SipHashSivCipher::SipHashSivCipher() {
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
}

Bytes SipHashSivCipher::encrypt(const Key128& key, std::span<const std::uint8_t> plaintext) const {
  const Tag tag = compute_tag(key, plaintext);
  Bytes out(kTagBytes + plaintext.size());
  std::copy(tag.begin(), tag.end(), out.begin());
  std::copy(plaintext.begin(), plaintext.end(), out.begin() + kTagBytes);
  apply_keystream(key, tag, std::span(out).subspan(kTagBytes));
  return out;
}

std::optional<Bytes> SipHashSivCipher::decrypt(const Key128& key,
                                               std::span<const std::uint8_t> ciphertext) const {
  if (ciphertext.size() < kTagBytes) return std::nullopt;
  Tag tag{};
  std::copy_n(ciphertext.begin(), kTagBytes, tag.begin());
  Bytes plain(ciphertext.begin() + kTagBytes, ciphertext.end());
  apply_keystream(key, tag, plain);
  const Tag expected = compute_tag(key, plain);
  if (sodium_memcmp(expected.data(), tag.data(), kTagBytes) != 0) return std::nullopt;
  return plain;
}

const CipherSuite& default_cipher() {
  static const SipHashSivCipher cipher;
  return cipher;
}

}  // namespace sda
