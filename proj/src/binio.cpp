#include "binio.hpp"

#include <array>

namespace commrec::binio {

namespace {

std::array<uint64_t, 256> make_crc64_table() {
  // Reflected form of the ECMA-182 polynomial.
  constexpr uint64_t poly = 0xC96C5795D7870F42ULL;
  std::array<uint64_t, 256> table{};
  for (uint64_t i = 0; i < 256; ++i) {
    uint64_t crc = i;
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 1) ? (crc >> 1) ^ poly : crc >> 1;
    }
    table[i] = crc;
  }
  return table;
}

}  // namespace

uint64_t crc64(const void* data, size_t len) {
  static const std::array<uint64_t, 256> table = make_crc64_table();
  const auto* bytes = static_cast<const unsigned char*>(data);
  uint64_t crc = ~0ULL;
  for (size_t i = 0; i < len; ++i) {
    crc = table[(crc ^ bytes[i]) & 0xFF] ^ (crc >> 8);
  }
  return ~crc;
}

}  // namespace commrec::binio
