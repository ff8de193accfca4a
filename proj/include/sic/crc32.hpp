#pragma once

// CRC-32 (IEEE 802.3, polynomial 0xEDB88320, init/final-xor 0xFFFFFFFF),
// the same checksum zlib computes. Used by the bitstream container.

#include <cstddef>
#include <cstdint>

namespace sic {

inline std::uint32_t crc32(const std::uint8_t* data, std::size_t len,
                           std::uint32_t crc = 0) {
  static const auto table = [] {
    struct Table {
      std::uint32_t t[256];
    } tab{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      tab.t[i] = c;
    }
    return tab;
  }();
  crc ^= 0xFFFFFFFFu;
  for (std::size_t i = 0; i < len; ++i)
    crc = table.t[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

}  // namespace sic
