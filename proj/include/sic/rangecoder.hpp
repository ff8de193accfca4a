#pragma once

// Renormalizing range coder over 16-bit cumulative frequency tables.
// 64-bit range, byte-wise output, carries rippled directly into the emitted
// byte string, 8-byte flush. Bit-exact: the state-update rules are frozen
// in docs/format.md and golden streams pin them.

#include <cstdint>
#include <vector>

#include "sic/gaussian.hpp"
#include "sic/types.hpp"

namespace sic::coding {

// Octet payload produced by one coder flush cycle.
struct RangeCoderStream {
  std::vector<std::uint8_t> bytes;
};

class RangeEncoder {
 public:
  static constexpr std::uint64_t kTopThreshold = 1ull << 56;

  // cum/freq from a table with total exactly QuantizedGaussian::kFreqTotal.
  void encode(std::uint32_t cum, std::uint32_t freq);
  // Flushes the final interval; the encoder cannot be reused afterwards.
  RangeCoderStream finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint64_t range_ = ~0ull;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(const std::vector<std::uint8_t>& bytes);

  // Current cumulative-frequency slot in [0, kFreqTotal).
  std::uint32_t decode_freq();
  // Consume the symbol whose table entry is (cum, freq).
  void decode_update(std::uint32_t cum, std::uint32_t freq);

  std::size_t bytes_consumed() const { return pos_; }
  bool fully_consumed() const { return pos_ == bytes_->size(); }

 private:
  std::uint8_t next_byte();

  const std::vector<std::uint8_t>* bytes_;
  std::size_t pos_ = 0;
  std::uint64_t code_ = 0;
  std::uint64_t range_ = ~0ull;
};

// Strict-mode symbol coding: one QuantizedGaussian per symbol, out-of-range
// symbols are an error naming the offending position.
RangeCoderStream encode_symbols(const std::vector<int>& symbols,
                                const std::vector<QuantizedGaussian>& models);
// Exact inverse; throws InputError on truncated or trailing-garbage streams.
std::vector<int> decode_symbols(const RangeCoderStream& stream,
                                const std::vector<QuantizedGaussian>& models);

// Sum of -log2 pmf over the sequence: the codelength the coder budgets for.
double ideal_bits(const std::vector<int>& symbols,
                  const std::vector<QuantizedGaussian>& models);

}  // namespace sic::coding
