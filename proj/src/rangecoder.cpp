#include "sic/rangecoder.hpp"

#include <cassert>
#include <string>

namespace sic::coding {

void RangeEncoder::shift_low() {
  out_.push_back(static_cast<std::uint8_t>(low_ >> 56));
  low_ <<= 8;
}

void RangeEncoder::encode(std::uint32_t cum, std::uint32_t freq) {
  assert(freq > 0 && cum + freq <= QuantizedGaussian::kFreqTotal);
  const std::uint64_t r = range_ >> QuantizedGaussian::kFreqBits;
  const std::uint64_t add = r * cum;
  const std::uint64_t nl = low_ + add;
  if (nl < low_) {
    // carry: the retired byte string is the high part of the virtual low;
    // increment it as a little-endian-ripple from the back. The interval
    // invariant (virtual low + range <= 2^(64+8k)) bounds the ripple.
    std::size_t i = out_.size();
    while (i > 0) {
      if (++out_[--i] != 0) break;
      assert(i > 0);
    }
  }
  low_ = nl;
  range_ = r * freq;
  while (range_ < kTopThreshold) {
    shift_low();
    range_ <<= 8;
  }
}

RangeCoderStream RangeEncoder::finish() {
  for (int i = 0; i < 8; ++i) shift_low();
  RangeCoderStream s;
  s.bytes = std::move(out_);
  return s;
}

RangeDecoder::RangeDecoder(const std::vector<std::uint8_t>& bytes) : bytes_(&bytes) {
  for (int i = 0; i < 8; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
  if (pos_ >= bytes_->size())
    throw InputError("range decoder: truncated stream (needed byte " +
                     std::to_string(pos_) + ", have " +
                     std::to_string(bytes_->size()) + ")");
  return (*bytes_)[pos_++];
}

std::uint32_t RangeDecoder::decode_freq() {
  const std::uint64_t r = range_ >> QuantizedGaussian::kFreqBits;
  const std::uint64_t df = code_ / r;
  if (df >= QuantizedGaussian::kFreqTotal)
    throw InputError("range decoder: corrupt stream (cumulative slot overflow)");
  return static_cast<std::uint32_t>(df);
}

void RangeDecoder::decode_update(std::uint32_t cum, std::uint32_t freq) {
  const std::uint64_t r = range_ >> QuantizedGaussian::kFreqBits;
  code_ -= r * cum;
  range_ = r * freq;
  if (code_ >= range_)
    throw InputError("range decoder: corrupt stream (code outside symbol interval)");
  while (range_ < RangeEncoder::kTopThreshold) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
}

RangeCoderStream encode_symbols(const std::vector<int>& symbols,
                                const std::vector<QuantizedGaussian>& models) {
  if (symbols.size() != models.size())
    throw InputError("encode_symbols: " + std::to_string(symbols.size()) +
                     " symbols but " + std::to_string(models.size()) + " models");
  RangeEncoder enc;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const auto& m = models[i];
    if (!m.in_range(symbols[i]))
      throw InputError("encode_symbols: symbol " + std::to_string(symbols[i]) +
                       " at position " + std::to_string(i) + " outside [" +
                       std::to_string(m.symbol_min()) + ", " +
                       std::to_string(m.symbol_max()) + "]");
    enc.encode(m.cum_freq(symbols[i]), m.freq(symbols[i]));
  }
  return enc.finish();
}

std::vector<int> decode_symbols(const RangeCoderStream& stream,
                                const std::vector<QuantizedGaussian>& models) {
  RangeDecoder dec(stream.bytes);
  std::vector<int> symbols;
  symbols.reserve(models.size());
  for (const auto& m : models) {
    const std::uint32_t df = dec.decode_freq();
    const int s = m.symbol_from_cum(df);
    dec.decode_update(m.cum_freq(s), m.freq(s));
    symbols.push_back(s);
  }
  if (!dec.fully_consumed())
    throw InputError("decode_symbols: " +
                     std::to_string(stream.bytes.size() - dec.bytes_consumed()) +
                     " trailing bytes after the last symbol");
  return symbols;
}

double ideal_bits(const std::vector<int>& symbols,
                  const std::vector<QuantizedGaussian>& models) {
  if (symbols.size() != models.size())
    throw InputError("ideal_bits: length mismatch");
  double bits = 0.0;
  for (std::size_t i = 0; i < symbols.size(); ++i) bits += models[i].bits(symbols[i]);
  return bits;
}

}  // namespace sic::coding
