#include "sic/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "sic/crc32.hpp"
#include "sic/rangecoder.hpp"
#include "sic/rng.hpp"

namespace sic::codec {

namespace {

constexpr char kMagic[4] = {'S', 'I', 'C', '1'};
constexpr std::size_t kHeaderSize = 22;

void put_u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
  v.push_back(static_cast<std::uint8_t>(x & 0xFF));
  v.push_back(static_cast<std::uint8_t>(x >> 8));
}
void put_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) v.push_back(static_cast<std::uint8_t>((x >> (8 * i)) & 0xFF));
}
void put_u64(std::vector<std::uint8_t>& v, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) v.push_back(static_cast<std::uint8_t>((x >> (8 * i)) & 0xFF));
}
std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t x = 0;
  for (int i = 7; i >= 0; --i) x = (x << 8) | p[i];
  return x;
}

struct ParsedStream {
  SicHeader header;
  // [offset, length) of each segment payload inside the stream
  std::vector<std::pair<std::size_t, std::size_t>> segments;
};

ParsedStream parse_stream(const std::vector<std::uint8_t>& s) {
  if (s.size() < kHeaderSize + 4) throw InputError("sic stream: too short");
  if (std::memcmp(s.data(), kMagic, 4) != 0) throw InputError("sic stream: bad magic");
  ParsedStream out;
  const std::uint8_t version = s[4];
  if (version != SicHeader::kVersion)
    throw InputError("sic stream: unsupported version " + std::to_string(version));
  const std::uint8_t rng_id = s[5];
  if (rng_id != SicHeader::kRngId)
    throw InputError("sic stream: unknown rng id " + std::to_string(rng_id));
  out.header.channels = get_u16(s.data() + 6);
  out.header.height = get_u16(s.data() + 8);
  out.header.width = get_u16(s.data() + 10);
  out.header.levels = s[12];
  out.header.coded_levels = s[13];
  out.header.seed = get_u64(s.data() + 14);
  if (out.header.levels == 0 || out.header.coded_levels > out.header.levels)
    throw InputError("sic stream: invalid level counts");

  const std::uint32_t stored_crc = get_u32(s.data() + s.size() - 4);
  const std::uint32_t actual_crc = crc32(s.data(), s.size() - 4);
  if (stored_crc != actual_crc) throw InputError("sic stream: CRC mismatch");

  std::size_t pos = kHeaderSize;
  for (std::size_t k = 0; k < out.header.coded_levels; ++k) {
    if (pos + 4 > s.size() - 4) throw InputError("sic stream: truncated segment table");
    const std::uint32_t len = get_u32(s.data() + pos);
    pos += 4;
    if (pos + len > s.size() - 4)
      throw InputError("sic stream: segment " + std::to_string(k) + " truncated");
    out.segments.emplace_back(pos, len);
    pos += len;
  }
  if (pos != s.size() - 4) throw InputError("sic stream: trailing bytes after segments");
  return out;
}

void check_model_dims(const LatentTensor& t, const ContextModel& m) {
  if (t.channels != m.partition().channels)
    throw InputError("codec: latent has " + std::to_string(t.channels) +
                     " channels, model expects " +
                     std::to_string(m.partition().channels));
  if (t.channels == 0 || t.height == 0 || t.width == 0)
    throw InputError("codec: empty latent");
  if (t.channels > 0xFFFF || t.height > 0xFFFF || t.width > 0xFFFF)
    throw InputError("codec: dims exceed header field width");
}

}  // namespace

LevelPartition partition_levels(std::size_t channels, std::size_t levels) {
  if (levels < 1 || channels < levels)
    throw InputError("partition_levels: need channels >= levels >= 1");
  if (channels % levels != 0)
    throw InputError("partition_levels: " + std::to_string(channels) +
                     " channels not divisible into " + std::to_string(levels) +
                     " levels");
  return LevelPartition{channels, levels, channels / levels};
}

ContextModel::ContextModel(LevelPartition part, int symbol_min, int symbol_max,
                           std::vector<GroupMode> group_mode, std::vector<double> mu,
                           std::vector<double> sigma, std::vector<double> mu_eps)
    : part_(part),
      symbol_min_(symbol_min),
      symbol_max_(symbol_max),
      group_mode_(std::move(group_mode)),
      mu_(std::move(mu)),
      sigma_(std::move(sigma)),
      mu_eps_(std::move(mu_eps)) {
  if (symbol_min_ >= symbol_max_) throw InputError("context model: bad symbol range");
  const std::size_t c = part_.channels;
  if (group_mode_.size() != part_.levels)
    throw InputError("context model: one mode per group required");
  if (mu_.size() != c || sigma_.size() != c || mu_eps_.size() != c)
    throw InputError("context model: per-channel tables must have length C");
  static_cache_.resize(c);
  for (std::size_t ch = 0; ch < c; ++ch)
    if (group_mode_[part_.group_of(ch)] == GroupMode::kStatic)
      static_cache_[ch] = std::make_unique<coding::QuantizedGaussian>(
          mu_[ch], sigma_[ch], symbol_min_, symbol_max_);
}

bool ContextModel::mask_visible(std::size_t c, std::size_t src, int dy, int dx) const {
  if (std::abs(dy) > kReach || std::abs(dx) > kReach) return false;
  const std::size_t gc = part_.group_of(c), gs = part_.group_of(src);
  if (gs < gc) return true;                      // previously coded group: full window
  if (gs > gc) return false;                     // later group: nothing
  if (src < c) return true;                      // earlier channel, same group
  if (src > c) return false;
  return dy < 0 || (dy == 0 && dx < 0);          // same channel: strictly raster-before
}

void ContextModel::validate_linear_mask(const std::vector<double>& w,
                                        const char* what) const {
  const std::size_t c_count = part_.channels;
  if (w.size() != c_count * c_count * kWindow * kWindow)
    throw InputError(std::string("context model: ") + what + " has wrong size");
  for (std::size_t c = 0; c < c_count; ++c)
    for (std::size_t src = 0; src < c_count; ++src)
      for (int dy = -kReach; dy <= kReach; ++dy)
        for (int dx = -kReach; dx <= kReach; ++dx) {
          const std::size_t i =
              ((c * c_count + src) * kWindow + (dy + kReach)) * kWindow + (dx + kReach);
          if (!mask_visible(c, src, dy, dx) && w[i] != 0.0)
            throw InputError(std::string("context model: ") + what +
                             " has nonzero weight on a masked-out position (c=" +
                             std::to_string(c) + ", src=" + std::to_string(src) +
                             ", dy=" + std::to_string(dy) + ", dx=" +
                             std::to_string(dx) + ")");
        }
}

void ContextModel::set_linear(std::vector<double> w_mu, std::vector<double> w_log_sigma,
                              std::vector<double> bias_mu,
                              std::vector<double> bias_log_sigma) {
  validate_linear_mask(w_mu, "w_mu");
  validate_linear_mask(w_log_sigma, "w_log_sigma");
  if (bias_mu.size() != part_.channels || bias_log_sigma.size() != part_.channels)
    throw InputError("context model: linear biases must have length C");
  w_mu_ = std::move(w_mu);
  w_ls_ = std::move(w_log_sigma);
  bias_mu_ = std::move(bias_mu);
  bias_ls_ = std::move(bias_log_sigma);
  has_linear_ = true;
}

void ContextModel::set_detail_linear(std::vector<double> w_detail) {
  const std::size_t c_count = part_.channels;
  if (w_detail.size() != c_count * c_count * kWindow * kWindow)
    throw InputError("context model: w_detail has wrong size");
  // detail sources must come from strictly earlier groups
  for (std::size_t c = 0; c < c_count; ++c)
    for (std::size_t src = 0; src < c_count; ++src)
      if (part_.group_of(src) >= part_.group_of(c))
        for (int i = 0; i < kWindow * kWindow; ++i)
          if (w_detail[(c * c_count + src) * kWindow * kWindow + i] != 0.0)
            throw InputError(
                "context model: w_detail reads a non-prior group (c=" +
                std::to_string(c) + ", src=" + std::to_string(src) + ")");
  w_detail_ = std::move(w_detail);
  has_detail_linear_ = true;
}

const coding::QuantizedGaussian& ContextModel::static_model(std::size_t c) const {
  if (!static_cache_[c])
    throw InputError("context model: channel " + std::to_string(c) +
                     " is not in a static group");
  return *static_cache_[c];
}

GaussianParams context_predict(const LatentTensor& latent, std::size_t level,
                               std::size_t c, std::size_t y, std::size_t x,
                               const ContextModel& model) {
  const auto& part = model.partition();
  if (c >= latent.channels || y >= latent.height || x >= latent.width)
    throw std::out_of_range("context_predict: position out of bounds");
  if (part.group_of(c) != level)
    throw InputError("context_predict: channel " + std::to_string(c) +
                     " is not in level " + std::to_string(level));

  if (model.mode(level) == GroupMode::kStatic) {
    return GaussianParams{model.static_mu(c),
                          std::max(model.static_sigma(c),
                                   coding::QuantizedGaussian::kSigmaFloor)};
  }
  if (!model.has_linear())
    throw InputError("context_predict: linear group without linear weights");

  constexpr int kW = ContextModel::kWindow;
  constexpr int kR = ContextModel::kReach;
  const std::size_t c_count = part.channels;
  double mu = model.bias_mu()[c];
  double ls = model.bias_log_sigma()[c];
  // sources beyond the current group carry zero weight by construction
  const std::size_t src_end = std::min(c_count, (level + 1) * part.group_size);
  for (std::size_t src = 0; src < src_end; ++src) {
    const std::size_t base = (c * c_count + src) * kW * kW;
    for (int dy = -kR; dy <= kR; ++dy) {
      const long sy = static_cast<long>(y) + dy;
      if (sy < 0 || sy >= static_cast<long>(latent.height)) continue;
      for (int dx = -kR; dx <= kR; ++dx) {
        const long sx = static_cast<long>(x) + dx;
        if (sx < 0 || sx >= static_cast<long>(latent.width)) continue;
        if (!model.mask_visible(c, src, dy, dx)) continue;
        const std::size_t wi = base + (dy + kR) * kW + (dx + kR);
        const double v = latent.at(src, sy, sx);
        mu += model.w_mu()[wi] * v;
        ls += model.w_log_sigma()[wi] * v;
      }
    }
  }
  return GaussianParams{mu, std::max(std::exp(ls), coding::QuantizedGaussian::kSigmaFloor)};
}

double detail_mu(const LatentTensor& latent, std::size_t coded_levels, std::size_t c,
                 std::size_t y, std::size_t x, const ContextModel& model) {
  double mu = model.mu_eps(c);
  if (!model.has_detail_linear()) return mu;
  constexpr int kW = ContextModel::kWindow;
  constexpr int kR = ContextModel::kReach;
  const auto& part = model.partition();
  const std::size_t src_end = std::min(part.channels, coded_levels * part.group_size);
  for (std::size_t src = 0; src < src_end; ++src) {
    const std::size_t base = (c * part.channels + src) * kW * kW;
    for (int dy = -kR; dy <= kR; ++dy) {
      const long sy = static_cast<long>(y) + dy;
      if (sy < 0 || sy >= static_cast<long>(latent.height)) continue;
      for (int dx = -kR; dx <= kR; ++dx) {
        const long sx = static_cast<long>(x) + dx;
        if (sx < 0 || sx >= static_cast<long>(latent.width)) continue;
        mu += model.w_detail()[base + (dy + kR) * kW + (dx + kR)] *
              latent.at(src, sy, sx);
      }
    }
  }
  return mu;
}

std::int32_t sample_detail(double mu_eps, std::uint64_t seed, std::size_t level,
                           std::size_t c, std::size_t y, std::size_t x,
                           std::uint64_t j) {
  const std::uint64_t key = rng::detail_key(seed, level, c, y, x, j);
  const double u = rng::uniform_m2_2(key);
  return static_cast<std::int32_t>(std::round(mu_eps + u));
}

std::vector<std::uint8_t> encode_progressive(const LatentTensor& latent,
                                             std::size_t coded_levels,
                                             const ContextModel& model,
                                             std::uint64_t seed) {
  check_model_dims(latent, model);
  const auto& part = model.partition();
  if (coded_levels < 1 || coded_levels > part.levels)
    throw InputError("encode_progressive: coded_levels must be in [1, L]");

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(SicHeader::kVersion);
  out.push_back(SicHeader::kRngId);
  put_u16(out, static_cast<std::uint16_t>(latent.channels));
  put_u16(out, static_cast<std::uint16_t>(latent.height));
  put_u16(out, static_cast<std::uint16_t>(latent.width));
  out.push_back(static_cast<std::uint8_t>(part.levels));
  out.push_back(static_cast<std::uint8_t>(coded_levels));
  put_u64(out, seed);

  for (std::size_t level = 0; level < coded_levels; ++level) {
    coding::RangeEncoder enc;
    for (std::size_t c = part.first_channel(level); c < part.first_channel(level + 1);
         ++c)
      for (std::size_t y = 0; y < latent.height; ++y)
        for (std::size_t x = 0; x < latent.width; ++x) {
          const std::int32_t v = latent.at(c, y, x);
          if (v < model.symbol_min() || v > model.symbol_max())
            throw InputError("encode_progressive: symbol " + std::to_string(v) +
                             " at (c=" + std::to_string(c) + ", y=" + std::to_string(y) +
                             ", x=" + std::to_string(x) + ") outside the symbol range");
          const GaussianParams g = context_predict(latent, level, c, y, x, model);
          if (model.mode(level) == GroupMode::kStatic) {
            const auto& m = model.static_model(c);
            enc.encode(m.cum_freq(v), m.freq(v));
          } else {
            const coding::QuantizedGaussian m(g.mu, g.sigma, model.symbol_min(),
                                              model.symbol_max());
            enc.encode(m.cum_freq(v), m.freq(v));
          }
        }
    const auto segment = enc.finish();
    put_u32(out, static_cast<std::uint32_t>(segment.bytes.size()));
    out.insert(out.end(), segment.bytes.begin(), segment.bytes.end());
  }
  put_u32(out, crc32(out.data(), out.size()));
  return out;
}

SicHeader parse_header(const std::vector<std::uint8_t>& stream) {
  return parse_stream(stream).header;
}

DecodeResult decode_progressive_with_fill(const std::vector<std::uint8_t>& stream,
                                          const ContextModel& model,
                                          std::size_t sample_count, std::int32_t fill) {
  if (sample_count < 1) throw InputError("decode_progressive: need at least 1 sample");
  const ParsedStream ps = parse_stream(stream);
  const auto& part = model.partition();
  if (ps.header.channels != part.channels)
    throw InputError("decode_progressive: stream channels " +
                     std::to_string(ps.header.channels) + " do not match the model");
  if (ps.header.levels != part.levels)
    throw InputError("decode_progressive: stream level count does not match the model");

  LatentTensor base(ps.header.channels, ps.header.height, ps.header.width, fill);
  for (std::size_t level = 0; level < ps.header.coded_levels; ++level) {
    const auto [off, len] = ps.segments[level];
    coding::RangeCoderStream seg;
    seg.bytes.assign(stream.begin() + off, stream.begin() + off + len);
    coding::RangeDecoder dec(seg.bytes);
    for (std::size_t c = part.first_channel(level); c < part.first_channel(level + 1);
         ++c)
      for (std::size_t y = 0; y < base.height; ++y)
        for (std::size_t x = 0; x < base.width; ++x) {
          const GaussianParams g = context_predict(base, level, c, y, x, model);
          const std::uint32_t df = dec.decode_freq();
          int v;
          if (model.mode(level) == GroupMode::kStatic) {
            const auto& m = model.static_model(c);
            v = m.symbol_from_cum(df);
            dec.decode_update(m.cum_freq(v), m.freq(v));
          } else {
            const coding::QuantizedGaussian m(g.mu, g.sigma, model.symbol_min(),
                                              model.symbol_max());
            v = m.symbol_from_cum(df);
            dec.decode_update(m.cum_freq(v), m.freq(v));
          }
          base.at(c, y, x) = v;
        }
    if (!dec.fully_consumed())
      throw InputError("decode_progressive: segment " + std::to_string(level) +
                       " has trailing bytes");
  }

  DecodeResult out;
  out.coded_levels = ps.header.coded_levels;
  out.samples.reserve(sample_count);
  for (std::size_t j = 1; j <= sample_count; ++j) {
    LatentTensor t = base;
    for (std::size_t level = ps.header.coded_levels; level < part.levels; ++level)
      for (std::size_t c = part.first_channel(level); c < part.first_channel(level + 1);
           ++c)
        for (std::size_t y = 0; y < t.height; ++y)
          for (std::size_t x = 0; x < t.width; ++x) {
            const double mu = detail_mu(base, ps.header.coded_levels, c, y, x, model);
            t.at(c, y, x) = sample_detail(mu, ps.header.seed, level, c, y, x, j);
          }
    out.samples.push_back(std::move(t));
  }
  return out;
}

DecodeResult decode_progressive(const std::vector<std::uint8_t>& stream,
                                const ContextModel& model, std::size_t sample_count) {
  return decode_progressive_with_fill(stream, model, sample_count, 0);
}

std::vector<std::uint8_t> truncate_stream(const std::vector<std::uint8_t>& stream,
                                          std::size_t coded_levels) {
  const ParsedStream ps = parse_stream(stream);
  if (coded_levels < 1 || coded_levels > ps.header.coded_levels)
    throw InputError("truncate_stream: level out of range");
  std::vector<std::uint8_t> out(stream.begin(), stream.begin() + kHeaderSize);
  out[13] = static_cast<std::uint8_t>(coded_levels);
  for (std::size_t k = 0; k < coded_levels; ++k) {
    const auto [off, len] = ps.segments[k];
    put_u32(out, static_cast<std::uint32_t>(len));
    out.insert(out.end(), stream.begin() + off, stream.begin() + off + len);
  }
  put_u32(out, crc32(out.data(), out.size()));
  return out;
}

double estimate_rate(const LatentTensor& latent, std::size_t coded_levels,
                     const ContextModel& model) {
  check_model_dims(latent, model);
  const auto& part = model.partition();
  if (coded_levels < 1 || coded_levels > part.levels)
    throw InputError("estimate_rate: coded_levels must be in [1, L]");
  double bits = 0.0;
  for (std::size_t level = 0; level < coded_levels; ++level)
    for (std::size_t c = part.first_channel(level); c < part.first_channel(level + 1);
         ++c)
      for (std::size_t y = 0; y < latent.height; ++y)
        for (std::size_t x = 0; x < latent.width; ++x) {
          const std::int32_t v = latent.at(c, y, x);
          if (v < model.symbol_min() || v > model.symbol_max())
            throw InputError("estimate_rate: symbol out of range at (c=" +
                             std::to_string(c) + ", y=" + std::to_string(y) +
                             ", x=" + std::to_string(x) + ")");
          const GaussianParams g = context_predict(latent, level, c, y, x, model);
          if (model.mode(level) == GroupMode::kStatic) {
            bits += model.static_model(c).bits(v);
          } else {
            const coding::QuantizedGaussian m(g.mu, g.sigma, model.symbol_min(),
                                              model.symbol_max());
            bits += m.bits(v);
          }
        }
  return bits;
}

}  // namespace sic::codec
