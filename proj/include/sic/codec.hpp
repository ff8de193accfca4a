#pragma once

// Progressive synonymous codec: a CxHxW integer latent is sliced into L
// contiguous channel groups (synonymous levels). The first l groups are
// range-coded with a spatial-channel context model into independently
// delimited segments; the remaining groups are filled at the decoder by
// keyed uniform sampling around per-channel detail means, so any prefix of
// segments decodes and every sample of one decode shares the coded groups.
// Wire format frozen in docs/format.md.

#include <cstdint>
#include <memory>
#include <vector>

#include "sic/gaussian.hpp"
#include "sic/types.hpp"

namespace sic::codec {

struct LatentTensor {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::int32_t> values;  // c-major, then rows, then columns

  LatentTensor() = default;
  LatentTensor(std::size_t c, std::size_t h, std::size_t w, std::int32_t fill = 0)
      : channels(c), height(h), width(w), values(c * h * w, fill) {}

  std::int32_t at(std::size_t c, std::size_t y, std::size_t x) const {
    return values[(c * height + y) * width + x];
  }
  std::int32_t& at(std::size_t c, std::size_t y, std::size_t x) {
    return values[(c * height + y) * width + x];
  }
  bool same_shape(const LatentTensor& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }
};

// L contiguous equal channel groups.
struct LevelPartition {
  std::size_t channels = 0;
  std::size_t levels = 0;
  std::size_t group_size = 0;

  std::size_t group_of(std::size_t c) const { return c / group_size; }
  std::size_t first_channel(std::size_t level) const { return level * group_size; }
};

// Throws InputError when C is not divisible by L.
LevelPartition partition_levels(std::size_t channels, std::size_t levels);

struct GaussianParams {
  double mu = 0.0;
  double sigma = coding::QuantizedGaussian::kSigmaFloor;
};

enum class GroupMode { kStatic, kLinear };

// Spatial-channel context predictor plus detail tables.
//
// Static groups read per-channel (mu, sigma) tables. Linear groups compute
// mu and log(sigma) as an affine function of the masked neighborhood: a
// kWindow x kWindow spatial window where a source channel contributes
//   - nothing, if it lies in a later group or after the target channel
//     within the same group,
//   - only strictly-raster-before positions, if it is the target channel,
//   - the full window, otherwise (earlier channel of the same group or any
//     previously coded group).
// Weights on masked-out positions must be exactly zero (validated).
//
// Details: per-channel mu_eps tables, optionally refined by a linear
// predictor reading the full window over decoded synonymous groups.
class ContextModel {
 public:
  static constexpr int kWindow = 5;
  static constexpr int kReach = kWindow / 2;

  ContextModel(LevelPartition part, int symbol_min, int symbol_max,
               std::vector<GroupMode> group_mode, std::vector<double> mu,
               std::vector<double> sigma, std::vector<double> mu_eps);

  // Dense weight layout: w[((c * C) + src) * 25 + (dy+2)*5 + (dx+2)].
  void set_linear(std::vector<double> w_mu, std::vector<double> w_log_sigma,
                  std::vector<double> bias_mu, std::vector<double> bias_log_sigma);
  void set_detail_linear(std::vector<double> w_detail);

  const LevelPartition& partition() const { return part_; }
  int symbol_min() const { return symbol_min_; }
  int symbol_max() const { return symbol_max_; }
  GroupMode mode(std::size_t group) const { return group_mode_[group]; }
  double static_mu(std::size_t c) const { return mu_[c]; }
  double static_sigma(std::size_t c) const { return sigma_[c]; }
  double mu_eps(std::size_t c) const { return mu_eps_[c]; }
  bool has_linear() const { return has_linear_; }
  bool has_detail_linear() const { return has_detail_linear_; }
  const std::vector<double>& w_mu() const { return w_mu_; }
  const std::vector<double>& w_log_sigma() const { return w_ls_; }
  const std::vector<double>& bias_mu() const { return bias_mu_; }
  const std::vector<double>& bias_log_sigma() const { return bias_ls_; }
  const std::vector<double>& w_detail() const { return w_detail_; }

  // True when (src, dy, dx) is visible from target channel c under the mask.
  bool mask_visible(std::size_t c, std::size_t src, int dy, int dx) const;

  // Per-channel symbol model for static groups, built eagerly so the model
  // stays immutable and shareable across concurrent encoders/decoders.
  const coding::QuantizedGaussian& static_model(std::size_t c) const;

 private:
  void validate_linear_mask(const std::vector<double>& w, const char* what) const;

  LevelPartition part_;
  int symbol_min_;
  int symbol_max_;
  std::vector<GroupMode> group_mode_;
  std::vector<double> mu_, sigma_, mu_eps_;
  bool has_linear_ = false;
  std::vector<double> w_mu_, w_ls_, bias_mu_, bias_ls_;
  bool has_detail_linear_ = false;
  std::vector<double> w_detail_;
  std::vector<std::unique_ptr<coding::QuantizedGaussian>> static_cache_;
};

// (mu, sigma) for one position from mask-visible values only; identical on
// the encode and decode paths. `level` must be the group of `c`.
GaussianParams context_predict(const LatentTensor& latent, std::size_t level,
                               std::size_t c, std::size_t y, std::size_t x,
                               const ContextModel& model);

// Detail mean for an uncoded position: mu_eps table plus the optional linear
// read over the first `coded_levels` groups.
double detail_mu(const LatentTensor& latent, std::size_t coded_levels, std::size_t c,
                 std::size_t y, std::size_t x, const ContextModel& model);

// One keyed detail draw: round(mu_eps + U(-2,2)), generator keyed on
// (seed, level, c, y, x, j). j is 1-based.
std::int32_t sample_detail(double mu_eps, std::uint64_t seed, std::size_t level,
                           std::size_t c, std::size_t y, std::size_t x, std::uint64_t j);

struct SicHeader {
  static constexpr std::uint8_t kVersion = 1;
  static constexpr std::uint8_t kRngId = 1;  // keyed splitmix64, docs/format.md

  std::uint16_t channels = 0;
  std::uint16_t height = 0;
  std::uint16_t width = 0;
  std::uint8_t levels = 0;
  std::uint8_t coded_levels = 0;
  std::uint64_t seed = 0;
};

// Header + `coded_levels` length-prefixed range-coded segments + CRC32.
std::vector<std::uint8_t> encode_progressive(const LatentTensor& latent,
                                             std::size_t coded_levels,
                                             const ContextModel& model,
                                             std::uint64_t seed);

SicHeader parse_header(const std::vector<std::uint8_t>& stream);

struct DecodeResult {
  std::vector<LatentTensor> samples;  // M tensors agreeing on coded groups
  std::size_t coded_levels = 0;
};

DecodeResult decode_progressive(const std::vector<std::uint8_t>& stream,
                                const ContextModel& model, std::size_t sample_count);
// Test hook: value the working tensor is filled with before decoding. A
// mask-compliant decoder is invariant to it.
DecodeResult decode_progressive_with_fill(const std::vector<std::uint8_t>& stream,
                                          const ContextModel& model,
                                          std::size_t sample_count, std::int32_t fill);

// Keep the first `coded_levels` segments, rewriting the header and CRC.
// Byte-identical to a direct encode at that level.
std::vector<std::uint8_t> truncate_stream(const std::vector<std::uint8_t>& stream,
                                          std::size_t coded_levels);

// Sum of ideal codelengths over the first `coded_levels` groups, in bits.
double estimate_rate(const LatentTensor& latent, std::size_t coded_levels,
                     const ContextModel& model);

}  // namespace sic::codec
