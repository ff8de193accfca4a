#pragma once

// Fixed orthonormal 8x8 DCT-II analysis/synthesis pair standing in for a
// learned transform, plus the image metrics the loss evaluator consumes.
// Coefficients are scattered to channels in zigzag order (channel 0 = DC),
// so ascending synonymous levels run low to high frequency.

#include <cstdint>
#include <utility>
#include <vector>

#include "sic/codec.hpp"
#include "sic/types.hpp"

namespace sic::transform {

// 8-bit grayscale image.
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  Image() = default;
  Image(std::size_t h, std::size_t w, std::uint8_t fill = 0)
      : height(h), width(w), pixels(h * w, fill) {}

  std::uint8_t at(std::size_t y, std::size_t x) const { return pixels[y * width + x]; }
  std::uint8_t& at(std::size_t y, std::size_t x) { return pixels[y * width + x]; }
};

struct TransformConfig {
  int block = 8;
  std::vector<double> quant_step;  // per channel, zigzag order; all > 0

  // block 8, DC step 1, AC step 2
  static TransformConfig defaults();
  std::size_t channels() const { return static_cast<std::size_t>(block) * block; }
};

// Worst-case check that every 8-bit input quantizes into
// [symbol_min, symbol_max] under cfg. Throws InputError otherwise.
void validate_symbol_bound(const TransformConfig& cfg, int symbol_min, int symbol_max);

// Exact worst-case |quantized symbol| per channel for pixels in [0, 255].
std::vector<double> worst_case_symbols(const TransformConfig& cfg);

// Zigzag scan of a BxB block: list of (row, col) pairs, DC first.
std::vector<std::pair<int, int>> zigzag_order(int block);

// Per-block DCT, zigzag scatter, divide by quant_step, round half away from
// zero. Output dims (B*B, H/B, W/B). Image dims must be divisible by B.
codec::LatentTensor analysis(const Image& img, const TransformConfig& cfg);

// Multiply by quant_step, inverse DCT per block, clamp to [0,255], round.
Image synthesis(const codec::LatentTensor& latent, const TransformConfig& cfg);

// Real-valued paths without quantization or rounding; the orthonormality
// and energy-preservation tests run on these.
std::vector<double> analysis_real(const Image& img, const TransformConfig& cfg);
Image synthesis_real_clamped(const std::vector<double>& coef, std::size_t height,
                             std::size_t width, const TransformConfig& cfg);
std::vector<double> synthesis_real(const std::vector<double>& coef, std::size_t height,
                                   std::size_t width, const TransformConfig& cfg);

double mse(const Image& a, const Image& b);
// 10*log10(255^2/mse); +infinity for identical images.
double psnr(const Image& a, const Image& b);

// Patch-statistics distance standing in for a neural perceptual metric:
// mean over non-overlapping 8x8 patches of (mean difference)^2 +
// (std difference)^2. Blind to pixel layout within a patch by design.
double perceptual_stub(const Image& a, const Image& b);

}  // namespace sic::transform
