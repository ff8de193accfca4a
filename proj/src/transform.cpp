#include "sic/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sic::transform {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Orthonormal DCT-II matrix, D[k][x].
std::vector<double> dct_matrix(int b) {
  std::vector<double> m(static_cast<std::size_t>(b) * b);
  for (int k = 0; k < b; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / b) : std::sqrt(2.0 / b);
    for (int x = 0; x < b; ++x)
      m[k * b + x] = scale * std::cos((2 * x + 1) * k * kPi / (2.0 * b));
  }
  return m;
}

double round_half_away(double v) { return std::round(v); }

void check_dims(const TransformConfig& cfg, std::size_t h, std::size_t w) {
  const auto b = static_cast<std::size_t>(cfg.block);
  if (h == 0 || w == 0 || h % b != 0 || w % b != 0)
    throw InputError("transform: image dims " + std::to_string(h) + "x" +
                     std::to_string(w) + " not multiples of block " +
                     std::to_string(b));
}

void check_cfg(const TransformConfig& cfg) {
  if (cfg.block < 1) throw InputError("transform config: block must be >= 1");
  if (cfg.quant_step.size() != cfg.channels())
    throw InputError("transform config: need one quant step per channel");
  for (double s : cfg.quant_step)
    if (!(s > 0.0)) throw InputError("transform config: quant steps must be > 0");
}

}  // namespace

TransformConfig TransformConfig::defaults() {
  TransformConfig cfg;
  cfg.block = 8;
  cfg.quant_step.assign(64, 2.0);
  cfg.quant_step[0] = 1.0;
  return cfg;
}

std::vector<std::pair<int, int>> zigzag_order(int block) {
  std::vector<std::pair<int, int>> order;
  order.reserve(static_cast<std::size_t>(block) * block);
  for (int s = 0; s < 2 * block - 1; ++s) {
    if (s % 2 == 0) {  // walking up-right
      int u = std::min(s, block - 1), v = s - u;
      while (u >= 0 && v < block) order.emplace_back(u--, v++);
    } else {
      int v = std::min(s, block - 1), u = s - v;
      while (v >= 0 && u < block) order.emplace_back(u++, v--);
    }
  }
  return order;
}

std::vector<double> worst_case_symbols(const TransformConfig& cfg) {
  check_cfg(cfg);
  const int b = cfg.block;
  const auto d = dct_matrix(b);
  const auto zz = zigzag_order(b);
  std::vector<double> bound(cfg.channels());
  for (std::size_t ch = 0; ch < cfg.channels(); ++ch) {
    const auto [u, v] = zz[ch];
    double pos = 0.0, neg = 0.0;
    for (int x = 0; x < b; ++x)
      for (int y = 0; y < b; ++y) {
        const double w = d[u * b + x] * d[v * b + y];
        if (w > 0)
          pos += w;
        else
          neg -= w;
      }
    bound[ch] = round_half_away(255.0 * std::max(pos, neg) / cfg.quant_step[ch]);
  }
  return bound;
}

void validate_symbol_bound(const TransformConfig& cfg, int symbol_min, int symbol_max) {
  const auto bound = worst_case_symbols(cfg);
  const int b = cfg.block;
  const auto d = dct_matrix(b);
  const auto zz = zigzag_order(b);
  for (std::size_t ch = 0; ch < bound.size(); ++ch) {
    const auto [u, v] = zz[ch];
    double pos = 0.0, neg = 0.0;
    for (int x = 0; x < b; ++x)
      for (int y = 0; y < b; ++y) {
        const double w = d[u * b + x] * d[v * b + y];
        if (w > 0)
          pos += w;
        else
          neg -= w;
      }
    const double hi = round_half_away(255.0 * pos / cfg.quant_step[ch]);
    const double lo = -round_half_away(255.0 * neg / cfg.quant_step[ch]);
    if (hi > symbol_max || lo < symbol_min)
      throw InputError("transform config: channel " + std::to_string(ch) +
                       " can quantize to [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "], outside the symbol range [" +
                       std::to_string(symbol_min) + ", " + std::to_string(symbol_max) +
                       "]");
  }
}

std::vector<double> analysis_real(const Image& img, const TransformConfig& cfg) {
  check_cfg(cfg);
  check_dims(cfg, img.height, img.width);
  const int b = cfg.block;
  const auto d = dct_matrix(b);
  const std::size_t bh = img.height / b, bw = img.width / b;
  const auto zz = zigzag_order(b);
  std::vector<double> coef(cfg.channels() * bh * bw, 0.0);
  std::vector<double> tmp(static_cast<std::size_t>(b) * b), block(tmp.size());
  for (std::size_t by = 0; by < bh; ++by)
    for (std::size_t bx = 0; bx < bw; ++bx) {
      // tmp = D * block
      for (int u = 0; u < b; ++u)
        for (int x = 0; x < b; ++x) {
          double s = 0.0;
          for (int y = 0; y < b; ++y)
            s += d[u * b + y] * img.at(by * b + y, bx * b + x);
          tmp[u * b + x] = s;
        }
      // block = tmp * D^T
      for (int u = 0; u < b; ++u)
        for (int v = 0; v < b; ++v) {
          double s = 0.0;
          for (int x = 0; x < b; ++x) s += tmp[u * b + x] * d[v * b + x];
          block[u * b + v] = s;
        }
      for (std::size_t ch = 0; ch < cfg.channels(); ++ch) {
        const auto [u, v] = zz[ch];
        coef[(ch * bh + by) * bw + bx] = block[u * b + v];
      }
    }
  return coef;
}

codec::LatentTensor analysis(const Image& img, const TransformConfig& cfg) {
  const auto coef = analysis_real(img, cfg);
  const auto b = static_cast<std::size_t>(cfg.block);
  const std::size_t bh = img.height / b, bw = img.width / b;
  codec::LatentTensor out(cfg.channels(), bh, bw);
  for (std::size_t ch = 0; ch < cfg.channels(); ++ch)
    for (std::size_t y = 0; y < bh; ++y)
      for (std::size_t x = 0; x < bw; ++x)
        out.at(ch, y, x) = static_cast<std::int32_t>(
            round_half_away(coef[(ch * bh + y) * bw + x] / cfg.quant_step[ch]));
  return out;
}

std::vector<double> synthesis_real(const std::vector<double>& coef, std::size_t height,
                                   std::size_t width, const TransformConfig& cfg) {
  check_cfg(cfg);
  check_dims(cfg, height, width);
  const int b = cfg.block;
  const auto d = dct_matrix(b);
  const std::size_t bh = height / b, bw = width / b;
  if (coef.size() != cfg.channels() * bh * bw)
    throw InputError("synthesis: coefficient count mismatch");
  const auto zz = zigzag_order(b);
  std::vector<double> out(height * width, 0.0);
  std::vector<double> grid(static_cast<std::size_t>(b) * b), tmp(grid.size());
  for (std::size_t by = 0; by < bh; ++by)
    for (std::size_t bx = 0; bx < bw; ++bx) {
      for (std::size_t ch = 0; ch < cfg.channels(); ++ch) {
        const auto [u, v] = zz[ch];
        grid[u * b + v] = coef[(ch * bh + by) * bw + bx];
      }
      // tmp = D^T * grid
      for (int y = 0; y < b; ++y)
        for (int v = 0; v < b; ++v) {
          double s = 0.0;
          for (int u = 0; u < b; ++u) s += d[u * b + y] * grid[u * b + v];
          tmp[y * b + v] = s;
        }
      // pixels = tmp * D
      for (int y = 0; y < b; ++y)
        for (int x = 0; x < b; ++x) {
          double s = 0.0;
          for (int v = 0; v < b; ++v) s += tmp[y * b + v] * d[v * b + x];
          out[(by * b + y) * width + bx * b + x] = s;
        }
    }
  return out;
}

Image synthesis_real_clamped(const std::vector<double>& coef, std::size_t height,
                             std::size_t width, const TransformConfig& cfg) {
  const auto real = synthesis_real(coef, height, width, cfg);
  Image img(height, width);
  for (std::size_t i = 0; i < real.size(); ++i) {
    const double v = std::clamp(round_half_away(real[i]), 0.0, 255.0);
    img.pixels[i] = static_cast<std::uint8_t>(v);
  }
  return img;
}

Image synthesis(const codec::LatentTensor& latent, const TransformConfig& cfg) {
  check_cfg(cfg);
  if (latent.channels != cfg.channels())
    throw InputError("synthesis: latent has " + std::to_string(latent.channels) +
                     " channels, config expects " + std::to_string(cfg.channels()));
  const auto b = static_cast<std::size_t>(cfg.block);
  const std::size_t height = latent.height * b, width = latent.width * b;
  std::vector<double> coef(latent.values.size());
  for (std::size_t ch = 0; ch < latent.channels; ++ch)
    for (std::size_t y = 0; y < latent.height; ++y)
      for (std::size_t x = 0; x < latent.width; ++x)
        coef[(ch * latent.height + y) * latent.width + x] =
            latent.at(ch, y, x) * cfg.quant_step[ch];
  return synthesis_real_clamped(coef, height, width, cfg);
}

double mse(const Image& a, const Image& b) {
  if (a.height != b.height || a.width != b.width)
    throw InputError("mse: image dims differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
    s += d * d;
  }
  return s / static_cast<double>(a.pixels.size());
}

double psnr(const Image& a, const Image& b) {
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

double perceptual_stub(const Image& a, const Image& b) {
  if (a.height != b.height || a.width != b.width)
    throw InputError("perceptual_stub: image dims differ");
  constexpr std::size_t kPatch = 8;
  if (a.height % kPatch != 0 || a.width % kPatch != 0)
    throw InputError("perceptual_stub: dims must be multiples of 8");
  const std::size_t ph = a.height / kPatch, pw = a.width / kPatch;
  auto patch_stats = [](const Image& img, std::size_t py, std::size_t px) {
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t y = 0; y < kPatch; ++y)
      for (std::size_t x = 0; x < kPatch; ++x) {
        const double v = img.at(py * kPatch + y, px * kPatch + x);
        sum += v;
        sum2 += v * v;
      }
    const double n = kPatch * kPatch;
    const double mean = sum / n;
    const double var = std::max(sum2 / n - mean * mean, 0.0);
    return std::pair<double, double>(mean, std::sqrt(var));
  };
  double acc = 0.0;
  for (std::size_t py = 0; py < ph; ++py)
    for (std::size_t px = 0; px < pw; ++px) {
      const auto [ma, sa] = patch_stats(a, py, px);
      const auto [mb, sb] = patch_stats(b, py, px);
      acc += (ma - mb) * (ma - mb) + (sa - sb) * (sa - sb);
    }
  return acc / static_cast<double>(ph * pw);
}

}  // namespace sic::transform
