// Regenerates the bundled synthetic corpus (data/corpus/*.pgm) and prints
// per-channel latent statistics, which is where the sigma table in
// data/models/ctx_dct8.json comes from.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sic/io.hpp"
#include "sic/rng.hpp"
#include "sic/transform.hpp"

using sic::transform::Image;

namespace {

constexpr std::size_t kSize = 64;

std::uint8_t clamp8(double v) {
  return static_cast<std::uint8_t>(std::min(255.0, std::max(0.0, std::round(v))));
}

Image ramp_h() {
  Image img(kSize, kSize);
  for (std::size_t y = 0; y < kSize; ++y)
    for (std::size_t x = 0; x < kSize; ++x) img.at(y, x) = clamp8(255.0 * x / (kSize - 1));
  return img;
}

Image ramp_diag() {
  Image img(kSize, kSize);
  for (std::size_t y = 0; y < kSize; ++y)
    for (std::size_t x = 0; x < kSize; ++x)
      img.at(y, x) = clamp8(255.0 * (x + y) / (2.0 * (kSize - 1)));
  return img;
}

Image checker(std::size_t cell) {
  Image img(kSize, kSize);
  for (std::size_t y = 0; y < kSize; ++y)
    for (std::size_t x = 0; x < kSize; ++x)
      img.at(y, x) = ((x / cell + y / cell) % 2) ? 220 : 35;
  return img;
}

Image blob(double cx, double cy, double sigma, double peak) {
  Image img(kSize, kSize);
  for (std::size_t y = 0; y < kSize; ++y)
    for (std::size_t x = 0; x < kSize; ++x) {
      const double dx = (static_cast<double>(x) - cx) / sigma;
      const double dy = (static_cast<double>(y) - cy) / sigma;
      img.at(y, x) = clamp8(peak * std::exp(-0.5 * (dx * dx + dy * dy)));
    }
  return img;
}

Image noise(std::uint64_t seed, double mean, double amplitude) {
  Image img(kSize, kSize);
  for (std::size_t y = 0; y < kSize; ++y)
    for (std::size_t x = 0; x < kSize; ++x) {
      const double u = sic::rng::to_unit(sic::rng::detail_key(seed, 0, 0, y, x, 1));
      img.at(y, x) = clamp8(mean + amplitude * (2.0 * u - 1.0));
    }
  return img;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data/corpus";
  const std::vector<std::pair<std::string, Image>> corpus = {
      {"ramp_h", ramp_h()},
      {"ramp_diag", ramp_diag()},
      {"checker8", checker(8)},
      {"checker4", checker(4)},
      {"blob_center", blob(31.5, 31.5, 10.0, 240.0)},
      {"blob_corner", blob(16.0, 44.0, 6.0, 200.0)},
      {"noise_mid", noise(11, 128.0, 40.0)},
      {"noise_bright", noise(12, 180.0, 25.0)},
  };

  const auto cfg = sic::transform::TransformConfig::defaults();
  std::vector<double> sum(cfg.channels(), 0.0), sum2(cfg.channels(), 0.0);
  std::size_t count = 0;

  for (const auto& [name, img] : corpus) {
    sic::io::save_pgm(img, dir + "/" + name + ".pgm");
    const auto latent = sic::transform::analysis(img, cfg);
    count += latent.height * latent.width;
    for (std::size_t c = 0; c < latent.channels; ++c)
      for (std::size_t y = 0; y < latent.height; ++y)
        for (std::size_t x = 0; x < latent.width; ++x) {
          const double v = latent.at(c, y, x);
          sum[c] += v;
          sum2[c] += v * v;
        }
  }

  std::printf("wrote %zu images to %s\n", corpus.size(), dir.c_str());
  std::printf("per-channel latent mean/std over the corpus:\n");
  for (std::size_t c = 0; c < cfg.channels(); ++c) {
    const double mean = sum[c] / count;
    const double var = std::max(sum2[c] / count - mean * mean, 0.0);
    std::printf("  c=%zu mean=%.3f std=%.3f\n", c, mean, std::sqrt(var));
  }
  return 0;
}
