#include "sic/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sic::coding {

double normal_cdf(double x) {
  // A&S 26.2.17: Phi(x) = 1 - phi(x)(b1 t + ... + b5 t^5), t = 1/(1+p|x|)
  static constexpr double kP = 0.2316419;
  static constexpr double kB1 = 0.319381530;
  static constexpr double kB2 = -0.356563782;
  static constexpr double kB3 = 1.781477937;
  static constexpr double kB4 = -1.821255978;
  static constexpr double kB5 = 1.330274429;
  static constexpr double kInvSqrt2Pi = 0.3989422804014327;

  const double ax = std::abs(x);
  const double t = 1.0 / (1.0 + kP * ax);
  const double poly = t * (kB1 + t * (kB2 + t * (kB3 + t * (kB4 + t * kB5))));
  const double upper = 1.0 - kInvSqrt2Pi * std::exp(-0.5 * ax * ax) * poly;
  return x >= 0.0 ? upper : 1.0 - upper;
}

QuantizedGaussian::QuantizedGaussian(double mu, double sigma, int symbol_min,
                                     int symbol_max)
    : mu_(mu),
      sigma_(std::max(sigma, kSigmaFloor)),
      symbol_min_(symbol_min),
      symbol_max_(symbol_max) {
  if (!(symbol_min_ < symbol_max_))
    throw InputError("quantized gaussian: symbol_min must be < symbol_max");
  if (!std::isfinite(mu_) || !std::isfinite(sigma_))
    throw InputError("quantized gaussian: non-finite parameters");

  const std::size_t n = static_cast<std::size_t>(symbol_max_ - symbol_min_) + 1;
  raw_.resize(n);
  const double inv_sigma = 1.0 / sigma_;
  double lo_cdf = 0.0;  // everything below symbol_min folds into it
  for (std::size_t i = 0; i < n; ++i) {
    const int s = symbol_min_ + static_cast<int>(i);
    const double hi_cdf =
        (s == symbol_max_) ? 1.0 : normal_cdf((s + 0.5 - mu_) * inv_sigma);
    raw_[i] = std::max(hi_cdf - lo_cdf, 0.0);
    lo_cdf = hi_cdf;
  }

  // Floor at 2^-16, renormalizing only the unfloored mass so floored bins
  // stay exactly at the floor. Terminates: the floored set only grows.
  pmf_ = raw_;
  std::vector<bool> floored(n, false);
  for (int pass = 0; pass < 64; ++pass) {
    double free_mass = 0.0, target = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (floored[i])
        target -= kPmfFloor;
      else
        free_mass += pmf_[i];
    }
    if (free_mass <= 0.0 || target <= 0.0)
      throw InputError("quantized gaussian: symbol range too large for pmf floor");
    const double scale = target / free_mass;
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (floored[i]) continue;
      const double p = pmf_[i] * scale;
      if (p < kPmfFloor) {
        floored[i] = true;
        changed = true;
      }
    }
    if (!changed) {
      for (std::size_t i = 0; i < n; ++i)
        pmf_[i] = floored[i] ? kPmfFloor : pmf_[i] * scale;
      break;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (floored[i]) pmf_[i] = kPmfFloor;
  }

  // 16-bit frequencies summing exactly to kFreqTotal, every entry >= 1.
  if (n > kFreqTotal)
    throw InputError("quantized gaussian: alphabet exceeds frequency precision");
  freq_.resize(n);
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    freq_[i] = static_cast<std::uint32_t>(
        std::max<long long>(1, std::llround(pmf_[i] * kFreqTotal)));
    total += freq_[i];
  }
  long long diff = static_cast<long long>(kFreqTotal) - total;
  while (diff != 0) {
    // deterministic drift repair: adjust the bin with the largest deficit
    // (diff > 0) or surplus (diff < 0); ties resolve to the lowest index
    std::size_t pick = 0;
    double best = 0.0;
    bool have = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = pmf_[i] * kFreqTotal - static_cast<double>(freq_[i]);
      if (diff > 0) {
        if (!have || gap > best) best = gap, pick = i, have = true;
      } else {
        if (freq_[i] <= 1) continue;
        if (!have || gap < best) best = gap, pick = i, have = true;
      }
    }
    if (!have) throw InputError("quantized gaussian: cannot balance frequencies");
    freq_[pick] += diff > 0 ? 1 : -1;
    diff += diff > 0 ? -1 : 1;
  }

  cum_.resize(n);
  std::uint32_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cum_[i] = acc;
    acc += freq_[i];
  }
}

std::size_t QuantizedGaussian::idx(int n) const {
  if (!in_range(n))
    throw std::out_of_range("quantized gaussian: symbol " + std::to_string(n) +
                            " outside [" + std::to_string(symbol_min_) + ", " +
                            std::to_string(symbol_max_) + "]");
  return static_cast<std::size_t>(n - symbol_min_);
}

double QuantizedGaussian::pmf(int n) const { return pmf_[idx(n)]; }

double QuantizedGaussian::raw_pmf(int n) const { return raw_[idx(n)]; }

double QuantizedGaussian::bits(int n) const { return -std::log2(pmf_[idx(n)]); }

int QuantizedGaussian::symbol_from_cum(std::uint32_t cf) const {
  // last i with cum_[i] <= cf
  std::size_t lo = 0, hi = cum_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (cum_[mid] <= cf)
      lo = mid;
    else
      hi = mid - 1;
  }
  return symbol_min_ + static_cast<int>(lo);
}

}  // namespace sic::coding
