#pragma once

// Quantized-Gaussian integer symbol model: P(n) = Phi((n+0.5-mu)/sigma) -
// Phi((n-0.5-mu)/sigma) over a clamped symbol range, with the tail mass
// folded into the boundary symbols. Probabilities are floored at 2^-16 and
// renormalized so every symbol is representable in the coder's 16-bit
// frequency precision. The Phi approximation is fixed and versioned
// (docs/format.md) because these bits feed a bit-exact format.

#include <cstdint>
#include <vector>

#include "sic/types.hpp"

namespace sic::coding {

// Standard normal CDF, Abramowitz & Stegun 26.2.17 (|error| < 7.5e-8).
double normal_cdf(double x);

class QuantizedGaussian {
 public:
  static constexpr double kSigmaFloor = 0.11;
  static constexpr double kPmfFloor = 0x1.0p-16;
  static constexpr std::uint32_t kFreqBits = 16;
  static constexpr std::uint32_t kFreqTotal = 1u << kFreqBits;
  static constexpr int kDefaultSymbolMin = -127;
  static constexpr int kDefaultSymbolMax = 127;

  // sigma below the floor is clamped up, never rejected.
  QuantizedGaussian(double mu, double sigma, int symbol_min = kDefaultSymbolMin,
                    int symbol_max = kDefaultSymbolMax);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  int symbol_min() const { return symbol_min_; }
  int symbol_max() const { return symbol_max_; }
  std::size_t alphabet_size() const { return pmf_.size(); }

  bool in_range(int n) const { return n >= symbol_min_ && n <= symbol_max_; }

  // Floored + renormalized probability; what the coder budgets against.
  double pmf(int n) const;
  // Tail-folded Phi difference before flooring (diagnostics and tests).
  double raw_pmf(int n) const;
  // Ideal codelength -log2(pmf(n)) in bits.
  double bits(int n) const;

  // Integer frequency table, sums to exactly kFreqTotal, every entry >= 1.
  std::uint32_t freq(int n) const { return freq_[idx(n)]; }
  std::uint32_t cum_freq(int n) const { return cum_[idx(n)]; }
  // Largest symbol whose cumulative frequency is <= cf. cf < kFreqTotal.
  int symbol_from_cum(std::uint32_t cf) const;

 private:
  std::size_t idx(int n) const;

  double mu_;
  double sigma_;
  int symbol_min_;
  int symbol_max_;
  std::vector<double> raw_;
  std::vector<double> pmf_;
  std::vector<std::uint32_t> freq_;
  std::vector<std::uint32_t> cum_;  // cum_[i] = sum of freq_[0..i)
};

}  // namespace sic::coding
