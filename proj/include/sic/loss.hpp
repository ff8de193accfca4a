#pragma once

// Training-objective evaluation for the progressive codec: per-level
// rate/distortion/perception losses, the alternating level blend, the
// idempotence constraints, and the warm-up rate-balancing constraint.
// No gradients, no training loops; this makes the objective checkable.

#include <functional>
#include <vector>

#include "sic/codec.hpp"
#include "sic/transform.hpp"
#include "sic/types.hpp"

namespace sic::loss {

// Any symmetric image distance can sit in the perception slot; the default
// is transform::perceptual_stub.
using ImageDistance =
    std::function<double(const transform::Image&, const transform::Image&)>;

struct LossWeights {
  double alpha = 0.5;                  // in [0, 1]
  std::vector<double> lambda_r;        // per level, > 0
  std::vector<double> lambda_d;
  std::vector<double> lambda_p;
  double warming_a = 4.0;              // >= 0
  double warming_b = 64.0;

  std::size_t levels() const { return lambda_r.size(); }
  void validate() const;
};

// The 16-level defaults: lambda_r = 128*l, lambda_d = 2^((40-l)/8),
// lambda_p = 2^((48-3l)/8), alpha = 0.5, warming a = 4, b = 64.
LossWeights table1_weights();

// Per-level loss for level l (1-based):
//   lambda_r[l]*rate_bits + (1/M) * sum_i (lambda_d[l]*mse(x, xhat_i) +
//                                          lambda_p[l]*distance(x, xhat_i))
// Components are stored unweighted; total carries the weights.
LossBreakdown level_loss(std::size_t l, double rate_bits,
                         const transform::Image& original,
                         const std::vector<transform::Image>& recons,
                         const LossWeights& w, const ImageDistance& distance = {});

// Alternating blend: alpha * total(l) + (1 - alpha) * total(L) + constraints.
double alternating_loss(std::size_t l, const std::vector<LossBreakdown>& level_losses,
                        double constraints, const LossWeights& w);

// Squared re-encoding drift: (||y_s' - y_s||^2, ||y_eps' - y_eps||^2),
// sums of squared elementwise differences.
std::pair<double, double> idempotence_constraints(const codec::LatentTensor& y_s,
                                                  const codec::LatentTensor& y_s_recoded,
                                                  const codec::LatentTensor& y_eps,
                                                  const codec::LatentTensor& y_eps_recoded);

// Warm-up constraint for level l (1-based): -a*rate_l + b*popstd(rates),
// with log p measured as minus the rate in bits.
double warming_constraint(const std::vector<double>& level_rates_bits, std::size_t l,
                          double a, double b);

}  // namespace sic::loss
