#include "sic/loss.hpp"

#include <cmath>
#include <string>

namespace sic::loss {

void LossWeights::validate() const {
  const std::size_t n = lambda_r.size();
  if (n == 0 || lambda_d.size() != n || lambda_p.size() != n)
    throw InputError("loss weights: per-level vectors must share one length >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("loss weights: alpha in [0,1]");
  if (!(warming_a >= 0.0) || !(warming_b >= 0.0))
    throw InputError("loss weights: warming factors must be >= 0");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lambda_r[i] > 0.0) || !(lambda_d[i] > 0.0) || !(lambda_p[i] > 0.0))
      throw InputError("loss weights: multipliers must be > 0");
}

LossWeights table1_weights() {
  LossWeights w;
  w.alpha = 0.5;
  w.warming_a = 4.0;
  w.warming_b = 64.0;
  for (int l = 1; l <= 16; ++l) {
    w.lambda_r.push_back(128.0 * l);
    w.lambda_d.push_back(std::exp2((40.0 - l) / 8.0));
    w.lambda_p.push_back(std::exp2((48.0 - 3.0 * l) / 8.0));
  }
  return w;
}

LossBreakdown level_loss(std::size_t l, double rate_bits,
                         const transform::Image& original,
                         const std::vector<transform::Image>& recons,
                         const LossWeights& w, const ImageDistance& distance) {
  w.validate();
  if (l < 1 || l > w.levels()) throw InputError("level_loss: level out of range");
  if (recons.empty()) throw InputError("level_loss: need at least one reconstruction");
  const ImageDistance& dist_fn =
      distance ? distance : ImageDistance(&transform::perceptual_stub);

  double mean_mse = 0.0, mean_perc = 0.0;
  for (const auto& r : recons) {
    mean_mse += transform::mse(original, r);
    mean_perc += dist_fn(original, r);
  }
  const double m = static_cast<double>(recons.size());
  mean_mse /= m;
  mean_perc /= m;

  LossBreakdown out;
  out.rate_bits = rate_bits;
  out.distortion = mean_mse;
  out.perception = mean_perc;
  out.constraint = 0.0;
  out.total = w.lambda_r[l - 1] * rate_bits + w.lambda_d[l - 1] * mean_mse +
              w.lambda_p[l - 1] * mean_perc;
  return out;
}

double alternating_loss(std::size_t l, const std::vector<LossBreakdown>& level_losses,
                        double constraints, const LossWeights& w) {
  const std::size_t levels = w.levels();
  if (l < 1 || l > levels) throw InputError("alternating_loss: level out of range");
  if (level_losses.size() != levels)
    throw InputError("alternating_loss: need a loss for every level including level L");
  return w.alpha * level_losses[l - 1].total +
         (1.0 - w.alpha) * level_losses[levels - 1].total + constraints;
}

namespace {

double sum_sq_diff(const codec::LatentTensor& a, const codec::LatentTensor& b,
                   const char* what) {
  if (!a.same_shape(b)) throw InputError(std::string(what) + ": shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = static_cast<double>(a.values[i]) - static_cast<double>(b.values[i]);
    s += d * d;
  }
  return s;
}

}  // namespace

std::pair<double, double> idempotence_constraints(
    const codec::LatentTensor& y_s, const codec::LatentTensor& y_s_recoded,
    const codec::LatentTensor& y_eps, const codec::LatentTensor& y_eps_recoded) {
  return {sum_sq_diff(y_s, y_s_recoded, "idempotence (synonymous)"),
          sum_sq_diff(y_eps, y_eps_recoded, "idempotence (detail)")};
}

double warming_constraint(const std::vector<double>& level_rates_bits, std::size_t l,
                          double a, double b) {
  const std::size_t n = level_rates_bits.size();
  if (n == 0) throw InputError("warming_constraint: empty rate vector");
  if (l < 1 || l > n) throw InputError("warming_constraint: level out of range");
  for (double r : level_rates_bits)
    if (!(r >= 0.0)) throw InputError("warming_constraint: rates must be >= 0");
  double mean = 0.0;
  for (double r : level_rates_bits) mean += r;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double r : level_rates_bits) var += (r - mean) * (r - mean);
  var /= static_cast<double>(n);  // population variance, well-defined for n = 1
  return -a * level_rates_bits[l - 1] + b * std::sqrt(var);
}

}  // namespace sic::loss
