#include "sic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "sic/rng.hpp"

namespace sic::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453;

double plog2p(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// lexicographic comparison, used for deterministic tie-breaking
bool encoder_less(const Mat& a, const Mat& b) {
  return std::lexicographical_compare(a.v.begin(), a.v.end(), b.v.begin(), b.v.end());
}

struct Breakdown {
  double rate = 0.0, dist = 0.0, perc = 0.0, total = kInf;
};

// Average distortion from source x into synset k under a fixed sampler.
Mat mean_synset_distortion(const DistortionMatrix& d, const SynonymousPartition& part,
                           const std::vector<std::vector<double>>& sampler) {
  Mat dbar(d.source_size(), part.group_count());
  for (std::size_t x = 0; x < d.source_size(); ++x)
    for (std::size_t k = 0; k < part.group_count(); ++k) {
      double s = 0.0;
      for (std::size_t b : part.group(k)) s += sampler[k][b] * d.at(x, b);
      dbar.at(x, k) = s;
    }
  return dbar;
}

// Core evaluation of the synonymous objective. Never throws: a perception
// support violation shows up as perc = +inf, and total = +inf if lambda_p>0.
Breakdown eval_synonymous(const DiscreteDistribution& px, const DistortionMatrix& d,
                          const Mat& e, const SynonymousPartition& part,
                          const std::vector<std::vector<double>>& sampler,
                          const Mat& dbar, double lr, double ld, double lp) {
  const std::size_t na = px.size();
  const std::size_t k_count = part.group_count();
  Breakdown out;

  std::vector<double> m(k_count, 0.0);  // synset marginal
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t k = 0; k < k_count; ++k) m[k] += px[x] * e.at(x, k);

  double h_k = 0.0, h_k_given_x = 0.0;
  for (double mk : m) h_k -= plog2p(mk);
  for (std::size_t x = 0; x < na; ++x) {
    double hx = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) hx -= plog2p(e.at(x, k));
    h_k_given_x += px[x] * hx;
  }
  out.rate = h_k - h_k_given_x;

  out.dist = 0.0;
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t k = 0; k < k_count; ++k) out.dist += px[x] * e.at(x, k) * dbar.at(x, k);

  // reconstruction marginal and KL(px || pxhat); only defined on a shared alphabet
  const std::size_t nb = d.recon_size();
  if (nb == na) {
    std::vector<double> pxh(nb, 0.0);
    for (std::size_t k = 0; k < k_count; ++k)
      for (std::size_t b : part.group(k)) pxh[b] += m[k] * sampler[k][b];
    out.perc = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      if (px[b] <= 0.0) continue;
      if (pxh[b] <= 0.0) {
        out.perc = kInf;
        break;
      }
      out.perc += px[b] * std::log2(px[b] / pxh[b]);
    }
    if (std::isfinite(out.perc)) out.perc = std::max(out.perc, 0.0);
  } else {
    out.perc = std::numeric_limits<double>::quiet_NaN();
  }

  out.total = lr * out.rate + ld * out.dist;
  if (lp > 0.0) out.total += std::isnan(out.perc) ? kInf : lp * out.perc;
  return out;
}

// Gradient of the synonymous objective w.r.t. e(k|x), in bits, divided by
// p(x) so step sizes are comparable across rows.
void grad_synonymous(const DiscreteDistribution& px, const DistortionMatrix& d,
                     const Mat& e, const SynonymousPartition& part,
                     const std::vector<std::vector<double>>& sampler, const Mat& dbar,
                     double ld, double lp, Mat& g) {
  const std::size_t na = px.size();
  const std::size_t k_count = part.group_count();
  std::vector<double> m(k_count, 0.0);
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t k = 0; k < k_count; ++k) m[k] += px[x] * e.at(x, k);

  const std::size_t nb = d.recon_size();
  std::vector<double> pxh;
  std::vector<double> kl_pull(k_count, 0.0);  // sum_b px(b) s_k(b) / pxhat(b)
  if (lp > 0.0) {
    pxh.assign(nb, 0.0);
    for (std::size_t k = 0; k < k_count; ++k)
      for (std::size_t b : part.group(k)) pxh[b] += m[k] * sampler[k][b];
    for (std::size_t k = 0; k < k_count; ++k)
      for (std::size_t b : part.group(k))
        if (px[b] > 0.0 && pxh[b] > 0.0) kl_pull[k] += px[b] * sampler[k][b] / pxh[b];
  }

  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t k = 0; k < k_count; ++k) {
      const double exk = std::max(e.at(x, k), 1e-300);
      const double mk = std::max(m[k], 1e-300);
      double gv = std::log2(exk / mk) + ld * dbar.at(x, k);
      if (lp > 0.0) gv -= (lp / kLn2) * kl_pull[k];
      g.at(x, k) = gv;
    }
}

struct EgCandidate {
  Mat e;
  double total = kInf;
  bool converged = false;
  int iterations = 0;
};

// Exponentiated-gradient descent on row-stochastic matrices with
// backtracking, so the objective is non-increasing per accepted step.
template <typename Objective, typename Gradient>
EgCandidate eg_descent(Mat e, const Objective& objective, const Gradient& gradient,
                       const SolverConfig& cfg) {
  EgCandidate cand;
  double obj = objective(e);
  Mat g(e.rows, e.cols), trial(e.rows, e.cols);
  double eta = 0.5;
  int small_steps = 0;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    gradient(e, g);
    bool accepted = false;
    double trial_obj = obj;
    while (eta >= 1e-14) {
      for (std::size_t x = 0; x < e.rows; ++x) {
        double row_sum = 0.0;
        // subtract the row max of -eta*g for overflow safety
        double mn = kInf;
        for (std::size_t k = 0; k < e.cols; ++k) mn = std::min(mn, g.at(x, k));
        for (std::size_t k = 0; k < e.cols; ++k) {
          const double w = e.at(x, k) * std::exp(-eta * (g.at(x, k) - mn));
          trial.at(x, k) = w;
          row_sum += w;
        }
        for (std::size_t k = 0; k < e.cols; ++k) trial.at(x, k) /= row_sum;
      }
      trial_obj = objective(trial);
      if (trial_obj <= obj + 1e-15) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // no usable descent direction left
    const double drop = obj - trial_obj;
    e = trial;
    obj = trial_obj;
    eta = std::min(eta * 1.3, 4.0);
    if (drop < cfg.convergence_tol) {
      if (++small_steps >= 3) {
        cand.converged = true;
        ++it;
        break;
      }
    } else {
      small_steps = 0;
    }
  }
  if (!cand.converged && it < cfg.max_iterations) cand.converged = true;  // stationary
  cand.e = std::move(e);
  cand.total = obj;
  cand.iterations = it;
  return cand;
}

Mat dirichlet_rows(std::size_t rows, std::size_t cols, rng::Stream& rs) {
  Mat e(rows, cols);
  for (std::size_t x = 0; x < rows; ++x) {
    double sum = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      // Dirichlet(1,...,1) via normalized exponentials
      const double u = std::max(rs.next_unit(), 1e-12);
      e.at(x, k) = -std::log(u);
      sum += e.at(x, k);
    }
    for (std::size_t k = 0; k < cols; ++k) e.at(x, k) /= sum;
  }
  return e;
}

template <typename Objective, typename Gradient>
EgCandidate eg_multistart(std::size_t rows, std::size_t cols, const Objective& objective,
                          const Gradient& gradient, const SolverConfig& cfg,
                          const char* what) {
  EgCandidate best_converged, best_any;
  bool have_converged = false, have_any = false;
  rng::Stream rs(cfg.seed);
  for (int r = 0; r < cfg.random_restarts; ++r) {
    Mat e0 = r == 0 ? Mat(rows, cols, 1.0 / static_cast<double>(cols))
                    : dirichlet_rows(rows, cols, rs);
    EgCandidate c = eg_descent(std::move(e0), objective, gradient, cfg);
    if (!have_any || c.total < best_any.total ||
        (c.total == best_any.total && encoder_less(c.e, best_any.e))) {
      best_any = c;
      have_any = true;
    }
    if (c.converged && (!have_converged || c.total < best_converged.total ||
                        (c.total == best_converged.total &&
                         encoder_less(c.e, best_converged.e)))) {
      best_converged = std::move(c);
      have_converged = true;
    }
  }
  if (!have_converged) {
    RatePoint best;
    best.encoder = best_any.e;
    best.converged = false;
    best.iterations = best_any.iterations;
    throw ConvergenceError(std::string(what) + ": no restart converged within " +
                               std::to_string(cfg.max_iterations) + " iterations",
                           best);
  }
  return best_converged;
}

std::vector<std::vector<double>> uniform_sampler(const SynonymousPartition& part,
                                                 std::size_t recon_size) {
  std::vector<std::vector<double>> s(part.group_count(),
                                     std::vector<double>(recon_size, 0.0));
  for (std::size_t k = 0; k < part.group_count(); ++k) {
    const double w = 1.0 / static_cast<double>(part.group(k).size());
    for (std::size_t b : part.group(k)) s[k][b] = w;
  }
  return s;
}

// Enumerate length-`parts` compositions of `divs` grid steps; emits each row
// distribution (k_i / divs).
void for_each_simplex_row(std::size_t parts, int divs,
                          const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<int> c(parts, 0);
  std::vector<double> row(parts, 0.0);
  // odometer over compositions
  c[0] = divs;
  while (true) {
    for (std::size_t i = 0; i < parts; ++i) row[i] = static_cast<double>(c[i]) / divs;
    fn(row);
    // next composition in colex order
    std::size_t i = 0;
    while (i + 1 < parts && c[i] == 0) ++i;
    if (i + 1 >= parts) break;
    const int take = c[i];
    c[i] = 0;
    c[0] = take - 1;
    ++c[i + 1];
  }
}

}  // namespace

DistortionMatrix::DistortionMatrix(Mat d) : d_(std::move(d)) {
  if (d_.rows == 0 || d_.cols == 0) throw InputError("distortion matrix: empty");
  for (double v : d_.v)
    if (!(v >= 0.0)) throw InputError("distortion matrix: negative or NaN entry");
}

DistortionMatrix DistortionMatrix::hamming(std::size_t n) {
  Mat d(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) d.at(i, i) = 0.0;
  return DistortionMatrix(std::move(d));
}

void SolverConfig::validate() const {
  if (max_iterations < 1) throw InputError("solver config: max_iterations >= 1");
  if (!(convergence_tol > 0.0)) throw InputError("solver config: tol must be > 0");
  if (!(grid_resolution > 0.0) || grid_resolution > 0.5)
    throw InputError("solver config: grid_resolution in (0, 0.5]");
  if (random_restarts < 1) throw InputError("solver config: random_restarts >= 1");
}

SynonymousCodec::SynonymousCodec(Mat e, std::vector<std::vector<double>> s,
                                 SynonymousPartition part)
    : encoder(std::move(e)), sampler(std::move(s)), recon_partition(std::move(part)) {
  const std::size_t k_count = recon_partition.group_count();
  if (encoder.cols != k_count)
    throw InputError("synonymous codec: encoder has " + std::to_string(encoder.cols) +
                     " columns, partition has " + std::to_string(k_count) + " synsets");
  if (sampler.size() != k_count)
    throw InputError("synonymous codec: one sampler per synset required");
  for (std::size_t x = 0; x < encoder.rows; ++x) {
    double sum = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      if (encoder.at(x, k) < 0.0) throw InputError("synonymous codec: negative encoder");
      sum += encoder.at(x, k);
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InputError("synonymous codec: encoder row " + std::to_string(x) +
                       " sums to " + std::to_string(sum));
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    if (sampler[k].size() != recon_partition.alphabet_size())
      throw InputError("synonymous codec: sampler length mismatch");
    double sum = 0.0;
    for (std::size_t b = 0; b < sampler[k].size(); ++b) {
      const double v = sampler[k][b];
      if (v < 0.0) throw InputError("synonymous codec: negative sampler");
      if (v > 0.0 && recon_partition.group_of(b) != k)
        throw InputError("synonymous codec: sampler " + std::to_string(k) +
                         " has mass outside its synset");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InputError("synonymous codec: sampler " + std::to_string(k) +
                       " sums to " + std::to_string(sum));
  }
}

SynonymousCodec SynonymousCodec::with_uniform_sampler(Mat e, SynonymousPartition part) {
  auto s = uniform_sampler(part, part.alphabet_size());
  return SynonymousCodec(std::move(e), std::move(s), std::move(part));
}

Mat nearest_synset_encoder(const DistortionMatrix& d, const SynonymousPartition& part) {
  if (part.alphabet_size() != d.recon_size())
    throw InputError("nearest_synset_encoder: partition/distortion mismatch");
  const auto sampler = uniform_sampler(part, d.recon_size());
  const Mat dbar = mean_synset_distortion(d, part, sampler);
  Mat e(d.source_size(), part.group_count(), 0.0);
  for (std::size_t x = 0; x < d.source_size(); ++x) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < part.group_count(); ++k)
      if (dbar.at(x, k) < dbar.at(x, best)) best = k;  // ties keep the lowest index
    e.at(x, best) = 1.0;
  }
  return e;
}

RatePoint blahut_arimoto(const DiscreteDistribution& source, const DistortionMatrix& d,
                         double slope, const SolverConfig& cfg) {
  cfg.validate();
  if (source.size() != d.source_size())
    throw InputError("blahut_arimoto: source/distortion size mismatch");
  if (!(slope >= 0.0)) throw InputError("blahut_arimoto: slope must be >= 0");

  const std::size_t na = source.size(), nb = d.recon_size();
  const double beta = slope * kLn2;  // bits -> nats for the exponential update

  std::vector<double> q(nb, 1.0 / static_cast<double>(nb));
  Mat p(na, nb);

  auto fill_point = [&](RatePoint& pt) {
    double rate = 0.0, dist = 0.0;
    std::vector<double> marg(nb, 0.0);
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) marg[b] += source[x] * p.at(x, b);
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) {
        const double j = source[x] * p.at(x, b);
        if (j > 0.0) rate += j * std::log2(p.at(x, b) / marg[b]);
        dist += j * d.at(x, b);
      }
    pt.rate = std::max(rate, 0.0);
    pt.distortion = dist;
    if (na == nb) {
      double kl = 0.0;
      bool ok = true;
      for (std::size_t b = 0; b < nb; ++b) {
        if (source[b] <= 0.0) continue;
        if (marg[b] <= 0.0) {
          ok = false;
          break;
        }
        kl += source[b] * std::log2(source[b] / marg[b]);
      }
      pt.perception = ok ? std::max(kl, 0.0) : kInf;
    } else {
      pt.perception = std::numeric_limits<double>::quiet_NaN();
    }
    pt.encoder = p;
  };

  double prev_obj = kInf;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    // p-step: p(b|x) proportional to q(b) exp(-beta d(x,b))
    for (std::size_t x = 0; x < na; ++x) {
      double row = 0.0;
      for (std::size_t b = 0; b < nb; ++b) {
        const double w = q[b] * std::exp(-beta * d.at(x, b));
        p.at(x, b) = w;
        row += w;
      }
      for (std::size_t b = 0; b < nb; ++b) p.at(x, b) /= row;
    }
    // q-step: output marginal
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) q[b] += source[x] * p.at(x, b);

    double rate = 0.0, dist = 0.0;
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) {
        const double j = source[x] * p.at(x, b);
        if (j > 0.0) rate += j * std::log2(p.at(x, b) / q[b]);
        dist += j * d.at(x, b);
      }
    const double obj = rate + slope * dist;
    if (obj > prev_obj + 1e-9)
      throw std::logic_error("blahut_arimoto: objective increased");
    const double drop = prev_obj - obj;
    prev_obj = obj;
    if (drop < cfg.convergence_tol) {
      RatePoint pt;
      fill_point(pt);
      pt.converged = true;
      pt.iterations = it + 1;
      return pt;
    }
  }
  RatePoint last;
  fill_point(last);
  last.converged = false;
  last.iterations = cfg.max_iterations;
  throw ConvergenceError("blahut_arimoto: not converged within " +
                             std::to_string(cfg.max_iterations) + " iterations",
                         last);
}

RatePoint rdp_grid(const DiscreteDistribution& source, const DistortionMatrix& d,
                   double max_distortion, double max_perception,
                   const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t na = source.size(), nb = d.recon_size();
  if (na != d.source_size()) throw InputError("rdp_grid: source/distortion mismatch");
  if (na > 3 || nb > 3)
    throw InputError("rdp_grid: alphabets up to 3 only; use rdp_lagrangian");
  if (!(max_distortion >= 0.0) || std::isnan(max_perception))
    throw InputError("rdp_grid: constraints must be >= 0");
  const bool check_perc = !std::isinf(max_perception);
  if (check_perc && !(max_perception >= 0.0))
    throw InputError("rdp_grid: constraints must be >= 0");
  if (check_perc && na != nb)
    throw InputError("rdp_grid: perception constraint needs matching alphabets");

  const int divs = std::max(1, static_cast<int>(std::llround(1.0 / cfg.grid_resolution)));

  // all rows of the channel on the simplex grid
  std::vector<std::vector<double>> rows;
  for_each_simplex_row(nb, divs, [&](const std::vector<double>& r) { rows.push_back(r); });

  constexpr double kFeasSlack = 1e-12;
  Mat chan(na, nb);
  RatePoint best;
  bool found = false;

  std::vector<std::size_t> pick(na, 0);
  while (true) {
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) chan.at(x, b) = rows[pick[x]][b];

    std::vector<double> marg(nb, 0.0);
    double dist = 0.0;
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) {
        const double j = source[x] * chan.at(x, b);
        marg[b] += j;
        dist += j * d.at(x, b);
      }
    if (dist <= max_distortion + kFeasSlack) {
      double perc = 0.0;
      bool supported = true;
      if (na == nb) {
        for (std::size_t b = 0; b < nb; ++b) {
          if (source[b] <= 0.0) continue;
          if (marg[b] <= 0.0) {
            supported = false;
            break;
          }
          perc += source[b] * std::log2(source[b] / marg[b]);
        }
        perc = supported ? std::max(perc, 0.0) : kInf;
      } else {
        perc = std::numeric_limits<double>::quiet_NaN();
      }
      if (!check_perc || perc <= max_perception + kFeasSlack) {
        double rate = 0.0;
        for (std::size_t x = 0; x < na; ++x)
          for (std::size_t b = 0; b < nb; ++b) {
            const double j = source[x] * chan.at(x, b);
            if (j > 0.0) rate += j * std::log2(chan.at(x, b) / marg[b]);
          }
        rate = std::max(rate, 0.0);
        if (!found || rate < best.rate ||
            (rate == best.rate && encoder_less(chan, best.encoder))) {
          best.rate = rate;
          best.distortion = dist;
          best.perception = perc;
          best.encoder = chan;
          found = true;
        }
      }
    }
    // advance the odometer over rows
    std::size_t x = 0;
    while (x < na && ++pick[x] == rows.size()) pick[x++] = 0;
    if (x == na) break;
  }
  if (!found)
    throw InfeasibleError("rdp_grid: no channel on the grid satisfies D <= " +
                          std::to_string(max_distortion) + ", P <= " +
                          std::to_string(max_perception));
  best.converged = true;
  best.iterations = 1;
  return best;
}

RatePoint rdp_lagrangian(const DiscreteDistribution& source, const DistortionMatrix& d,
                         double lambda_d, double lambda_p, const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t na = source.size(), nb = d.recon_size();
  if (na != d.source_size()) throw InputError("rdp_lagrangian: size mismatch");
  if (!(lambda_d >= 0.0) || !(lambda_p >= 0.0))
    throw InputError("rdp_lagrangian: multipliers must be >= 0");
  if (lambda_p > 0.0 && na != nb)
    throw InputError("rdp_lagrangian: perception term needs matching alphabets");

  auto objective = [&](const Mat& p) {
    double rate = 0.0, dist = 0.0;
    std::vector<double> marg(nb, 0.0);
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) marg[b] += source[x] * p.at(x, b);
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) {
        const double j = source[x] * p.at(x, b);
        if (j > 0.0) rate += j * std::log2(p.at(x, b) / marg[b]);
        dist += j * d.at(x, b);
      }
    double total = std::max(rate, 0.0) + lambda_d * dist;
    if (lambda_p > 0.0) {
      double kl = 0.0;
      for (std::size_t b = 0; b < nb; ++b) {
        if (source[b] <= 0.0) continue;
        if (marg[b] <= 0.0) return kInf;
        kl += source[b] * std::log2(source[b] / marg[b]);
      }
      total += lambda_p * std::max(kl, 0.0);
    }
    return total;
  };
  auto gradient = [&](const Mat& p, Mat& g) {
    std::vector<double> marg(nb, 0.0);
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) marg[b] += source[x] * p.at(x, b);
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t b = 0; b < nb; ++b) {
        const double pb = std::max(p.at(x, b), 1e-300);
        const double mb = std::max(marg[b], 1e-300);
        double gv = std::log2(pb / mb) + lambda_d * d.at(x, b);
        if (lambda_p > 0.0 && source[b] > 0.0)
          gv -= (lambda_p / kLn2) * source[b] / mb;
        g.at(x, b) = gv;
      }
  };

  EgCandidate c = eg_multistart(na, nb, objective, gradient, cfg, "rdp_lagrangian");

  RatePoint pt;
  pt.encoder = c.e;
  pt.converged = true;
  pt.iterations = c.iterations;
  // recompute the decomposition from the winning channel
  std::vector<double> marg(nb, 0.0);
  double rate = 0.0, dist = 0.0;
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t b = 0; b < nb; ++b) marg[b] += source[x] * c.e.at(x, b);
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t b = 0; b < nb; ++b) {
      const double j = source[x] * c.e.at(x, b);
      if (j > 0.0) rate += j * std::log2(c.e.at(x, b) / marg[b]);
      dist += j * d.at(x, b);
    }
  pt.rate = std::max(rate, 0.0);
  pt.distortion = dist;
  if (na == nb) {
    double kl = 0.0;
    bool ok = true;
    for (std::size_t b = 0; b < nb; ++b) {
      if (source[b] <= 0.0) continue;
      if (marg[b] <= 0.0) {
        ok = false;
        break;
      }
      kl += source[b] * std::log2(source[b] / marg[b]);
    }
    pt.perception = ok ? std::max(kl, 0.0) : kInf;
  } else {
    pt.perception = std::numeric_limits<double>::quiet_NaN();
  }
  return pt;
}

LossBreakdown synonymous_lagrangian_objective(const DiscreteDistribution& source,
                                              const DistortionMatrix& d,
                                              const SynonymousCodec& codec,
                                              double lambda_r, double lambda_d,
                                              double lambda_p) {
  if (source.size() != d.source_size())
    throw InputError("synonymous objective: source/distortion mismatch");
  if (codec.recon_partition.alphabet_size() != d.recon_size())
    throw InputError("synonymous objective: partition/distortion mismatch");
  if (codec.encoder.rows != source.size())
    throw InputError("synonymous objective: encoder row count mismatch");

  const Mat dbar = mean_synset_distortion(d, codec.recon_partition, codec.sampler);
  const Breakdown b = eval_synonymous(source, d, codec.encoder, codec.recon_partition,
                                      codec.sampler, dbar, lambda_r, lambda_d, lambda_p);
  if (lambda_p > 0.0 && (std::isinf(b.perc) || std::isnan(b.perc)))
    throw InputError(
        "synonymous objective: perception support violation (source mass where the "
        "reconstruction marginal is zero)");
  LossBreakdown out;
  out.rate_bits = b.rate;
  out.distortion = b.dist;
  out.perception = b.perc;
  out.constraint = 0.0;
  out.total = b.total;
  return out;
}

RatePoint synonymous_rdp(const DiscreteDistribution& source, const DistortionMatrix& d,
                         const SynonymousPartition& recon_partition, double lambda_d,
                         double lambda_p, const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t na = source.size();
  if (na != d.source_size()) throw InputError("synonymous_rdp: size mismatch");
  if (recon_partition.alphabet_size() != d.recon_size())
    throw InputError("synonymous_rdp: partition/distortion mismatch");
  if (!(lambda_d >= 0.0) || !(lambda_p >= 0.0))
    throw InputError("synonymous_rdp: multipliers must be >= 0");
  if (lambda_p > 0.0 && na != d.recon_size())
    throw InputError("synonymous_rdp: perception term needs matching alphabets");

  const std::size_t k_count = recon_partition.group_count();
  const auto sampler = uniform_sampler(recon_partition, d.recon_size());
  const Mat dbar = mean_synset_distortion(d, recon_partition, sampler);

  auto objective = [&](const Mat& e) {
    return eval_synonymous(source, d, e, recon_partition, sampler, dbar, 1.0, lambda_d,
                           lambda_p)
        .total;
  };
  auto gradient = [&](const Mat& e, Mat& g) {
    grad_synonymous(source, d, e, recon_partition, sampler, dbar, lambda_d, lambda_p, g);
  };

  EgCandidate c = eg_multistart(na, k_count, objective, gradient, cfg, "synonymous_rdp");

  const Breakdown b = eval_synonymous(source, d, c.e, recon_partition, sampler, dbar,
                                      1.0, lambda_d, lambda_p);
  RatePoint pt;
  pt.rate = std::max(b.rate, 0.0);
  pt.distortion = b.dist;
  pt.perception = b.perc;
  pt.encoder = std::move(c.e);
  pt.converged = true;
  pt.iterations = c.iterations;
  return pt;
}

RatePoint brute_force_codec_search(const DiscreteDistribution& source,
                                   const DistortionMatrix& d,
                                   const SynonymousPartition& recon_partition,
                                   double lambda_r, double lambda_d, double lambda_p) {
  const std::size_t na = source.size();
  const std::size_t k_count = recon_partition.group_count();
  if (na != d.source_size()) throw InputError("brute force: size mismatch");
  if (recon_partition.alphabet_size() != d.recon_size())
    throw InputError("brute force: partition/distortion mismatch");
  if (na > 4 || k_count > 3)
    throw InputError("brute force: instance too large (alphabet <= 4, synsets <= 3)");

  const auto sampler = uniform_sampler(recon_partition, d.recon_size());
  const Mat dbar = mean_synset_distortion(d, recon_partition, sampler);
  auto total_of = [&](const Mat& e) {
    return eval_synonymous(source, d, e, recon_partition, sampler, dbar, lambda_r,
                           lambda_d, lambda_p)
        .total;
  };

  Mat best_e;
  double best_total = kInf;
  auto consider = [&](const Mat& e) {
    const double t = total_of(e);
    if (t < best_total) {
      best_total = t;
      best_e = e;
    }
  };

  // every deterministic encoder, lexicographic over (x ascending, synset
  // index ascending) so ties settle on the lowest-index assignment
  {
    std::vector<std::size_t> assign(na, 0);
    Mat e(na, k_count, 0.0);
    while (true) {
      for (auto& v : e.v) v = 0.0;
      for (std::size_t x = 0; x < na; ++x) e.at(x, assign[x]) = 1.0;
      consider(e);
      std::size_t x = na;
      while (x > 0 && ++assign[x - 1] == k_count) assign[--x] = 0;
      if (x == 0) break;
    }
  }

  // coarse stochastic grid over encoder rows
  {
    const int divs = k_count <= 2 ? 16 : 8;
    std::vector<std::vector<double>> rows;
    for_each_simplex_row(k_count, divs,
                         [&](const std::vector<double>& r) { rows.push_back(r); });
    std::vector<std::size_t> pick(na, 0);
    Mat e(na, k_count);
    while (true) {
      for (std::size_t x = 0; x < na; ++x)
        for (std::size_t k = 0; k < k_count; ++k) e.at(x, k) = rows[pick[x]][k];
      consider(e);
      std::size_t x = 0;
      while (x < na && ++pick[x] == rows.size()) pick[x++] = 0;
      if (x == na) break;
    }
  }

  // deterministic pairwise mass-transfer refinement around the incumbent
  {
    Mat e = best_e;
    for (double step = 1.0 / 32.0; step >= 1e-6; step *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t x = 0; x < na; ++x)
          for (std::size_t from = 0; from < k_count; ++from)
            for (std::size_t to = 0; to < k_count; ++to) {
              if (from == to || e.at(x, from) < step) continue;
              Mat trial = e;
              trial.at(x, from) -= step;
              trial.at(x, to) += step;
              const double t = total_of(trial);
              if (t < best_total - 1e-15) {
                best_total = t;
                e = trial;
                best_e = std::move(trial);
                improved = true;
              }
            }
      }
    }
  }

  const Breakdown b = eval_synonymous(source, d, best_e, recon_partition, sampler, dbar,
                                      lambda_r, lambda_d, lambda_p);
  RatePoint pt;
  pt.rate = std::max(b.rate, 0.0);
  pt.distortion = b.dist;
  pt.perception = b.perc;
  pt.encoder = std::move(best_e);
  pt.converged = true;
  pt.iterations = 1;
  return pt;
}

}  // namespace sic::solver
