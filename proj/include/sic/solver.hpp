#pragma once

// Numerical solvers for the classical rate-distortion function, the
// rate-distortion-perception function, and the synonymous RDP function on
// small discrete sources. The synonymous instantiation: reconstructed
// synsets are a fixed partition of a finite reconstruction alphabet, the
// encoder is a stochastic map to synset indices, and detail sampling is
// uniform within a synset. Rates in bits; perception is KL(p_x || p_xhat)
// in bits.

#include <cstdint>
#include <vector>

#include "sic/semantic.hpp"
#include "sic/types.hpp"

namespace sic::solver {

using semantic::DiscreteDistribution;
using semantic::SynonymousPartition;

// d(x, xhat) >= 0 over N_a source symbols and N_b reconstruction symbols.
class DistortionMatrix {
 public:
  explicit DistortionMatrix(Mat d);

  static DistortionMatrix hamming(std::size_t n);

  std::size_t source_size() const { return d_.rows; }
  std::size_t recon_size() const { return d_.cols; }
  double at(std::size_t x, std::size_t b) const { return d_.at(x, b); }
  const Mat& mat() const { return d_; }

 private:
  Mat d_;
};

struct SolverConfig {
  int max_iterations = 5000;
  double convergence_tol = 1e-10;  // objective-change threshold, bits
  double grid_resolution = 0.02;   // simplex grid step for rdp_grid, in (0, 0.5]
  int random_restarts = 8;
  std::uint64_t seed = 0;

  void validate() const;
};

// A point on (or near) a rate-distortion(-perception) surface together with
// the achieving conditional distribution: p(xhat|x) for the classical
// solvers, e(k|x) over synset indices for the synonymous ones. perception
// is NaN when source and reconstruction alphabets differ (KL undefined).
struct RatePoint {
  double rate = 0.0;        // bits/symbol
  double distortion = 0.0;  // distortion units
  double perception = 0.0;  // bits
  Mat encoder;
  bool converged = false;
  int iterations = 0;
};

// Thrown when a solver exhausts its iteration budget; carries the best
// iterate found so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, RatePoint best_iterate)
      : std::runtime_error(msg), best(std::move(best_iterate)) {}
  RatePoint best;
};

// Stochastic encoder to reconstruction-synset indices plus the within-synset
// sampler (one distribution per synset, supported inside the synset).
struct SynonymousCodec {
  Mat encoder;  // N_a x K, rows sum to 1
  std::vector<std::vector<double>> sampler;
  SynonymousPartition recon_partition;

  SynonymousCodec(Mat e, std::vector<std::vector<double>> s, SynonymousPartition part);
  // The uniform sampler the achievability argument assumes.
  static SynonymousCodec with_uniform_sampler(Mat e, SynonymousPartition part);
};

// Deterministic encoder sending x to its average-distortion-nearest synset;
// ties go to the lowest synset index.
Mat nearest_synset_encoder(const DistortionMatrix& d, const SynonymousPartition& part);

// One point of R(D) via alternating minimization of I + slope * E[d]
// (slope >= 0, bits per distortion unit). The objective is non-increasing
// across iterations; convergence when its change drops below tol.
RatePoint blahut_arimoto(const DiscreteDistribution& source, const DistortionMatrix& d,
                         double slope, const SolverConfig& cfg);

// Exhaustive simplex-grid minimization of I(X;Xhat) subject to E[d] <= D and
// KL(p_x||p_xhat) <= P. Alphabets of size <= 3 only (the grid is
// enumerated); larger instances must use rdp_lagrangian. P may be +infinity
// (perception constraint inactive). Throws InfeasibleError when no grid
// channel satisfies both constraints.
RatePoint rdp_grid(const DiscreteDistribution& source, const DistortionMatrix& d,
                   double max_distortion, double max_perception, const SolverConfig& cfg);

// Local minimizer of I + lambda_d * E[d] + lambda_p * KL over direct
// channels p(xhat|x): multiplicative-update descent with random restarts.
RatePoint rdp_lagrangian(const DiscreteDistribution& source, const DistortionMatrix& d,
                         double lambda_d, double lambda_p, const SolverConfig& cfg);

// Evaluate the synonymous tradeoff objective for a fixed codec:
//   rate       = I(X;K) = H(K) - H(K|X), K the synset index
//   distortion = E_{x,k~e,b~s_k} d(x, b)
//   perception = KL(p_x || p_xhat), p_xhat the sampled reconstruction marginal
//   total      = lambda_r*rate + lambda_d*distortion + lambda_p*perception
// A perception support violation throws when lambda_p > 0; with
// lambda_p == 0 perception reports +infinity and the total omits the term.
LossBreakdown synonymous_lagrangian_objective(const DiscreteDistribution& source,
                                              const DistortionMatrix& d,
                                              const SynonymousCodec& codec,
                                              double lambda_r, double lambda_d,
                                              double lambda_p);

// Minimize the synonymous objective (lambda_r = 1, uniform sampler) over
// encoders e(k|x) by multiplicative-update descent with random restarts.
RatePoint synonymous_rdp(const DiscreteDistribution& source, const DistortionMatrix& d,
                         const SynonymousPartition& recon_partition, double lambda_d,
                         double lambda_p, const SolverConfig& cfg);

// Test oracle: global minimum over all deterministic encoders plus a coarse
// stochastic grid with deterministic local refinement. Source alphabet <= 4
// and synset count <= 3; larger instances are a size error.
RatePoint brute_force_codec_search(const DiscreteDistribution& source,
                                   const DistortionMatrix& d,
                                   const SynonymousPartition& recon_partition,
                                   double lambda_r, double lambda_d, double lambda_p);

}  // namespace sic::solver
