#pragma once

// Discrete sources, synonymous partitions, and the semantic information
// measures built on them: semantic entropy over synset probabilities,
// partial semantic KL divergence, and down semantic mutual information.
// All rates are in bits (log base 2), 0*log(0) == 0 throughout.

#include <cstddef>
#include <vector>

#include "sic/types.hpp"

namespace sic::semantic {

// Finite pmf over an alphabet of size N. Entries must be >= 0 and sum to 1
// within 1e-12; inputs outside tolerance are rejected, never renormalized.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  static constexpr double kSumTolerance = 1e-12;

 private:
  std::vector<double> probs_;
};

// A partition of [0, N) into non-empty, pairwise disjoint synsets that
// together cover the alphabet. Group order is meaningful (synset index).
class SynonymousPartition {
 public:
  explicit SynonymousPartition(std::vector<std::vector<std::size_t>> groups);

  static SynonymousPartition singletons(std::size_t n);
  static SynonymousPartition single_group(std::size_t n);

  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t group_count() const { return groups_.size(); }
  const std::vector<std::size_t>& group(std::size_t k) const { return groups_[k]; }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }
  // Synset index of an alphabet symbol.
  std::size_t group_of(std::size_t i) const { return group_of_[i]; }
  bool is_singleton() const;

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::size_t> group_of_;
  std::size_t alphabet_size_ = 0;
};

// A discrete pmf together with the synonymous mapping over its alphabet.
struct SemanticVariable {
  DiscreteDistribution dist;
  SynonymousPartition partition;

  SemanticVariable(DiscreteDistribution d, SynonymousPartition p);
};

// Joint pmf over N_a x N_b. Entries >= 0, total sum 1 within 1e-12.
class JointDistribution {
 public:
  explicit JointDistribution(Mat probs);

  std::size_t rows() const { return probs_.rows; }
  std::size_t cols() const { return probs_.cols; }
  double at(std::size_t i, std::size_t j) const { return probs_.at(i, j); }
  const Mat& probs() const { return probs_; }

  DiscreteDistribution marginal_row() const;  // over the first variable
  DiscreteDistribution marginal_col() const;  // over the second variable

 private:
  Mat probs_;
};

// H(U) = -sum p log2 p.
double shannon_entropy(const DiscreteDistribution& dist);

// p(U_k) = sum of member probabilities of synset k.
double synset_probability(const DiscreteDistribution& dist,
                          const SynonymousPartition& partition, std::size_t k);

// H_s(U°) = -sum_k p(U_k) log2 p(U_k). Always within [0, H(U)].
double semantic_entropy(const SemanticVariable& sem);

// D_KL[q || p] in bits. Throws InputError if q puts mass where p has none.
double kl_divergence(const DiscreteDistribution& q, const DiscreteDistribution& p);

// Partial semantic KL: sum_k sum_{i in k} q(u_i) log2(q(u_i) / p(U_k)).
// May be negative; never exceeds kl_divergence(q, p). Throws InputError if
// some synset has zero p-probability but carries q-mass.
double partial_semantic_kl(const DiscreteDistribution& q, const DiscreteDistribution& p,
                           const SynonymousPartition& partition);

// Classical I(U;V) = H(U) + H(V) - H(U,V).
double mutual_information(const JointDistribution& joint);

// I_s(U°;V°) = H_s(U°) + H_s(V°) - H(U,V). May be negative; never exceeds
// mutual_information(joint).
double down_semantic_mutual_information(const JointDistribution& joint,
                                        const SynonymousPartition& part_u,
                                        const SynonymousPartition& part_v);

}  // namespace sic::semantic
