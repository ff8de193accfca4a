#include "sic/semantic.hpp"

#include <algorithm>
#include <cmath>

namespace sic::semantic {

namespace {

double plog2p(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw InputError("distribution: empty alphabet");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InputError("distribution: negative or NaN entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw InputError("distribution: entries sum to " + std::to_string(sum) +
                     ", expected 1 within 1e-12");
}

SynonymousPartition::SynonymousPartition(std::vector<std::vector<std::size_t>> groups)
    : groups_(std::move(groups)) {
  if (groups_.empty()) throw InputError("partition: no groups");
  std::size_t total = 0;
  for (const auto& g : groups_) {
    if (g.empty()) throw InputError("partition: empty group");
    total += g.size();
  }
  alphabet_size_ = total;
  group_of_.assign(total, static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < groups_.size(); ++k) {
    for (std::size_t i : groups_[k]) {
      if (i >= total) throw InputError("partition: index out of range");
      if (group_of_[i] != static_cast<std::size_t>(-1))
        throw InputError("partition: index " + std::to_string(i) + " appears twice");
      group_of_[i] = k;
    }
  }
  // disjoint + total count == alphabet size implies full coverage
}

SynonymousPartition SynonymousPartition::singletons(std::size_t n) {
  std::vector<std::vector<std::size_t>> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = {i};
  return SynonymousPartition(std::move(g));
}

SynonymousPartition SynonymousPartition::single_group(std::size_t n) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return SynonymousPartition({all});
}

bool SynonymousPartition::is_singleton() const {
  return std::all_of(groups_.begin(), groups_.end(),
                     [](const auto& g) { return g.size() == 1; });
}

SemanticVariable::SemanticVariable(DiscreteDistribution d, SynonymousPartition p)
    : dist(std::move(d)), partition(std::move(p)) {
  if (dist.size() != partition.alphabet_size())
    throw InputError("semantic variable: partition covers " +
                     std::to_string(partition.alphabet_size()) + " symbols, pmf has " +
                     std::to_string(dist.size()));
}

JointDistribution::JointDistribution(Mat probs) : probs_(std::move(probs)) {
  if (probs_.rows == 0 || probs_.cols == 0) throw InputError("joint: empty");
  double sum = 0.0;
  for (double p : probs_.v) {
    if (!(p >= 0.0)) throw InputError("joint: negative or NaN entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > DiscreteDistribution::kSumTolerance)
    throw InputError("joint: entries sum to " + std::to_string(sum));
}

DiscreteDistribution JointDistribution::marginal_row() const {
  std::vector<double> m(rows(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) m[i] += at(i, j);
    sum += m[i];
  }
  // guard against accumulated drift before re-validation in the ctor
  for (double& p : m) p /= sum;
  return DiscreteDistribution(std::move(m));
}

DiscreteDistribution JointDistribution::marginal_col() const {
  std::vector<double> m(cols(), 0.0);
  double sum = 0.0;
  for (std::size_t j = 0; j < cols(); ++j) {
    for (std::size_t i = 0; i < rows(); ++i) m[j] += at(i, j);
    sum += m[j];
  }
  for (double& p : m) p /= sum;
  return DiscreteDistribution(std::move(m));
}

double shannon_entropy(const DiscreteDistribution& dist) {
  double h = 0.0;
  for (double p : dist.probs()) h -= plog2p(p);
  return h;
}

double synset_probability(const DiscreteDistribution& dist,
                          const SynonymousPartition& partition, std::size_t k) {
  if (k >= partition.group_count())
    throw std::out_of_range("synset_probability: group index out of range");
  if (dist.size() != partition.alphabet_size())
    throw InputError("synset_probability: alphabet mismatch");
  double p = 0.0;
  for (std::size_t i : partition.group(k)) p += dist[i];
  return p;
}

double semantic_entropy(const SemanticVariable& sem) {
  double h = 0.0;
  for (std::size_t k = 0; k < sem.partition.group_count(); ++k)
    h -= plog2p(synset_probability(sem.dist, sem.partition, k));
  return h;
}

double kl_divergence(const DiscreteDistribution& q, const DiscreteDistribution& p) {
  if (q.size() != p.size()) throw InputError("kl_divergence: alphabet mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    if (p[i] <= 0.0)
      throw InputError("kl_divergence: q has mass at symbol " + std::to_string(i) +
                       " where p is zero");
    kl += q[i] * std::log2(q[i] / p[i]);
  }
  return kl;
}

double partial_semantic_kl(const DiscreteDistribution& q, const DiscreteDistribution& p,
                           const SynonymousPartition& partition) {
  if (q.size() != p.size() || q.size() != partition.alphabet_size())
    throw InputError("partial_semantic_kl: alphabet mismatch");
  double kl = 0.0;
  for (std::size_t k = 0; k < partition.group_count(); ++k) {
    const double pk = synset_probability(p, partition, k);
    for (std::size_t i : partition.group(k)) {
      if (q[i] <= 0.0) continue;
      if (pk <= 0.0)
        throw InputError("partial_semantic_kl: q has mass inside synset " +
                         std::to_string(k) + " with zero p-probability");
      kl += q[i] * std::log2(q[i] / pk);
    }
  }
  return kl;
}

double mutual_information(const JointDistribution& joint) {
  const auto pu = joint.marginal_row();
  const auto pv = joint.marginal_col();
  double h_joint = 0.0;
  for (double p : joint.probs().v) h_joint -= plog2p(p);
  return shannon_entropy(pu) + shannon_entropy(pv) - h_joint;
}

double down_semantic_mutual_information(const JointDistribution& joint,
                                        const SynonymousPartition& part_u,
                                        const SynonymousPartition& part_v) {
  if (part_u.alphabet_size() != joint.rows() || part_v.alphabet_size() != joint.cols())
    throw InputError("down_semantic_mutual_information: partition size mismatch");
  const SemanticVariable su(joint.marginal_row(), part_u);
  const SemanticVariable sv(joint.marginal_col(), part_v);
  double h_joint = 0.0;
  for (double p : joint.probs().v) h_joint -= plog2p(p);
  return semantic_entropy(su) + semantic_entropy(sv) - h_joint;
}

}  // namespace sic::semantic
