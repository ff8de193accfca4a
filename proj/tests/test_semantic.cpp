#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sic/rng.hpp"
#include "sic/semantic.hpp"

using namespace sic;
using namespace sic::semantic;

namespace {

// random strictly-positive distribution, sum exactly renormalized
DiscreteDistribution random_dist(rng::Stream& rs, std::size_t n) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& v : p) {
    v = 0.05 + rs.next_unit();
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return DiscreteDistribution(p);
}

SynonymousPartition random_partition(rng::Stream& rs, std::size_t n) {
  const std::size_t k = 1 + rs.next_u64() % n;
  std::vector<std::vector<std::size_t>> groups(k);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // shuffle, then deal one index to each group before spreading the rest
  for (std::size_t i = n; i > 1; --i)
    std::swap(idx[i - 1], idx[rs.next_u64() % i]);
  for (std::size_t i = 0; i < n; ++i)
    groups[i < k ? i : rs.next_u64() % k].push_back(idx[i]);
  return SynonymousPartition(groups);
}

}  // namespace

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.6}), InputError);
  CHECK_THROWS_AS(DiscreteDistribution({-0.1, 1.1}), InputError);
  CHECK_THROWS_AS(DiscreteDistribution({}), InputError);
  CHECK_NOTHROW(DiscreteDistribution({0.5, 0.25, 0.25}));
  CHECK_NOTHROW(DiscreteDistribution({1.0, 0.0}));  // zero entries allowed
}

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(SynonymousPartition({{0, 1}, {1, 2}}), InputError);  // overlap
  CHECK_THROWS_AS(SynonymousPartition({{0}, {}, {1}}), InputError);    // empty group
  CHECK_THROWS_AS(SynonymousPartition({{0, 3}}), InputError);          // gap
  const SynonymousPartition p({{0, 2}, {1}});
  CHECK(p.alphabet_size() == 3);
  CHECK(p.group_of(2) == 0);
  CHECK(SynonymousPartition::singletons(4).is_singleton());
  CHECK_FALSE(SynonymousPartition::single_group(4).is_singleton());
}

TEST_CASE("shannon entropy") {
  CHECK(shannon_entropy(DiscreteDistribution({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(shannon_entropy(DiscreteDistribution({1.0, 0.0})) == doctest::Approx(0.0));
  // -(0.5*(-1) + 2*0.25*(-2)) = 1.5
  CHECK(shannon_entropy(DiscreteDistribution({0.5, 0.25, 0.25})) ==
        doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("synset probability") {
  const DiscreteDistribution d({0.5, 0.25, 0.25});
  const SynonymousPartition p({{0, 1}, {2}});
  CHECK(synset_probability(d, p, 0) == doctest::Approx(0.75));
  CHECK(synset_probability(d, p, 1) == doctest::Approx(0.25));
  CHECK(synset_probability(d, SynonymousPartition::single_group(3), 0) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(synset_probability(d, p, 2), std::out_of_range);
}

TEST_CASE("semantic entropy") {
  const DiscreteDistribution d({0.5, 0.25, 0.25});
  CHECK(semantic_entropy({d, SynonymousPartition::singletons(3)}) ==
        doctest::Approx(1.5));
  CHECK(semantic_entropy({d, SynonymousPartition::single_group(3)}) ==
        doctest::Approx(0.0));
  // {{0,1},{2}} -> binary entropy of 0.25
  CHECK(semantic_entropy({d, SynonymousPartition({{0, 1}, {2}})}) ==
        doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("kl divergence") {
  const DiscreteDistribution q({0.5, 0.5}), p({0.25, 0.75});
  CHECK(kl_divergence(q, q) == doctest::Approx(0.0));
  // 0.5*log2(2) + 0.5*log2(2/3)
  CHECK(kl_divergence(q, p) == doctest::Approx(0.207519).epsilon(1e-6));
  CHECK_THROWS_AS(kl_divergence(DiscreteDistribution({1.0, 0.0}),
                                DiscreteDistribution({0.0, 1.0})),
                  InputError);
}

TEST_CASE("partial semantic kl") {
  const DiscreteDistribution q({0.5, 0.5}), p({0.25, 0.75});
  // single all-covering synset: sum q log2 q = -1
  CHECK(partial_semantic_kl(q, p, SynonymousPartition::single_group(2)) ==
        doctest::Approx(-1.0));
  // singleton partition reduces to standard KL exactly
  CHECK(partial_semantic_kl(q, p, SynonymousPartition::singletons(2)) ==
        kl_divergence(q, p));
  CHECK(partial_semantic_kl(q, q, SynonymousPartition::singletons(2)) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(partial_semantic_kl(DiscreteDistribution({0.5, 0.5}),
                                      DiscreteDistribution({0.0, 1.0}),
                                      SynonymousPartition({{0}, {1}})),
                  InputError);
}

TEST_CASE("mutual information") {
  // independent uniform
  CHECK(mutual_information(JointDistribution(Mat(2, 2, 0.25))) ==
        doctest::Approx(0.0).epsilon(1e-12));
  Mat ident(2, 2, 0.0);
  ident.at(0, 0) = ident.at(1, 1) = 0.5;
  CHECK(mutual_information(JointDistribution(ident)) == doctest::Approx(1.0));
  Mat j(2, 2);
  j.at(0, 0) = j.at(1, 1) = 0.4;
  j.at(0, 1) = j.at(1, 0) = 0.1;
  // direct formula evaluation: 0.8*log2(1.6) + 0.2*log2(0.4)
  double expect = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) expect += j.at(a, b) * std::log2(j.at(a, b) / 0.25);
  CHECK(expect == doctest::Approx(0.278072).epsilon(1e-6));
  CHECK(mutual_information(JointDistribution(j)) == doctest::Approx(expect));
}

TEST_CASE("down semantic mutual information") {
  Mat ident(2, 2, 0.0);
  ident.at(0, 0) = ident.at(1, 1) = 0.5;
  const JointDistribution copy(ident);
  const auto s2 = SynonymousPartition::singletons(2);
  CHECK(down_semantic_mutual_information(copy, s2, s2) == doctest::Approx(1.0));
  // independent uniform with V fully merged: 1 + 0 - 2 = -1
  const JointDistribution indep(Mat(2, 2, 0.25));
  CHECK(down_semantic_mutual_information(indep, s2,
                                         SynonymousPartition::single_group(2)) ==
        doctest::Approx(-1.0));
  CHECK(down_semantic_mutual_information(indep, s2, s2) ==
        doctest::Approx(mutual_information(indep)).epsilon(1e-12));
}

TEST_CASE("properties on random instances") {
  rng::Stream rs(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rs.next_u64() % 11;
    const auto dist = random_dist(rs, n);
    const auto part = random_partition(rs, n);
    const double h = shannon_entropy(dist);
    const double hs = semantic_entropy({dist, part});

    CHECK(hs >= -1e-12);
    CHECK(hs <= h + 1e-10);
    if (part.is_singleton())
      CHECK(hs == doctest::Approx(h).epsilon(1e-12));
    else
      CHECK(hs < h - 1e-12);  // strict: all entries have positive mass

    // grouping chain rule: H = H_s + sum_k p_k H(conditional within synset)
    double within = 0.0;
    for (std::size_t k = 0; k < part.group_count(); ++k) {
      const double pk = synset_probability(dist, part, k);
      double hk = 0.0;
      for (std::size_t i : part.group(k)) {
        const double c = dist[i] / pk;
        if (c > 0) hk -= c * std::log2(c);
      }
      within += pk * hk;
    }
    CHECK(h == doctest::Approx(hs + within).epsilon(1e-10));

    // partial semantic KL never exceeds the standard KL
    const auto q = random_dist(rs, n);
    CHECK(partial_semantic_kl(q, dist, part) <= kl_divergence(q, dist) + 1e-10);
  }
}

TEST_CASE("down semantic mutual information never exceeds classical") {
  rng::Stream rs(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t na = 2 + rs.next_u64() % 5, nb = 2 + rs.next_u64() % 5;
    Mat m(na, nb);
    double sum = 0.0;
    for (auto& v : m.v) {
      v = 0.02 + rs.next_unit();
      sum += v;
    }
    for (auto& v : m.v) v /= sum;
    const JointDistribution joint(m);
    const auto pu = random_partition(rs, na);
    const auto pv = random_partition(rs, nb);
    CHECK(down_semantic_mutual_information(joint, pu, pv) <=
          mutual_information(joint) + 1e-10);
  }
}

TEST_CASE("measures invariant under simultaneous permutation") {
  rng::Stream rs(29);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rs.next_u64() % 8;
    const auto dist = random_dist(rs, n);
    const auto part = random_partition(rs, n);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i > 1; --i)
      std::swap(perm[i - 1], perm[rs.next_u64() % i]);

    std::vector<double> pp(n);
    for (std::size_t i = 0; i < n; ++i) pp[perm[i]] = dist[i];
    std::vector<std::vector<std::size_t>> pg;
    for (const auto& g : part.groups()) {
      std::vector<std::size_t> ng;
      for (std::size_t i : g) ng.push_back(perm[i]);
      pg.push_back(ng);
    }
    const DiscreteDistribution dist2(pp);
    const SynonymousPartition part2(pg);

    CHECK(shannon_entropy(dist2) == doctest::Approx(shannon_entropy(dist)).epsilon(1e-12));
    CHECK(semantic_entropy({dist2, part2}) ==
          doctest::Approx(semantic_entropy({dist, part})).epsilon(1e-12));
    const auto q = random_dist(rs, n);
    std::vector<double> qq(n);
    for (std::size_t i = 0; i < n; ++i) qq[perm[i]] = q[i];
    CHECK(partial_semantic_kl(DiscreteDistribution(qq), dist2, part2) ==
          doctest::Approx(partial_semantic_kl(q, dist, part)).epsilon(1e-12));
  }
}
