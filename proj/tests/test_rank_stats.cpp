/*
 * Copyright 2026 The tsauc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "tsauc/errors.hpp"
#include "tsauc/random.hpp"
#include "tsauc/rank_stats.hpp"

using namespace tsauc;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Eigen::VectorXd random_scores(Rng& rng, int n, bool with_ties) {
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i)
    out[i] = with_ties ? static_cast<double>(rng.uniform_int(0, 9))
                       : rng.normal();
  return out;
}

}  // namespace

TEST_SUITE("rank_stats") {

TEST_CASE("u statistic on hand examples") {
  CHECK(u_statistic({vec({3, 4}), vec({1, 2})}) == 4.0);
  CHECK(u_statistic({vec({1}), vec({1})}) == 0.5);
  CHECK(u_statistic({vec({2, 5}), vec({1, 3, 4})}) == 4.0);
}

TEST_CASE("u statistic equals pairwise brute force, with ties") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const int n1 = rng.uniform_int(1, 25);
    const int n2 = rng.uniform_int(1, 25);
    GroupedScores g{random_scores(rng, n1, rep % 2 == 0),
                    random_scores(rng, n2, rep % 2 == 0)};
    CHECK(u_statistic(g) == oracle::u_brute(g.pos, g.neg));
  }
}

TEST_CASE("complementarity: U(pos,neg) + U(neg,pos) == n1*n2") {
  Rng rng(12);
  for (int rep = 0; rep < 200; ++rep) {
    const int n1 = rng.uniform_int(1, 20);
    const int n2 = rng.uniform_int(1, 20);
    GroupedScores g{random_scores(rng, n1, true), random_scores(rng, n2, true)};
    const double forward = u_statistic(g);
    const double backward = u_statistic({g.neg, g.pos});
    CHECK(forward + backward == static_cast<double>(n1) * n2);
  }
}

TEST_CASE("auc_from_u basics and bounds") {
  CHECK(auc_from_u(4.0, 2, 2) == 1.0);
  CHECK(auc_from_u(0.5, 1, 1) == 0.5);
  CHECK_THROWS_AS(auc_from_u(5.0, 2, 2), ValidationError);
  CHECK_THROWS_AS(auc_from_u(1.0, 0, 2), ValidationError);
}

TEST_CASE("auc equals ordered-pair fraction exactly") {
  Rng rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const int n1 = rng.uniform_int(1, 30);
    const int n2 = rng.uniform_int(1, 30);
    GroupedScores g{random_scores(rng, n1, true), random_scores(rng, n2, true)};
    CHECK(auc_from_u(u_statistic(g), n1, n2) == oracle::auc_brute(g.pos, g.neg));
  }
}

TEST_CASE("auc invariant under strictly increasing transforms") {
  Rng rng(14);
  for (int rep = 0; rep < 50; ++rep) {
    GroupedScores g{random_scores(rng, 12, false), random_scores(rng, 9, false)};
    const double base = auc_from_u(u_statistic(g), 12, 9);
    GroupedScores t{g.pos.array().exp().matrix(), g.neg.array().exp().matrix()};
    CHECK(auc_from_u(u_statistic(t), 12, 9) == base);
    GroupedScores a{(3.0 * g.pos).array() + 7.0, (3.0 * g.neg).array() + 7.0};
    CHECK(auc_from_u(u_statistic(a), 12, 9) == base);
  }
}

TEST_CASE("exact p-value: complete separation of {3,4} vs {1,2} gives 1/6") {
  const GroupedScores g{vec({3, 4}), vec({1, 2})};
  CHECK(mww_pvalue(g, Alternative::greater) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(mww_pvalue_exact(g, Alternative::greater) ==
        doctest::Approx(oracle::mww_exact_greater(g.pos, g.neg)).epsilon(1e-12));
}

TEST_CASE("exact p-value matches the independent enumeration oracle") {
  Rng rng(15);
  for (int rep = 0; rep < 60; ++rep) {
    const int n1 = rng.uniform_int(1, 6);
    const int n2 = rng.uniform_int(1, 6);
    GroupedScores g{random_scores(rng, n1, false), random_scores(rng, n2, false)};
    CHECK(mww_pvalue_exact(g, Alternative::greater) ==
          doctest::Approx(oracle::mww_exact_greater(g.pos, g.neg)).epsilon(1e-12));
  }
}

TEST_CASE("identical groups give p >= 0.5 under greater") {
  const GroupedScores g{vec({1, 2, 3, 4, 5}), vec({1, 2, 3, 4, 5})};
  CHECK(mww_pvalue(g, Alternative::greater) >= 0.5);
}

TEST_CASE("exact and normal approximation agree within 0.02 at sizes (10,10)") {
  Rng rng(16);
  double max_diff = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    GroupedScores g{random_scores(rng, 10, false), random_scores(rng, 10, false)};
    for (Alternative alt : {Alternative::greater, Alternative::two_sided}) {
      const double diff =
          std::abs(mww_pvalue_exact(g, alt) - mww_pvalue_normal(g, alt));
      max_diff = std::max(max_diff, diff);
    }
  }
  CHECK(max_diff < 0.02);
}

TEST_CASE("null p-values are approximately uniform (KS < 0.06 over 1000 reps)") {
  Rng rng(17);
  std::vector<double> pvals;
  pvals.reserve(1000);
  for (int rep = 0; rep < 1000; ++rep) {
    GroupedScores g{random_scores(rng, 50, false), random_scores(rng, 50, false)};
    pvals.push_back(mww_pvalue(g, Alternative::greater));
  }
  CHECK(oracle::ks_uniform_distance(pvals) < 0.06);
}

TEST_CASE("p-values always within (0, 1]") {
  Rng rng(18);
  for (int rep = 0; rep < 100; ++rep) {
    GroupedScores g{random_scores(rng, rng.uniform_int(1, 15), true),
                    random_scores(rng, rng.uniform_int(1, 15), true)};
    for (Alternative alt : {Alternative::greater, Alternative::two_sided}) {
      const double p = mww_pvalue(g, alt);
      CHECK(p > 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("bonferroni and sidak levels at m = 17, alpha = 0.05") {
  std::vector<double> p(17, 0.5);
  const auto bonf = correct(p, 0.05, CorrectionMethod::bonferroni);
  CHECK(bonf.levels[0] == doctest::Approx(0.05 / 17.0).epsilon(1e-15));
  CHECK(bonf.levels[0] == doctest::Approx(0.002941).epsilon(1e-4));

  const auto sidak = correct(p, 0.05, CorrectionMethod::sidak);
  CHECK(sidak.levels[0] == 1.0 - std::pow(0.95, 1.0 / 17.0));
  // Rounds to the conventional 0.003 at report precision.
  CHECK(sidak.levels[0] == doctest::Approx(0.003).epsilon(0.01));
}

TEST_CASE("holm step-down example") {
  const std::vector<double> p = {0.01, 0.02, 0.5};
  const auto res = correct(p, 0.05, CorrectionMethod::holm);
  CHECK(res.levels[0] == doctest::Approx(0.05 / 3.0).epsilon(1e-12));
  CHECK(res.levels[1] == doctest::Approx(0.05 / 2.0).epsilon(1e-12));
  CHECK(res.levels[2] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(res.decisions == std::vector<bool>{true, true, false});
}

TEST_CASE("holm stops at the first failure") {
  // 0.03 fails its rank-2 level 0.025; 0.04 sits below its own rank-3 level
  // 0.05 but must not reject once the walk has stopped.
  const std::vector<double> p = {0.001, 0.03, 0.04};
  const auto res = correct(p, 0.05, CorrectionMethod::holm);
  CHECK(res.decisions[0]);
  CHECK_FALSE(res.decisions[1]);
  CHECK_FALSE(res.decisions[2]);
  CHECK(p[2] < res.levels[2]);  // the stop rule, not the level, blocks it
}

TEST_CASE("decision nesting: bonferroni within holm within raw") {
  Rng rng(19);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = rng.uniform_int(1, 20);
    std::vector<double> p(static_cast<std::size_t>(m));
    for (double& v : p) v = rng.uniform01();
    const auto bonf = correct(p, 0.05, CorrectionMethod::bonferroni);
    const auto holm = correct(p, 0.05, CorrectionMethod::holm);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (bonf.decisions[i]) CHECK(holm.decisions[i]);
      if (holm.decisions[i]) CHECK(p[i] < 0.05);
    }
  }
}

TEST_CASE("correct validates input") {
  CHECK_THROWS_AS(correct({}, 0.05, CorrectionMethod::bonferroni), ValidationError);
  CHECK_THROWS_AS(correct({0.5}, 1.5, CorrectionMethod::holm), ValidationError);
  CHECK_THROWS_AS(correct({1.5}, 0.05, CorrectionMethod::sidak), ValidationError);
}

TEST_CASE("split_by_label partitions scores") {
  Eigen::VectorXd scores(5);
  scores << 0.1, 0.9, 0.5, 0.3, 0.7;
  Eigen::ArrayXi labels(5);
  labels << 0, 1, 1, 0, 1;
  const GroupedScores g = split_by_label(scores, labels);
  CHECK(g.pos.size() == 3);
  CHECK(g.neg.size() == 2);
  CHECK(g.pos[0] == 0.9);
  CHECK(g.neg[1] == 0.3);
}

}  // TEST_SUITE
