// Copyright 2020 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "leadersel/errors.hpp"
#include "leadersel/graph.hpp"
#include "leadersel/spectral.hpp"
#include "leadersel/sysmodel.hpp"
#include "test_util.hpp"

namespace leadersel {
namespace {

SwitchedModel tiny(int N, std::vector<std::pair<int, int>> edges,
                   const Eigen::MatrixXd& A) {
  SwitchedModel m;
  m.A = A;
  m.topologies = {Digraph(N, edges)};
  m.tddt = {{1.0}, {2.0}};
  m.params.l = {1};
  m.params.mu = {0.5};
  m.params.eta = {1.0};
  return m;
}

// Entry-by-entry expansion of I (x) A - L (x) I - D (x) K.
Eigen::MatrixXd index_oracle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& L,
                             const Eigen::MatrixXd& D, const Eigen::MatrixXd& K) {
  const int N = static_cast<int>(L.rows());
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd M(N * n, N * n);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          double v = -L(i, j) * (a == b ? 1.0 : 0.0);
          if (i == j) v += A(a, b) - D(i, i) * K(a, b);
          M(i * n + a, j * n + b) = v;
        }
      }
    }
  }
  return M;
}

std::vector<double> sorted_re(const Eigen::MatrixXd& M) {
  std::vector<double> v;
  for (const auto& e : eig(M)) v.push_back(e.value.real());
  std::sort(v.begin(), v.end());
  return v;
}

TEST(ModeMatrix, SingleAgentIsA) {
  std::mt19937_64 rng(1);
  SwitchedModel m = tiny(1, {}, testing::random_matrix(3, 3, rng));
  m.gains = {Eigen::MatrixXd::Identity(3, 3)};
  EXPECT_EQ(mode_matrix(m, 0), m.A);
}

TEST(ModeMatrix, TwoAgentHandExpansion) {
  SwitchedModel m = tiny(2, {{1, 2}}, Eigen::MatrixXd::Zero(2, 2));
  m.leaders = {1};
  m.gains = {Eigen::MatrixXd::Identity(2, 2)};
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected.block(0, 0, 2, 2) = -Eigen::MatrixXd::Identity(2, 2);
  expected.block(2, 0, 2, 2) = Eigen::MatrixXd::Identity(2, 2);
  expected.block(2, 2, 2, 2) = -Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(mode_matrix(m, 0), expected);
}

TEST(ModeMatrix, MissingGainsRejected) {
  SwitchedModel m = tiny(2, {{1, 2}}, Eigen::MatrixXd::Zero(1, 1));
  EXPECT_THROW(mode_matrix(m, 0), InputError);
}

TEST(ModeMatrix, MatchesIndexOracle) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    const int N = 2 + t % 4;
    const int n = 1 + t % 3;
    SwitchedModel m = testing::random_model(N, n, 2, rng);
    m.leaders.clear();
    for (int i = 1; i <= N; ++i) {
      if ((i + t) % 2 == 0) m.leaders.push_back(i);
    }
    m.gains = {testing::random_matrix(n, n, rng), testing::random_matrix(n, n, rng)};
    for (int p = 0; p < 2; ++p) {
      const Eigen::MatrixXd expected =
          index_oracle(m.A, laplacian(m.topologies[p]),
                       leader_matrix(N, m.leaders), m.gains[p]);
      EXPECT_LE((mode_matrix(m, p) - expected).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(ModeMatrix, NoLeadersIsOpenLoop) {
  std::mt19937_64 rng(3);
  SwitchedModel m = testing::random_model(4, 2, 1, rng);
  m.gains = {testing::random_matrix(2, 2, rng)};
  EXPECT_EQ(mode_matrix(m, 0), open_loop(m, 0));
}

TEST(ModeMatrix, AllLeadersWithScalarGainShiftsSpectrum) {
  // Undirected topologies keep the spectrum well conditioned; repeated
  // in-degrees on digraphs produce Jordan blocks sensitive at sqrt(eps).
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    SwitchedModel m = testing::random_model(4, 2, 1, rng);
    m.topologies[0] = testing::undirected(m.topologies[0]);
    const double kappa = 0.3 + t;
    m.leaders = {1, 2, 3, 4};
    m.gains = {kappa * Eigen::MatrixXd::Identity(2, 2)};
    const auto a = sorted_re(mode_matrix(m, 0));
    auto b = sorted_re(open_loop(m, 0));
    for (double& x : b) x -= kappa;
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-8);
  }
}

TEST(ShiftedOpenLoop, ZeroShiftWhenRateMatchesDiscretization) {
  std::mt19937_64 rng(5);
  SwitchedModel m = testing::random_model(3, 2, 1, rng);
  m.params.l = {2};
  m.tddt.tau_min = {1.0};
  m.params.eta = {2.0};
  EXPECT_EQ(shifted_open_loop(m, 0), open_loop(m, 0));
}

TEST(ShiftedOpenLoop, SingleAgent) {
  std::mt19937_64 rng(6);
  SwitchedModel m = tiny(1, {}, testing::random_matrix(2, 2, rng));
  const double s = 0.5 * (1.0 / 1.0 - 1.0);
  EXPECT_TRUE(shifted_open_loop(m, 0).isApprox(
      m.A + s * Eigen::MatrixXd::Identity(2, 2)));
  m.params.eta = {-3.0};
  const Eigen::MatrixXd expected = m.A + 2.0 * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(shifted_open_loop(m, 0), expected);
}

TEST(ShiftedOpenLoop, DifferenceIsScalarShift) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    SwitchedModel m = testing::random_model(3, 2, 2, rng);
    m.params.eta = {0.7 + t, -0.2 * t - 0.1};
    m.params.l = {1 + t % 3, 2};
    for (int p = 0; p < 2; ++p) {
      const double s = 0.5 * (m.params.l[p] / m.tddt.tau_min[p] - m.params.eta[p]);
      const Eigen::MatrixXd diff = shifted_open_loop(m, p) - open_loop(m, p);
      EXPECT_TRUE(diff.isApprox(s * Eigen::MatrixXd::Identity(6, 6), 1e-14));
    }
  }
}

TEST(Shifts, ScalarExamples) {
  CertificateParams q;
  q.l = {2};
  q.eta = {4.0};
  q.mu = {0.5};
  DwellWindows w{{1.0}, {2.0}};
  const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(3, 3);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_EQ(shift_1(Z, 0, q, w), -3.0 * I);
  EXPECT_EQ(shift_2(Z, 0, q, w), -1.0 * I);
  q.l = {1};
  q.eta = {1.0};
  EXPECT_EQ(shift_1(I, 0, q, w), Z);
  EXPECT_EQ(shift_2(I, 0, q, w), I);
  EXPECT_DOUBLE_EQ(shift_2_amount(0, q, w) - (-shift_1_amount(0, q, w)),
                   q.l[0] / w.tau_min[0]);
}

TEST(Shifts, SpectrumMovesByShiftAndCommutesWithIdentity) {
  std::mt19937_64 rng(8);
  CertificateParams q;
  q.l = {3};
  q.eta = {0.4};
  q.mu = {0.5};
  DwellWindows w{{1.5}, {2.0}};
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd M = testing::random_matrix(5, 5, rng);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(5, 5);
    auto base = sorted_re(M);
    auto s1 = sorted_re(shift_1(M, 0, q, w));
    auto s2 = sorted_re(shift_2(M, 0, q, w));
    for (size_t i = 0; i < base.size(); ++i) {
      EXPECT_NEAR(s1[i], base[i] - shift_1_amount(0, q, w), 1e-9);
      EXPECT_NEAR(s2[i], base[i] + shift_2_amount(0, q, w), 1e-9);
    }
    EXPECT_TRUE(shift_1(M + 0.7 * I, 0, q, w).isApprox(shift_1(M, 0, q, w) + 0.7 * I));
    EXPECT_TRUE(shift_2(M + 0.7 * I, 0, q, w).isApprox(shift_2(M, 0, q, w) + 0.7 * I));
  }
}

TEST(Validate, RejectsBadModels) {
  SwitchedModel m = tiny(2, {{1, 2}}, Eigen::MatrixXd::Zero(1, 1));
  EXPECT_NO_THROW(m.validate());
  SwitchedModel bad = m;
  bad.tddt.tau_min = {3.0};
  EXPECT_THROW(bad.validate(), InputError);
  bad = m;
  bad.params.beta_setting = 1.5;
  EXPECT_THROW(bad.validate(), InputError);
  bad = m;
  bad.leaders = {1, 1};
  EXPECT_THROW(bad.validate(), InputError);
  bad = m;
  bad.leaders = {3};
  EXPECT_THROW(bad.validate(), InputError);
  bad = m;
  bad.gains = {Eigen::MatrixXd::Identity(2, 2)};
  EXPECT_THROW(bad.validate(), InputError);
  bad = m;
  bad.params.eta = {0.0};
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(Validate, DefaultPhiFollowsDiscretization) {
  SwitchedModel m = tiny(2, {{1, 2}}, Eigen::MatrixXd::Zero(1, 1));
  m.params.phi = 0.0;
  EXPECT_DOUBLE_EQ(m.phi(), 1e-3);
  m.params.phi = 0.2;
  EXPECT_DOUBLE_EQ(m.phi(), 0.2);
}

}  // namespace
}  // namespace leadersel
