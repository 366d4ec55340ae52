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
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "leadersel/errors.hpp"
#include "leadersel/simulate.hpp"
#include "leadersel/spectral.hpp"
#include "test_util.hpp"

namespace leadersel {
namespace {

using cd = std::complex<double>;

Eigen::MatrixXd reference_agent_matrix() {
  Eigen::MatrixXd A(3, 3);
  A << 0.4147, -0.4087, -0.1287, 0.3802, -0.3380, -0.3305, 0.1313, -0.7076,
      0.0233;
  return A;
}

TEST(Eig, ReferenceAgentMatrixSpectrum) {
  const auto e = eig(reference_agent_matrix());
  ASSERT_EQ(e.size(), 3u);
  EXPECT_NEAR(e[0].value.real(), 0.30, 5e-3);
  EXPECT_NEAR(e[0].value.imag(), 0.10, 5e-3);
  EXPECT_NEAR(e[1].value.real(), 0.30, 5e-3);
  EXPECT_NEAR(e[1].value.imag(), -0.10, 5e-3);
  EXPECT_NEAR(e[2].value.real(), -0.50, 5e-3);
  EXPECT_NEAR(e[2].value.imag(), 0.0, 1e-12);
}

TEST(Eig, DiagonalGivesCoordinateVectors) {
  Eigen::MatrixXd M = Eigen::Vector3d(1, 2, 3).asDiagonal();
  const auto e = eig(M);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(e[i].value.real(), 3 - i, 1e-14);
    EXPECT_NEAR(std::abs(e[i].vector(2 - i)), 1.0, 1e-14);
  }
}

TEST(Eig, ResidualsNormsAndOrdering) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd M = testing::random_matrix(8, 8, rng);
    const auto e = eig(M);
    const double nm = M.norm();
    for (size_t i = 0; i < e.size(); ++i) {
      const Eigen::VectorXcd r = M.cast<cd>() * e[i].vector - e[i].value * e[i].vector;
      EXPECT_LE(r.norm(), 1e-8 * nm);
      EXPECT_NEAR(e[i].vector.norm(), 1.0, 1e-10);
      EXPECT_LE(e[i].value.real(), e[0].value.real());
      if (i > 0) EXPECT_GE(e[i - 1].value.real(), e[i].value.real());
    }
    EXPECT_DOUBLE_EQ(rightmost_real(M), e[0].value.real());
  }
}

TEST(Eig, RejectsNonFinite) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2, 2);
  M(0, 1) = std::nan("");
  EXPECT_THROW(eig(M), std::exception);
}

TEST(Ctrb, ZeroAndIdentity) {
  const Eigen::MatrixXd B = Eigen::MatrixXd::Identity(3, 3).leftCols(2);
  const Eigen::MatrixXd C0 = ctrb(Eigen::MatrixXd::Zero(3, 3), B);
  ASSERT_EQ(C0.cols(), 6);
  EXPECT_EQ(C0.leftCols(2), B);
  EXPECT_TRUE(C0.rightCols(4).isZero());
  const Eigen::MatrixXd C1 = ctrb(Eigen::MatrixXd::Identity(3, 3), B);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(C1.middleCols(2 * k, 2), B);
  EXPECT_THROW(ctrb(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(2, 1)),
               InputError);
}

// Finite-horizon Gramian over [0, 1] by composite Simpson quadrature.
Eigen::MatrixXd gramian(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const int steps = 200;
  const double h = 1.0 / steps;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(A.rows(), A.rows());
  for (int i = 0; i <= steps; ++i) {
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const Eigen::MatrixXd E = expm(A, i * h) * B;
    W += w * E * E.transpose();
  }
  return W * h / 3.0;
}

int real_rank(const Eigen::MatrixXd& M, double tol) {
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > tol * sv(0) ? 1 : 0;
  return r;
}

TEST(Ctrb, RankMatchesQuadratureGramian) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    // Block-diagonal A with input entering only the first block yields an
    // uncontrollable remainder of known size.
    const int k = 1 + t % 5;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6, 6);
    A.topLeftCorner(k, k) = testing::random_matrix(k, k, rng, 0.5);
    A.bottomRightCorner(6 - k, 6 - k) = testing::random_matrix(6 - k, 6 - k, rng, 0.5);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(6, 1);
    B.topRows(k) = testing::random_matrix(k, 1, rng);
    const int rc = span_basis(ctrb(A, B)).rank;
    EXPECT_EQ(rc, k);
    // The uncontrollable block of the Gramian is exactly zero, so a tight
    // tolerance only has to separate it from genuine small singular values.
    EXPECT_EQ(real_rank(gramian(A, B), 1e-15), rc);
    EXPECT_EQ(controllable_basis(A, B).rank, rc);
  }
}

TEST(SpanBasis, Examples) {
  EXPECT_EQ(span_basis(Eigen::MatrixXd::Identity(4, 4)).rank, 4);
  EXPECT_EQ(span_basis(Eigen::MatrixXd::Zero(3, 2)).rank, 0);
  const Eigen::Vector3d u(1, 2, -2);
  const Eigen::Vector2d w(3, 1);
  const SpanBasis s = span_basis(u * w.transpose());
  ASSERT_EQ(s.rank, 1);
  const Eigen::Matrix3d proj = s.basis * s.basis.transpose();
  const Eigen::Vector3d un = u.normalized();
  EXPECT_TRUE(proj.isApprox(un * un.transpose(), 1e-12));
  std::mt19937_64 rng(33);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd M =
        testing::random_matrix(6, 3, rng) * testing::random_matrix(3, 10, rng);
    const SpanBasis b = span_basis(M);
    EXPECT_EQ(b.rank, 3);
    EXPECT_TRUE((b.basis.transpose() * b.basis).isIdentity(1e-10));
  }
}

TEST(Dist2, InsideOrthogonalAndPythagoras) {
  const SpanBasis s = span_basis(Eigen::MatrixXd::Identity(4, 4).leftCols(2));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v << cd(0.6, 0), cd(0, 0.8), 0, 0;
  EXPECT_NEAR(dist2(v, s), 0.0, 1e-10);
  v << 0, 0, cd(0, 1) / std::sqrt(2.0), 1 / std::sqrt(2.0);
  EXPECT_NEAR(dist2(v, s), 1.0, 1e-10);
  std::mt19937_64 rng(34);
  std::normal_distribution<double> g;
  for (int t = 0; t < 30; ++t) {
    const SpanBasis b = span_basis(testing::random_matrix(7, 1 + t % 6, rng));
    Eigen::VectorXcd x(7);
    for (int i = 0; i < 7; ++i) x(i) = cd(g(rng), g(rng));
    x.normalize();
    const double expected = 1.0 - (b.basis.transpose().cast<cd>() * x).squaredNorm();
    EXPECT_NEAR(dist2(x, b), expected, 1e-12);
    EXPECT_GE(dist2(x, b), 0.0);
    EXPECT_LE(dist2(x, b), 1.0);
  }
}

TEST(MetricF, HurwitzModesGiveZero) {
  std::mt19937_64 rng(35);
  SwitchedModel m = testing::random_model(4, 2, 2, rng);
  m.A = -5.0 * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(metric_f(m, {}), 0.0);
  EXPECT_EQ(metric_f(m, {1, 3}), 0.0);
}

TEST(MetricF, EmptySetCountsUnstableEigenvalues) {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 20; ++t) {
    const SwitchedModel m = testing::random_model(4, 2, 2, rng);
    int count = 0;
    for (int p = 0; p < 2; ++p) {
      for (const auto& e : eig(shifted_open_loop(m, p))) {
        count += e.value.real() >= -1e-9 ? 1 : 0;
      }
    }
    EXPECT_NEAR(metric_f(m, {}), count, 1e-12);
  }
}

TEST(MetricF, ZeroExactlyWhenRankContainmentHolds) {
  std::mt19937_64 rng(37);
  int zero = 0;
  int positive = 0;
  for (int t = 0; t < 150; ++t) {
    const int N = 2 + t % 4;
    const int n = 1 + t % 2;
    const SwitchedModel m = testing::random_model(N, n, 2, rng, 0.3);
    const auto S = testing::random_subset(N, 0.4, rng);
    const double f = metric_f(m, S);
    const bool oracle = testing::rank_containment(m, S);
    EXPECT_EQ(f <= 1e-8, oracle) << "instance " << t << " f = " << f;
    (f <= 1e-8 ? zero : positive) += 1;
  }
  EXPECT_GT(zero, 10);
  EXPECT_GT(positive, 10);
}

TEST(MetricF, NonincreasingUnderInclusion) {
  std::mt19937_64 rng(38);
  for (int t = 0; t < 40; ++t) {
    const SwitchedModel m = testing::random_model(5, 1 + t % 2, 2, rng);
    const auto S = testing::random_subset(5, 0.3, rng);
    auto T = S;
    for (int i : testing::random_subset(5, 0.4, rng)) {
      if (std::find(T.begin(), T.end(), i) == T.end()) T.push_back(i);
    }
    EXPECT_LE(metric_f(m, T), metric_f(m, S) + 1e-9);
  }
}

TEST(MetricFmax, DefinitionAndSummation) {
  std::mt19937_64 rng(39);
  SwitchedModel m = testing::random_model(4, 2, 1, rng);
  const double shift = 0.5 * (m.params.l[0] / m.tddt.tau_min[0] - m.params.eta[0]);
  EXPECT_NEAR(metric_fmax(m, {}, std::vector<double>{2.0}),
              rightmost_real(open_loop(m, 0)) + shift, 1e-12);
  SwitchedModel twice = m;
  twice.topologies.push_back(m.topologies[0]);
  twice.tddt.tau_min.push_back(m.tddt.tau_min[0]);
  twice.tddt.tau_max.push_back(m.tddt.tau_max[0]);
  twice.params.l.push_back(m.params.l[0]);
  twice.params.mu.push_back(m.params.mu[0]);
  twice.params.eta.push_back(m.params.eta[0]);
  EXPECT_NEAR(metric_fmax(twice, {2}, std::vector<double>{1.5, 1.5}),
              2.0 * metric_fmax(m, {2}, std::vector<double>{1.5}), 1e-12);
}

TEST(MetricFmax, LeaderNeverRaisesSymmetricModes) {
  // Undirected topologies make each mode symmetric, so adding kappa to a
  // diagonal entry cannot move the top eigenvalue up.
  std::mt19937_64 rng(40);
  for (int t = 0; t < 20; ++t) {
    SwitchedModel m = testing::random_model(5, 1, 2, rng);
    for (auto& g : m.topologies) g = testing::undirected(g);
    const auto S = testing::random_subset(5, 0.3, rng);
    for (int v = 1; v <= 5; ++v) {
      if (std::find(S.begin(), S.end(), v) != S.end()) continue;
      auto T = S;
      T.push_back(v);
      EXPECT_LE(metric_fmax(m, T, std::vector<double>{1.0, 2.0}),
                metric_fmax(m, S, std::vector<double>{1.0, 2.0}) + 1e-10);
    }
  }
}

TEST(CBar, ZeroMatrixExample) {
  const CBar c = c_bar(Eigen::MatrixXd::Zero(2, 2));
  ASSERT_EQ(c.matrix.rows(), 4);
  // Columns of [I 0]: the first block has unit columns, the rest vanish.
  EXPECT_FALSE(c.flagged[0]);
  EXPECT_FALSE(c.flagged[1]);
  EXPECT_TRUE(c.flagged[2]);
  EXPECT_TRUE(c.flagged[3]);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(0, 0) = expected(1, 1) = 0.5;
  EXPECT_TRUE(c.matrix.isApprox(expected));
}

TEST(CBar, NormalizedDiagonalAndPsd) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    const SwitchedModel m = testing::random_model(2, 2, 1, rng);
    const CBar c = c_bar(m, 0);
    const double unit = 1.0 / 4.0;
    for (Eigen::Index i = 0; i < c.matrix.rows(); ++i) {
      EXPECT_NEAR(c.matrix(i, i), c.flagged[i] ? 0.0 : unit, 1e-10);
    }
    EXPECT_TRUE(c.matrix.isApprox(c.matrix.transpose()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.matrix);
    EXPECT_GE(es.eigenvalues()(0), -1e-10);
  }
  EXPECT_THROW(c_bar(Eigen::MatrixXd::Zero(41, 41)), CapabilityError);
}

TEST(SubmodBounds, IdentityAndFullSize) {
  CBar id;
  id.matrix = Eigen::MatrixXd::Identity(4, 4);
  id.flagged.assign(4, false);
  for (int s = 1; s <= 4; ++s) {
    const SubmodBounds b = submod_ratio_lower_bounds(id, s);
    EXPECT_NEAR(b.lambda_min_global, 1.0, 1e-14);
    ASSERT_TRUE(b.lambda_min_sparse);
    EXPECT_NEAR(*b.lambda_min_sparse, 1.0, 1e-14);
  }
  std::mt19937_64 rng(42);
  const Eigen::MatrixXd G = testing::random_matrix(5, 5, rng);
  CBar r;
  r.matrix = G.transpose() * G;
  r.flagged.assign(5, false);
  const SubmodBounds b = submod_ratio_lower_bounds(r, 5);
  ASSERT_TRUE(b.lambda_min_sparse);
  EXPECT_NEAR(*b.lambda_min_sparse, b.lambda_min_global, 1e-10);
}

TEST(SubmodBounds, SparseMatchesPairEnumeration) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd G = testing::random_matrix(5, 5, rng);
    for (int c = 0; c < 5; ++c) G.col(c).normalize();
    CBar r;
    r.matrix = G.transpose() * G;
    r.flagged.assign(5, false);
    double best = 1e300;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        Eigen::Matrix2d sub;
        sub << r.matrix(i, i), r.matrix(i, j), r.matrix(j, i), r.matrix(j, j);
        best = std::min(best, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(sub)
                                  .eigenvalues()(0));
      }
    }
    const SubmodBounds b = submod_ratio_lower_bounds(r, 2);
    ASSERT_TRUE(b.lambda_min_sparse);
    EXPECT_NEAR(*b.lambda_min_sparse, best, 1e-12);
    EXPECT_GE(*b.lambda_min_sparse, b.lambda_min_global - 1e-12);
  }
}

TEST(ExactRatio, ModularIsOne) {
  const std::vector<double> w{0.5, 1.0, 2.0, 0.25};
  // Decrement of f is additive when f is.
  const SetFunction f = [&](const std::vector<int>& S) {
    double v = 4.0;
    for (int i : S) v -= w[i - 1];
    return v;
  };
  const auto r = exact_submodularity_ratio(f, 4, {1, 2}, 2);
  ASSERT_TRUE(r);
  EXPECT_NEAR(*r, 1.0, 1e-12);
}

TEST(ExactRatio, CoverageIsAtLeastOne) {
  // Element i covers a subset of a 5-item universe; f = uncovered count, so
  // the decrement is a coverage function.
  const std::vector<unsigned> cover{0b00011, 0b00110, 0b01100, 0b11001};
  const SetFunction f = [&](const std::vector<int>& S) {
    unsigned u = 0;
    for (int i : S) u |= cover[i - 1];
    return 5.0 - __builtin_popcount(u);
  };
  const auto r = exact_submodularity_ratio(f, 4, {1, 2, 3, 4}, 3);
  ASSERT_TRUE(r);
  EXPECT_GE(*r, 1.0 - 1e-12);
}

TEST(ExactRatio, UndefinedWithoutAdmissiblePairs) {
  const SetFunction flat = [](const std::vector<int>&) { return 1.0; };
  EXPECT_FALSE(exact_submodularity_ratio(flat, 3, {1}, 2));
}

TEST(Beta, SymmetricCases) {
  EXPECT_DOUBLE_EQ(beta_of(-Eigen::MatrixXd::Identity(3, 3)), 1.0);
  std::mt19937_64 rng(44);
  const Eigen::MatrixXd G = testing::random_matrix(4, 4, rng);
  const Eigen::MatrixXd S = -(G * G.transpose() + 0.1 * Eigen::MatrixXd::Identity(4, 4));
  EXPECT_NEAR(beta_of(S), 1.0, 1e-12);
  EXPECT_THROW(beta_of(Eigen::MatrixXd::Zero(2, 2)), NumericalError);
}

TEST(Beta, UnitIntervalForDissipativeMatrices) {
  // beta lies in (0, 1] exactly when the symmetric part is negative
  // definite; a Hurwitz matrix alone can push it to zero or below.
  std::mt19937_64 rng(45);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd M = testing::random_matrix(5, 5, rng);
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                           0.5 * (M + M.transpose()))
                           .eigenvalues()(4);
    M -= (top + 0.1) * Eigen::MatrixXd::Identity(5, 5);
    const double b = beta_of(M);
    EXPECT_GT(b, 0.0);
    EXPECT_LE(b, 1.0 + 1e-9);
  }
  Eigen::Matrix2d nonnormal;
  nonnormal << -1.0, 10.0, 0.0, -1.0;
  EXPECT_LT(beta_of(nonnormal), 0.0);
}

}  // namespace
}  // namespace leadersel
