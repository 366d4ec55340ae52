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

#include "leadersel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "leadersel/errors.hpp"

namespace leadersel {

std::vector<EigenPair> eig(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw InputError("eig needs a square matrix");
  if (!M.allFinite()) throw InputError("eig input has non-finite entries");
  const int n = static_cast<int>(M.rows());
  std::vector<EigenPair> out;
  if (n == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, true);
  if (es.info() != Eigen::Success) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    std::ostringstream msg;
    msg << "eigensolver did not converge (n = " << n
        << ", sigma_max = " << s(0) << ", sigma_min = " << s(n - 1) << ")";
    throw NumericalError(msg.str());
  }
  const Eigen::VectorXcd values = es.eigenvalues();
  const Eigen::MatrixXcd vectors = es.eigenvectors();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (values(a).real() != values(b).real()) {
      return values(a).real() > values(b).real();
    }
    return values(a).imag() > values(b).imag();
  });
  out.reserve(n);
  for (int idx : order) {
    Eigen::VectorXcd v = vectors.col(idx);
    const double nv = v.norm();
    if (nv > 0) v /= nv;
    out.push_back({values(idx), v});
  }
  return out;
}

double rightmost_real(const Eigen::MatrixXd& M) {
  if (M.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigensolver did not converge");
  }
  return es.eigenvalues().real().maxCoeff();
}

double eigenvector_condition(const Eigen::MatrixXd& M) {
  const auto pairs = eig(M);
  if (pairs.empty()) return 1.0;
  Eigen::MatrixXcd V(M.rows(), static_cast<Eigen::Index>(pairs.size()));
  for (size_t i = 0; i < pairs.size(); ++i) V.col(i) = pairs[i].vector;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= 0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

Eigen::MatrixXd ctrb(const Eigen::MatrixXd& Ahat, const Eigen::MatrixXd& Bhat) {
  if (Ahat.rows() != Ahat.cols() || Bhat.rows() != Ahat.rows()) {
    throw InputError("ctrb: dimension mismatch");
  }
  const Eigen::Index r = Ahat.rows();
  const Eigen::Index q = Bhat.cols();
  Eigen::MatrixXd C(r, r * q);
  Eigen::MatrixXd block = Bhat;
  for (Eigen::Index k = 0; k < r; ++k) {
    C.middleCols(k * q, q) = block;
    if (k + 1 < r) block = Ahat * block;
  }
  return C;
}

Eigen::MatrixXd leader_input(int n_agents, int agent_dim,
                             const std::vector<int>& leaders) {
  std::vector<int> s = leaders;
  std::sort(s.begin(), s.end());
  const int n = agent_dim;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_agents * n,
                                            static_cast<Eigen::Index>(s.size()) * n);
  for (size_t c = 0; c < s.size(); ++c) {
    if (s[c] < 1 || s[c] > n_agents) throw InputError("leader out of range");
    B.block((s[c] - 1) * n, static_cast<Eigen::Index>(c) * n, n, n) =
        Eigen::MatrixXd::Identity(n, n);
  }
  return B;
}

SpanBasis span_basis(const Eigen::MatrixXd& M, double rel_tol) {
  SpanBasis out;
  out.tolerance_used = rel_tol;
  if (M.rows() == 0 || M.cols() == 0) {
    out.basis = Eigen::MatrixXd::Zero(M.rows(), 0);
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0) {
    out.basis = Eigen::MatrixXd::Zero(M.rows(), 0);
    return out;
  }
  int r = 0;
  while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
  out.rank = r;
  out.basis = svd.matrixU().leftCols(r);
  return out;
}

SpanBasis controllable_basis(const Eigen::MatrixXd& Ahat,
                             const Eigen::MatrixXd& Bhat, double rel_tol) {
  if (Ahat.rows() != Ahat.cols() || Bhat.rows() != Ahat.rows()) {
    throw InputError("controllable_basis: dimension mismatch");
  }
  const Eigen::Index r = Ahat.rows();
  SpanBasis out = span_basis(Bhat, rel_tol);
  if (out.rank == 0) return out;
  const double scale =
      std::max(Eigen::JacobiSVD<Eigen::MatrixXd>(Ahat).singularValues()(0),
               std::numeric_limits<double>::min());
  Eigen::MatrixXd Q = out.basis;
  Eigen::MatrixXd frontier = Q;
  while (frontier.cols() > 0 && Q.cols() < r) {
    Eigen::MatrixXd W = Ahat * frontier;
    for (int pass = 0; pass < 2; ++pass) W -= Q * (Q.transpose() * W);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(W, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    int add = 0;
    while (add < s.size() && s(add) > rel_tol * scale) ++add;
    add = std::min<int>(add, static_cast<int>(r - Q.cols()));
    if (add == 0) break;
    Eigen::MatrixXd fresh = svd.matrixU().leftCols(add);
    // One more sweep keeps the new block orthogonal to Q at roundoff level.
    fresh -= Q * (Q.transpose() * fresh);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(fresh);
    fresh = qr.householderQ() * Eigen::MatrixXd::Identity(r, add);
    Eigen::MatrixXd grown(r, Q.cols() + add);
    grown << Q, fresh;
    Q = std::move(grown);
    frontier = std::move(fresh);
  }
  out.basis = Q;
  out.rank = static_cast<int>(Q.cols());
  return out;
}

double dist2(const Eigen::VectorXcd& v, const SpanBasis& span) {
  double d;
  if (span.rank == 0) {
    d = v.squaredNorm();
  } else {
    const Eigen::MatrixXcd P = span.basis.cast<std::complex<double>>();
    const Eigen::VectorXcd r = v - P * (P.adjoint() * v);
    d = r.squaredNorm();
  }
  return std::clamp(d, 0.0, 1.0);
}

MetricContext::MetricContext(const SwitchedModel& model)
    : n_agents_(model.n_agents()), agent_dim_(model.agent_dim()) {
  const int m = model.n_modes();
  shifted_.resize(m);
  unstable_.resize(m);
  ill_conditioned_.assign(m, false);
  rightmost_.resize(m);
  for (int p = 0; p < m; ++p) {
    shifted_[p] = shifted_open_loop(model, p);
    auto pairs = eig(shifted_[p]);
    rightmost_[p] = pairs.empty() ? -std::numeric_limits<double>::infinity()
                                  : pairs.front().value.real();
    for (auto& ep : pairs) {
      if (ep.value.real() >= -1e-9) unstable_[p].push_back(std::move(ep));
    }
    if (!unstable_[p].empty()) {
      ill_conditioned_[p] = eigenvector_condition(shifted_[p]) > 1e8;
    }
  }
}

double MetricContext::max_rightmost() const {
  double best = -std::numeric_limits<double>::infinity();
  for (double r : rightmost_) best = std::max(best, r);
  return best;
}

double MetricContext::f_mode(int p, const std::vector<int>& leaders) const {
  const auto& vs = unstable_.at(p);
  if (vs.empty()) return 0.0;
  if (leaders.empty()) return static_cast<double>(vs.size());
  const SpanBasis span = controllable_basis(
      shifted_[p], leader_input(n_agents_, agent_dim_, leaders));
  double total = 0.0;
  for (const auto& ep : vs) total += dist2(ep.vector, span);
  return total;
}

double MetricContext::f(const std::vector<int>& leaders) const {
  double total = 0.0;
  for (size_t p = 0; p < shifted_.size(); ++p) {
    total += f_mode(static_cast<int>(p), leaders);
  }
  return total;
}

double metric_f(const SwitchedModel& model, const std::vector<int>& leaders) {
  return MetricContext(model).f(leaders);
}

double metric_fmax(const SwitchedModel& model, const std::vector<int>& leaders,
                   const std::vector<Eigen::MatrixXd>& gains) {
  if (static_cast<int>(gains.size()) != model.n_modes()) {
    throw InputError("f_max needs one gain per topology");
  }
  SwitchedModel closed = model;
  closed.leaders = leaders;
  closed.gains = gains;
  double total = 0.0;
  for (int p = 0; p < model.n_modes(); ++p) {
    total += rightmost_real(
        shift_2(mode_matrix(closed, p), p, model.params, model.tddt));
  }
  return total;
}

double metric_fmax(const SwitchedModel& model, const std::vector<int>& leaders,
                   const std::vector<double>& kappas) {
  std::vector<Eigen::MatrixXd> gains;
  const int n = model.agent_dim();
  for (double k : kappas) gains.push_back(k * Eigen::MatrixXd::Identity(n, n));
  return metric_fmax(model, leaders, gains);
}

CBar c_bar(const Eigen::MatrixXd& Ahat) {
  const Eigen::Index r = Ahat.rows();
  if (r > 40) {
    throw CapabilityError(
        "normalized Gram matrix is limited to Nn <= 40; use the global "
        "lambda_min fallback");
  }
  const Eigen::MatrixXd C = ctrb(Ahat, Eigen::MatrixXd::Identity(r, r));
  const double a_norm =
      r == 0 ? 0.0 : Eigen::JacobiSVD<Eigen::MatrixXd>(Ahat).singularValues()(0);
  Eigen::MatrixXd Cn = C;
  CBar out;
  out.flagged.assign(static_cast<size_t>(C.cols()), false);
  for (Eigen::Index c = 0; c < C.cols(); ++c) {
    const double nc = C.col(c).norm();
    const double bound = std::pow(a_norm, static_cast<double>(c / r));
    if (nc <= 1e-12 * std::max(bound, std::numeric_limits<double>::min())) {
      out.flagged[c] = true;
      Cn.col(c).setZero();
    } else {
      Cn.col(c) /= nc;
    }
  }
  out.matrix = Cn.transpose() * Cn / static_cast<double>(r);
  return out;
}

CBar c_bar(const SwitchedModel& model, int p) {
  return c_bar(shifted_open_loop(model, p));
}

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double lambda_min_sym(const Eigen::MatrixXd& S) {
  if (S.rows() == 1) return S(0, 0);
  if (S.rows() == 2) {
    const double a = S(0, 0), b = S(0, 1), d = S(1, 1);
    return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

SubmodBounds submod_ratio_lower_bounds(const CBar& cbar, int s) {
  SubmodBounds out;
  const Eigen::MatrixXd& C = cbar.matrix;
  if (C.rows() == 0) return out;
  out.lambda_min_global = std::max(0.0, lambda_min_sym(C));
  if (s < 1) return out;
  std::vector<int> idx;
  for (size_t i = 0; i < cbar.flagged.size(); ++i) {
    if (!cbar.flagged[i]) idx.push_back(static_cast<int>(i));
  }
  const int count = static_cast<int>(idx.size());
  if (count == 0) return out;
  const int size = std::min(s, count);
  if (binomial(count, size) > 1e6) return out;
  std::vector<int> pick(size);
  std::iota(pick.begin(), pick.end(), 0);
  Eigen::MatrixXd sub(size, size);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (int a = 0; a < size; ++a) {
      for (int b = 0; b < size; ++b) sub(a, b) = C(idx[pick[a]], idx[pick[b]]);
    }
    best = std::min(best, lambda_min_sym(sub));
    if (best <= 0.0) break;
    int i = size - 1;
    while (i >= 0 && pick[i] == count - size + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
  out.lambda_min_sparse = std::max(0.0, best);
  return out;
}

SubmodBounds submod_ratio_lower_bounds(const SwitchedModel& model, int p,
                                       int s) {
  return submod_ratio_lower_bounds(c_bar(model, p), s);
}

std::optional<double> exact_submodularity_ratio(const SetFunction& f,
                                                int n_ground,
                                                const std::vector<int>& U,
                                                int k) {
  if (n_ground < 1 || n_ground > 20) {
    throw CapabilityError("exact submodularity ratio needs 1 <= N <= 20");
  }
  std::map<unsigned, double> memo;
  auto eval = [&](unsigned mask) {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::vector<int> set;
    for (int i = 0; i < n_ground; ++i) {
      if (mask & (1u << i)) set.push_back(i + 1);
    }
    const double v = f(set);
    memo.emplace(mask, v);
    return v;
  };
  unsigned umask = 0;
  for (int u : U) {
    if (u < 1 || u > n_ground) throw InputError("U outside the ground set");
    umask |= 1u << (u - 1);
  }
  const unsigned full = (n_ground == 32) ? ~0u : ((1u << n_ground) - 1);
  std::optional<double> best;
  // Enumerate W as submasks of U.
  for (unsigned w = umask;; w = (w - 1) & umask) {
    const double fw = eval(w);
    const unsigned rest = full & ~w;
    for (unsigned s = rest; s != 0; s = (s - 1) & rest) {
      const int size = __builtin_popcount(s);
      if (size > k) continue;
      const double den = fw - eval(w | s);
      if (std::abs(den) <= 1e-12) continue;
      double num = 0.0;
      for (int i = 0; i < n_ground; ++i) {
        if (s & (1u << i)) num += fw - eval(w | (1u << i));
      }
      const double ratio = num / den;
      if (!best || ratio < *best) best = ratio;
    }
    if (w == 0) break;
  }
  return best;
}

double beta_of(const Eigen::MatrixXd& M) {
  const double re = rightmost_real(M);
  if (std::abs(re) <= 1e-12) {
    throw NumericalError("beta undefined: rightmost eigenvalue on the axis");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.transpose() + M,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1) / (2.0 * re);
}

}  // namespace leadersel
