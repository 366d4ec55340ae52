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

#include "leadersel/certify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "leadersel/errors.hpp"
#include "leadersel/spectral.hpp"

namespace leadersel {

namespace {

constexpr double kKappaMin = 1e-6;
constexpr double kKappaMax = 65536.0;
constexpr double kBoxTol = 1e-10;

std::string mode_name(int p) { return "topology " + std::to_string(p + 1); }

Eigen::MatrixXd leader_diag(const SwitchedModel& model,
                            const std::vector<int>& leaders) {
  const int n = model.agent_dim();
  Eigen::MatrixXd Dn = Eigen::MatrixXd::Zero(model.dim(), model.dim());
  for (int i : leaders) {
    Dn.block((i - 1) * n, (i - 1) * n, n, n).setIdentity();
  }
  return Dn;
}

std::string fmt_complex(std::complex<double> z) {
  std::ostringstream s;
  s << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
    << "i";
  return s.str();
}

}  // namespace

const char* to_string(ModeClass c) {
  return c == ModeClass::kStable ? "stable" : "unstable";
}

GainResult synthesize_gain(const SwitchedModel& model,
                           const std::vector<int>& leaders, int p,
                           double shift_target) {
  const Eigen::MatrixXd Ahat = shifted_open_loop(model, p);
  const Eigen::MatrixXd B =
      leader_input(model.n_agents(), model.agent_dim(), leaders);
  const SpanBasis span = controllable_basis(Ahat, B);
  for (const auto& ep : eig(Ahat)) {
    if (ep.value.real() < -1e-9) break;
    if (dist2(ep.vector, span) > 1e-8) {
      throw SynthesisError("eigenvalue " + fmt_complex(ep.value) + " of " +
                           mode_name(p) +
                           " is not controllable from the leader set");
    }
  }

  const int n = model.agent_dim();
  const Eigen::MatrixXd Dn = leader_diag(model, leaders);
  auto margin = [&](double kappa) {
    return rightmost_real(Ahat - kappa * Dn);
  };
  auto scalar = [&](double kappa) {
    GainResult g;
    g.kappa = kappa;
    g.K = kappa * Eigen::MatrixXd::Identity(n, n);
    g.achieved = margin(kappa);
    return g;
  };

  if (leaders.empty()) return scalar(0.0);
  if (margin(kKappaMin) < -shift_target) return scalar(kKappaMin);

  double lo = kKappaMin;
  double hi = kKappaMin;
  bool found = false;
  while (hi < kKappaMax) {
    lo = hi;
    hi = std::min(2.0 * hi, kKappaMax);
    if (margin(hi) < -shift_target) {
      found = true;
      break;
    }
  }
  if (found) {
    for (int it = 0; it < 200 && hi - lo > 1e-7; ++it) {
      const double mid = 0.5 * (lo + hi);
      (margin(mid) < -shift_target ? hi : lo) = mid;
    }
    return scalar(hi);
  }

  // Pole-shift Lyapunov feedback on the controllable part.
  const Eigen::MatrixXd& Q = span.basis;
  const Eigen::MatrixXd Ac = Q.transpose() * Ahat * Q;
  const Eigen::MatrixXd Bc = Q.transpose() * B;
  double min_re = 0.0;
  for (const auto& ep : eig(Ac)) min_re = std::min(min_re, ep.value.real());
  const double alpha = -min_re + shift_target + 1.0;
  Eigen::MatrixXd shifted = Ac;
  shifted.diagonal().array() += alpha;
  GainResult fallback = scalar(kKappaMax);
  try {
    const Eigen::MatrixXd X =
        lyapunov_solve(shifted.transpose(), -2.0 * Bc * Bc.transpose());
    const Eigen::MatrixXd Khat =
        (Bc.transpose() * X.inverse()) * Q.transpose();
    const double achieved = rightmost_real(Ahat - B * Khat);
    if (std::isfinite(achieved) && achieved < -shift_target) {
      fallback.structured = false;
      fallback.K_unstructured = Khat;
      fallback.achieved = achieved;
    }
  } catch (const NumericalError&) {
    // Keep the best scalar attempt; the margin check reports the failure.
  }
  return fallback;
}

double default_shift_target(const SwitchedModel& model, int p) {
  const double phi = model.phi();
  const double beta = model.params.beta_setting;
  const double l = model.params.l.at(p);
  const double tau = model.tddt.tau_min.at(p);
  const double t = std::max({1e-6, phi / (2.0 * beta),
                             (l + phi) / (2.0 * beta * tau) - l / tau});
  return t * (1.0 + 1e-6);
}

Margins check_margins(const SwitchedModel& model, int p) {
  const Eigen::MatrixXd Ap = mode_matrix(model, p);
  const Eigen::MatrixXd A1 = shift_1(Ap, p, model.params, model.tddt);
  const Eigen::MatrixXd A2 = shift_2(Ap, p, model.params, model.tddt);
  Margins m;
  m.rightmost_mode = rightmost_real(Ap);
  m.rightmost_1 = rightmost_real(A1);
  m.rightmost_2 = rightmost_real(A2);
  const double l = model.params.l.at(p);
  const double tau = model.tddt.tau_min.at(p);
  m.margin_a1 = m.rightmost_1 +
               (l + model.phi()) / (2.0 * model.params.beta_setting * tau);
  m.margin_a2 = m.rightmost_2;
  try {
    m.beta_computed = beta_of(A1);
  } catch (const NumericalError&) {
    m.beta_computed.reset();
  }
  return m;
}

BetaDecision beta_verification_loop(double beta_computed,
                                    double beta_setting) {
  BetaDecision d;
  d.history.push_back(beta_setting);
  d.final_setting = beta_setting;
  if (beta_computed >= beta_setting || beta_computed > 0.5) {
    d.accepted = true;
    return d;
  }
  if (beta_setting <= 0.1 + 1e-12) {
    d.floor_reached = true;
    return d;
  }
  const double next =
      std::max(0.1, std::round((beta_setting - 0.1) * 10.0) / 10.0);
  d.rerun = true;
  d.final_setting = next;
  d.history.push_back(next);
  return d;
}

Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& M,
                               const Eigen::MatrixXd& Q) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw InputError("lyapunov_solve: dimension mismatch");
  }
  if (!M.allFinite() || !Q.allFinite()) {
    throw InputError("lyapunov_solve: non-finite input");
  }
  if ((Q - Q.transpose()).norm() > 1e-12 * std::max(1.0, Q.norm())) {
    throw InputError("lyapunov_solve: Q must be symmetric");
  }
  if (n == 0) return Eigen::MatrixXd(0, 0);
  using C = std::complex<double>;
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(M.cast<C>());
  if (schur.info() != Eigen::Success) {
    throw NumericalError("lyapunov_solve: Schur decomposition failed");
  }
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd& U = schur.matrixU();
  const Eigen::MatrixXcd Ct = U.adjoint() * Q.cast<C>() * U;
  const double scale = std::max(1.0, T.norm());
  Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n);
  // T^H Y + Y T = -Ct, solved column by column.
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd rhs = -Ct.col(j);
    for (Eigen::Index k = 0; k < j; ++k) rhs -= Y.col(k) * T(k, j);
    for (Eigen::Index i = 0; i < n; ++i) {
      C acc = rhs(i);
      for (Eigen::Index k = 0; k < i; ++k) acc -= std::conj(T(k, i)) * Y(k, j);
      const C den = std::conj(T(i, i)) + T(j, j);
      if (std::abs(den) <= 1e-13 * scale) {
        throw NumericalError(
            "lyapunov_solve: spectral clash, eigenvalues " +
            fmt_complex(T(i, i)) + " and " + fmt_complex(T(j, j)) +
            " sum to zero");
      }
      Y(i, j) = acc / den;
    }
  }
  Eigen::MatrixXd P = (U * Y * U.adjoint()).real();
  return 0.5 * (P + P.transpose());
}

double sym_lambda_max(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

PFamily construct_p_family(const SwitchedModel& model, int p) {
  const Eigen::MatrixXd Ap = mode_matrix(model, p);
  const Eigen::MatrixXd A1 = shift_1(Ap, p, model.params, model.tddt);
  const Eigen::MatrixXd A2 = shift_2(Ap, p, model.params, model.tddt);
  const int l = model.params.l.at(p);
  const double tau = model.tddt.tau_min.at(p);
  const double phi = model.phi();
  const Eigen::Index r = Ap.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(r, r);

  PFamily fam;
  fam.rhs_first = (l + phi) / tau;
  fam.rhs_last = phi;
  const Eigen::MatrixXd Px = lyapunov_solve(A1, fam.rhs_first * I);
  const Eigen::MatrixXd Pp = lyapunov_solve(A2, fam.rhs_last * I);
  fam.in_box = true;
  for (int i = 0; i <= l; ++i) {
    const double w = static_cast<double>(i) / l;
    Eigen::MatrixXd Pi = (i == l) ? Pp : Eigen::MatrixXd(Px + w * (Pp - Px));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Pi,
                                                      Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(r - 1);
    fam.lambda_min.push_back(lo);
    fam.lambda_max.push_back(hi);
    if (fam.in_box && !(lo > kBoxTol && hi < 1.0 - kBoxTol)) {
      fam.in_box = false;
      fam.first_bad_index = i;
    }
    fam.P.push_back(std::move(Pi));
  }
  const double r1 = rightmost_real(A1);
  try {
    const double beta = beta_of(A1);
    if (beta > 0.0 && r1 < 0.0) {
      fam.lambda_max_bound = fam.rhs_first / (-2.0 * beta * r1);
    }
  } catch (const NumericalError&) {
    fam.lambda_max_bound.reset();
  }
  return fam;
}

bool LmiMargins::pass() const {
  auto ok = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return x <= -kStrictTol; });
  };
  return ok(flow_start) && ok(flow_end) && ok(stable_decay);
}

LmiMargins check_discretized_lmis(const Eigen::MatrixXd& Ap, int l,
                                  double tau_min, double eta,
                                  const PFamily& family, bool stable_route) {
  if (static_cast<int>(family.P.size()) != l + 1) {
    throw InputError("P family size does not match l");
  }
  LmiMargins out;
  auto lhs = [&](const Eigen::MatrixXd& P, const Eigen::MatrixXd& Phi) {
    return Eigen::MatrixXd(Ap.transpose() * P + P * Ap + Phi - eta * P);
  };
  for (int i = 0; i < l; ++i) {
    const Eigen::MatrixXd Phi = l * (family.P[i + 1] - family.P[i]) / tau_min;
    out.flow_start.push_back(sym_lambda_max(lhs(family.P[i], Phi)));
    out.flow_end.push_back(sym_lambda_max(lhs(family.P[i + 1], Phi)));
  }
  if (stable_route) {
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(Ap.rows(), Ap.cols());
    for (const auto& P : family.P) {
      out.stable_decay.push_back(sym_lambda_max(lhs(P, zero)));
    }
  }
  return out;
}

MuResult mu_feasibility(const std::vector<PFamily>& families) {
  const int m = static_cast<int>(families.size());
  MuResult out;
  out.pairwise = Eigen::MatrixXd::Constant(
      m, m, std::numeric_limits<double>::quiet_NaN());
  out.mu.assign(m, -std::numeric_limits<double>::infinity());
  for (int p = 0; p < m; ++p) {
    const Eigen::MatrixXd& B = families[p].P.back();
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("final P matrix of " + mode_name(p) +
                           " is not positive definite");
    }
  }
  for (int q = 0; q < m; ++q) {
    for (int p = 0; p < m; ++p) {
      if (p == q && m > 1) continue;
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
          families[q].P.front(), families[p].P.back(),
          Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
      if (ges.info() != Eigen::Success) {
        throw NumericalError("generalized eigensolver failed");
      }
      const double v = ges.eigenvalues().maxCoeff();
      out.pairwise(q, p) = v;
      out.mu[q] = std::max(out.mu[q], v);
    }
  }
  return out;
}

Window tddt_window(double tau_min, double eta, double mu) {
  if (eta == 0.0 || !std::isfinite(eta)) {
    throw DegenerateInstance("eta = 0 gives no dwell-time window");
  }
  if (!(mu > 0.0)) throw InputError("mu must be positive");
  const double lm = std::log(mu);
  Window w;
  if (eta > 0.0) {
    w.lower = tau_min;
    w.upper = -lm / eta - 1e-9;
    while (lm + eta * w.upper >= 0.0) {
      w.upper = std::nextafter(w.upper,
                               -std::numeric_limits<double>::infinity());
    }
  } else {
    w.lower = std::max(tau_min, -lm / eta + 1e-9);
    w.upper = std::numeric_limits<double>::infinity();
  }
  return w;
}

std::vector<ModeClass> classify_modes(const SwitchedModel& model) {
  std::vector<ModeClass> out;
  for (int p = 0; p < model.n_modes(); ++p) {
    out.push_back(rightmost_real(mode_matrix(model, p)) < -1e-9
                      ? ModeClass::kStable
                      : ModeClass::kUnstable);
  }
  return out;
}

std::vector<Eigen::MatrixXd> Certificate::gains() const {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& m : modes) out.push_back(m.gain.K);
  return out;
}

namespace {

constexpr double kLadder[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

// One pass of the pipeline whose per-mode gain ladder starts at `floor`.
Certificate certify_from(const SwitchedModel& model,
                         const std::vector<int>& leaders,
                         const CertificateParams& params, double floor) {
  SwitchedModel sys = model;
  sys.params = params;
  sys.leaders = leaders;
  sys.gains.clear();
  sys.validate();
  sys.params.phi = sys.phi();

  Certificate cert;
  cert.leaders = leaders;
  cert.params = sys.params;
  cert.phi = sys.params.phi;
  const int m = sys.n_modes();
  cert.modes.resize(m);
  auto fail = [&](const std::string& cond, const std::string& detail) {
    if (cert.failed_condition.empty()) {
      cert.failed_condition = cond;
      cert.failure_detail = detail;
    }
  };

  for (int p = 0; p < m; ++p) {
    const double eta = sys.params.eta[p];
    cert.modes[p].stable_route = eta < 0.0;
    if (eta > 0.0 && eta <= sys.params.l[p] / sys.tddt.tau_min[p]) {
      cert.warnings.push_back("eta of " + mode_name(p) +
                              " is not above l / tau_min");
    }
  }

  // Gains: the first target on an escalating ladder whose Lyapunov family
  // fits the unit box and satisfies the discretized LMIs. Minimal decay
  // often leaves P_x far outside the box on non-normal modes.
  for (int p = 0; p < m; ++p) {
    const double base = default_shift_target(sys, p);
    std::optional<GainResult> chosen;
    double chosen_target = base;
    for (double extra : kLadder) {
      if (extra < floor) continue;
      GainResult g;
      try {
        g = synthesize_gain(sys, leaders, p, base + extra);
      } catch (const SynthesisError& e) {
        fail("gain_synthesis", e.what());
        return cert;
      }
      if (!chosen) {
        chosen = g;
        chosen_target = base + extra;
      }
      if (!g.structured) break;
      SwitchedModel trial = sys;
      trial.gains.assign(m, g.K);
      try {
        const PFamily fam = construct_p_family(trial, p);
        const LmiMargins lmi = check_discretized_lmis(
            mode_matrix(trial, p), sys.params.l[p], sys.tddt.tau_min[p],
            sys.params.eta[p], fam, sys.params.eta[p] < 0.0);
        if (fam.in_box && lmi.pass()) {
          chosen = g;
          chosen_target = base + extra;
          break;
        }
      } catch (const NumericalError&) {
        // Try the next target.
      }
    }
    cert.modes[p].gain = *chosen;
    cert.modes[p].shift_target = chosen_target;
    if (!cert.modes[p].gain.structured) {
      fail("gain_structure",
           "only an unstructured feedback stabilizes " + mode_name(p));
      return cert;
    }
  }
  sys.gains = cert.gains();

  // Eigenvalue margins and mode classes.
  const auto classes = classify_modes(sys);
  std::optional<double> beta_min;
  bool beta_missing = false;
  for (int p = 0; p < m; ++p) {
    ModeRecord& rec = cert.modes[p];
    rec.mode_class = classes[p];
    rec.margins = check_margins(sys, p);
    if (rec.stable_route) {
      if (rec.mode_class != ModeClass::kStable) {
        fail("mode_class", mode_name(p) +
                               " has a negative rate but an unstable "
                               "closed loop");
      } else if (!(rec.margins.rightmost_mode < 0.5 * sys.params.eta[p])) {
        fail("stable_rate", mode_name(p) +
                                   " decays slower than eta / 2");
      }
    }
    if (!(rec.margins.margin_a1 < 0.0)) {
      fail("margin_a1", mode_name(p));
    }
    if (!(rec.margins.margin_a2 < 0.0)) {
      fail("margin_a2", mode_name(p));
    }
    if (!rec.stable_route) {
      if (rec.margins.beta_computed) {
        beta_min = std::min(beta_min.value_or(*rec.margins.beta_computed),
                            *rec.margins.beta_computed);
      } else {
        beta_missing = true;
      }
    }
  }

  // Normality factor.
  if (beta_missing) {
    fail("beta", "beta is undefined for an unstable-route mode");
  } else if (beta_min) {
    cert.beta = beta_verification_loop(*beta_min, sys.params.beta_setting);
    if (!cert.beta->accepted || !(*beta_min > 0.0)) {
      std::ostringstream s;
      s << "computed beta " << *beta_min << " against setting "
        << sys.params.beta_setting;
      fail("beta", s.str());
    }
  }

  // Lyapunov families and discretized LMIs.
  std::vector<PFamily> families(m);
  bool families_ok = true;
  for (int p = 0; p < m; ++p) {
    ModeRecord& rec = cert.modes[p];
    try {
      families[p] = construct_p_family(sys, p);
    } catch (const NumericalError& e) {
      fail("p_family", e.what());
      families_ok = false;
      continue;
    }
    const PFamily& fam = families[p];
    rec.p_family_lambda_min = fam.lambda_min;
    rec.p_family_lambda_max = fam.lambda_max;
    rec.p_lambda_max_bound = fam.lambda_max_bound;
    if (!fam.in_box) {
      fail("p_family", "P_" + std::to_string(fam.first_bad_index) + " of " +
                           mode_name(p) + " leaves the open unit box");
    }
    if (fam.lambda_max_bound &&
        fam.lambda_max.front() > *fam.lambda_max_bound * (1.0 + 1e-8)) {
      fail("p_family_bound", mode_name(p));
    }
    rec.lmi = check_discretized_lmis(mode_matrix(sys, p), sys.params.l[p],
                                     sys.tddt.tau_min[p], sys.params.eta[p],
                                     fam, rec.stable_route);
    auto worst = [](const std::vector<double>& v) {
      return v.empty() ? -1.0 : *std::max_element(v.begin(), v.end());
    };
    if (worst(rec.lmi.flow_start) > -kStrictTol) fail("lmi_flow_start", mode_name(p));
    if (worst(rec.lmi.flow_end) > -kStrictTol) fail("lmi_flow_end", mode_name(p));
    if (worst(rec.lmi.stable_decay) > -kStrictTol) fail("lmi_stable_decay", mode_name(p));
  }
  if (!families_ok) return cert;

  // Jump factors and dwell windows.
  MuResult mu;
  try {
    mu = mu_feasibility(families);
  } catch (const NumericalError& e) {
    fail("jump_factor", e.what());
    return cert;
  }
  cert.mu_required = mu.pairwise;
  for (int p = 0; p < m; ++p) {
    ModeRecord& rec = cert.modes[p];
    rec.mu = mu.mu[p];
    if (!rec.stable_route && !(rec.mu < 1.0)) {
      std::ostringstream s;
      s << mode_name(p) << " needs mu = " << rec.mu;
      fail("jump_factor", s.str());
    }
    if (!(rec.mu > 0.0)) {
      fail("jump_factor", mode_name(p) + " has a nonpositive jump factor");
      continue;
    }
    rec.window = tddt_window(sys.tddt.tau_min[p], sys.params.eta[p], rec.mu);
    const bool covers =
        !rec.window.empty() && rec.window.lower <= sys.tddt.tau_min[p] &&
        rec.window.upper >= sys.tddt.tau_max[p];
    if (!covers) {
      std::ostringstream s;
      s << mode_name(p) << " certified window [" << rec.window.lower << ", "
        << rec.window.upper << "] misses the requested ["
        << sys.tddt.tau_min[p] << ", " << sys.tddt.tau_max[p] << "]";
      fail("dwell_window", s.str());
    }
  }
  cert.pass = cert.failed_condition.empty();
  return cert;
}

}  // namespace

// Minimal gains keep the jump factor small, but stiffer gains can rescue
// the unit box or the dwell window; raise the ladder floor until a pass.
Certificate full_certificate(const SwitchedModel& model,
                             const std::vector<int>& leaders,
                             const CertificateParams& params) {
  Certificate first = certify_from(model, leaders, params, 0.0);
  if (first.pass || first.failed_condition == "gain_synthesis") return first;
  for (double floor : kLadder) {
    if (floor == 0.0) continue;
    Certificate c = certify_from(model, leaders, params, floor);
    if (c.pass) return c;
  }
  return first;
}

std::string render_text(const Certificate& cert) {
  std::ostringstream s;
  auto mark = [](bool ok) { return ok ? "pass" : "FAIL"; };
  s << "leaders:";
  for (int i : cert.leaders) s << ' ' << i;
  s << "\nphi: " << cert.phi << '\n';
  for (size_t p = 0; p < cert.modes.size(); ++p) {
    const ModeRecord& r = cert.modes[p];
    s << "topology " << p + 1 << " (" << to_string(r.mode_class) << ", "
      << (r.stable_route ? "stable" : "unstable") << " route)\n";
    s << "  gain kappa = " << r.gain.kappa
      << (r.gain.structured ? "" : " [unstructured fallback]") << '\n';
    s << "  margin A1 " << r.margins.margin_a1 << "  "
      << mark(r.margins.margin_a1 < 0) << '\n';
    s << "  margin A2 " << r.margins.margin_a2 << "  "
      << mark(r.margins.margin_a2 < 0) << '\n';
    if (r.margins.beta_computed) {
      s << "  beta " << *r.margins.beta_computed << '\n';
    }
    auto worst = [](const std::vector<double>& v) {
      return v.empty() ? -1.0 : *std::max_element(v.begin(), v.end());
    };
    if (!r.lmi.flow_start.empty()) {
      s << "  flow start worst " << worst(r.lmi.flow_start) << "  "
        << mark(worst(r.lmi.flow_start) <= -kStrictTol) << '\n';
      s << "  flow end worst " << worst(r.lmi.flow_end) << "  "
        << mark(worst(r.lmi.flow_end) <= -kStrictTol) << '\n';
    }
    if (!r.lmi.stable_decay.empty()) {
      s << "  stable decay worst " << worst(r.lmi.stable_decay) << "  "
        << mark(worst(r.lmi.stable_decay) <= -kStrictTol) << '\n';
    }
    s << "  jump factor mu " << r.mu << '\n';
    s << "  dwell window [" << r.window.lower << ", " << r.window.upper
      << "]\n";
  }
  for (const auto& w : cert.warnings) s << "warning: " << w << '\n';
  s << "verdict: " << (cert.pass ? "pass" : "fail");
  if (!cert.pass) {
    s << " (" << cert.failed_condition << ": " << cert.failure_detail << ")";
  }
  s << '\n';
  return s.str();
}

}  // namespace leadersel
