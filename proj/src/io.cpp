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

#include "leadersel/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>

#include "leadersel/errors.hpp"

namespace leadersel {

using nlohmann::json;

namespace {

// Char iterator that reports how far the parser has read.
class CountingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* p, const char* base, std::size_t* reach)
      : p_(p), base_(base), reach_(reach) {}
  reference operator*() const {
    *reach_ = std::max<std::size_t>(*reach_, static_cast<std::size_t>(p_ - base_));
    return *p_;
  }
  CountingIterator& operator++() {
    ++p_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator t = *this;
    ++p_;
    return t;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_{nullptr};
  const char* base_{nullptr};
  std::size_t* reach_{nullptr};
};

// Records the source line where each value (by JSON pointer) starts.
class LineLocator {
 public:
  using number_integer_t = json::number_integer_t;
  using number_unsigned_t = json::number_unsigned_t;
  using number_float_t = json::number_float_t;
  using string_t = json::string_t;
  using binary_t = json::binary_t;

  LineLocator(const std::string& text, const std::size_t* reach)
      : text_(text), reach_(reach) {}

  bool null() { return value(); }
  bool boolean(bool) { return value(); }
  bool number_integer(number_integer_t) { return value(); }
  bool number_unsigned(number_unsigned_t) { return value(); }
  bool number_float(number_float_t, const string_t&) { return value(); }
  bool string(string_t&) { return value(); }
  bool binary(binary_t&) { return value(); }
  bool start_object(std::size_t) {
    value();
    stack_.push_back({path_of_current(), true, -1, ""});
    return true;
  }
  bool key(string_t& k) {
    stack_.back().key = k;
    return true;
  }
  bool end_object() {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) {
    value();
    stack_.push_back({path_of_current(), false, -1, ""});
    return true;
  }
  bool end_array() {
    stack_.pop_back();
    return true;
  }
  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception&) {
    return false;
  }

  const std::map<std::string, int>& lines() const { return lines_; }

 private:
  struct Frame {
    std::string path;
    bool object;
    int index;
    std::string key;
  };

  static std::string escape(const std::string& k) {
    std::string out;
    for (char c : k) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }

  bool value() {
    if (!stack_.empty() && !stack_.back().object) ++stack_.back().index;
    current_ = stack_.empty() ? std::string()
               : stack_.back().object
                   ? stack_.back().path + "/" + escape(stack_.back().key)
                   : stack_.back().path + "/" +
                         std::to_string(stack_.back().index);
    const std::size_t upto = std::min(*reach_, text_.size());
    lines_[current_] =
        1 + static_cast<int>(std::count(text_.begin(),
                                        text_.begin() +
                                            static_cast<std::ptrdiff_t>(upto),
                                        '\n'));
    return true;
  }
  std::string path_of_current() const { return current_; }

  const std::string& text_;
  const std::size_t* reach_;
  std::vector<Frame> stack_;
  std::string current_;
  std::map<std::string, int> lines_;
};

class ConfigReader {
 public:
  explicit ConfigReader(const std::string& text) : text_(text) {
    try {
      root_ = json::parse(text);
    } catch (const json::parse_error& e) {
      const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
      const int line =
          1 + static_cast<int>(std::count(
                  text.begin(),
                  text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
      throw InputError("line " + std::to_string(line) +
                       ": malformed JSON: " + e.what());
    }
    std::size_t reach = 0;
    LineLocator loc(text, &reach);
    CountingIterator first(text.data(), text.data(), &reach);
    CountingIterator last(text.data() + text.size(), text.data(), &reach);
    json::sax_parse(first, last, &loc);
    lines_ = loc.lines();
  }

  const json& root() const { return root_; }

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    int line = 1;
    std::string p = ptr;
    while (true) {
      auto it = lines_.find(p);
      if (it != lines_.end()) {
        line = it->second;
        break;
      }
      const auto cut = p.rfind('/');
      if (cut == std::string::npos) break;
      p = p.substr(0, cut);
    }
    throw InputError("line " + std::to_string(line) + ": " +
                     (ptr.empty() ? std::string("/") : ptr) + ": " + msg);
  }

  const json& at(const std::string& ptr) const {
    const json::json_pointer jp(ptr);
    if (!root_.contains(jp)) fail(ptr, "missing required field");
    return root_.at(jp);
  }
  bool has(const std::string& ptr) const {
    return root_.contains(json::json_pointer(ptr));
  }

  double number(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_number()) fail(ptr, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ptr, "expected a finite number");
    return d;
  }
  long long integer(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    return v.get<long long>();
  }
  bool boolean(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_boolean()) fail(ptr, "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }
  std::size_t array_size(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_array()) fail(ptr, "expected an array");
    return v.size();
  }
  std::vector<double> numbers(const std::string& ptr) const {
    std::vector<double> out;
    const std::size_t n = array_size(ptr);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(number(ptr + "/" + std::to_string(i)));
    }
    return out;
  }

 private:
  const std::string& text_;
  json root_;
  std::map<std::string, int> lines_;
};

CertificateParams read_params(const ConfigReader& r, const std::string& base,
                          int m) {
  CertificateParams p;
  for (const char* key : {"l", "mu", "eta"}) {
    const std::string ptr = base + "/" + key;
    if (static_cast<int>(r.array_size(ptr)) != m) {
      r.fail(ptr, "expected one entry per topology (" + std::to_string(m) +
                      ")");
    }
  }
  for (int i = 0; i < m; ++i) {
    const std::string li = base + "/l/" + std::to_string(i);
    const long long l = r.integer(li);
    if (l < 1) r.fail(li, "l must be a positive integer");
    p.l.push_back(static_cast<int>(l));
    const std::string mi = base + "/mu/" + std::to_string(i);
    const double mu = r.number(mi);
    if (!(mu > 0.0)) r.fail(mi, "mu must be positive");
    p.mu.push_back(mu);
    const std::string ei = base + "/eta/" + std::to_string(i);
    const double eta = r.number(ei);
    if (eta == 0.0) r.fail(ei, "eta must be nonzero");
    p.eta.push_back(eta);
  }
  if (r.has(base + "/phi")) {
    p.phi = r.number(base + "/phi");
    if (!(p.phi > 0.0)) r.fail(base + "/phi", "phi must be positive");
  }
  if (r.has(base + "/beta_setting")) {
    p.beta_setting = r.number(base + "/beta_setting");
    if (!(p.beta_setting > 0.0 && p.beta_setting <= 1.0)) {
      r.fail(base + "/beta_setting", "beta_setting must lie in (0, 1]");
    }
  }
  return p;
}

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json opt_num(const std::optional<double>& v) {
  return v ? num(*v) : json(nullptr);
}

double get_num(const json& j, double if_null) {
  return j.is_null() ? if_null : j.get<double>();
}

std::optional<double> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(num(M(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      M(i, c) = get_num(j.at(i).at(c), std::numeric_limits<double>::quiet_NaN());
    }
  }
  return M;
}

json vec_to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> vec_from_json(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) {
    v.push_back(get_num(x, std::numeric_limits<double>::quiet_NaN()));
  }
  return v;
}

}  // namespace

std::vector<CertificateParams> NetworkConfig::effective_proposals() const {
  if (!proposals.empty()) return proposals;
  return default_proposals(model.params, z_max);
}

NetworkConfig parse_config(const std::string& text) {
  const ConfigReader r(text);
  if (!r.root().is_object()) r.fail("", "configuration must be a JSON object");
  NetworkConfig cfg;
  SwitchedModel& m = cfg.model;

  const std::size_t n = r.array_size("/A");
  if (n == 0) r.fail("/A", "A must be a nonempty square matrix");
  m.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = "/A/" + std::to_string(i);
    if (r.array_size(row) != n) r.fail(row, "A must be square");
    for (std::size_t j = 0; j < n; ++j) {
      m.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          r.number(row + "/" + std::to_string(j));
    }
  }

  const long long N = r.integer("/agents");
  if (N < 1) r.fail("/agents", "agent count must be positive");
  const std::size_t mt = r.array_size("/topologies");
  if (mt == 0) r.fail("/topologies", "at least one topology is required");
  for (std::size_t p = 0; p < mt; ++p) {
    const std::string tp = "/topologies/" + std::to_string(p);
    std::vector<std::pair<int, int>> edges;
    const std::size_t ne = r.array_size(tp);
    for (std::size_t e = 0; e < ne; ++e) {
      const std::string ep = tp + "/" + std::to_string(e);
      if (r.array_size(ep) != 2) r.fail(ep, "an edge is [from, to]");
      const long long a = r.integer(ep + "/0");
      const long long b = r.integer(ep + "/1");
      if (a < 1 || a > N || b < 1 || b > N) {
        r.fail(ep, "edge endpoint outside 1.." + std::to_string(N));
      }
      if (a == b) r.fail(ep, "self-loops are not allowed");
      edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    try {
      m.topologies.emplace_back(static_cast<int>(N), edges);
    } catch (const InputError& e) {
      r.fail(tp, e.what());
    }
  }
  const int modes = static_cast<int>(mt);

  if (static_cast<int>(r.array_size("/tddt")) != modes) {
    r.fail("/tddt", "expected one dwell window per topology");
  }
  for (int p = 0; p < modes; ++p) {
    const std::string tp = "/tddt/" + std::to_string(p);
    const double lo = r.number(tp + "/tau_min");
    const double hi = r.number(tp + "/tau_max");
    if (!(lo > 0.0)) r.fail(tp + "/tau_min", "tau_min must be positive");
    if (hi < lo) r.fail(tp + "/tau_max", "tau_max must be >= tau_min");
    m.tddt.tau_min.push_back(lo);
    m.tddt.tau_max.push_back(hi);
  }

  m.params = read_params(r, "/params", modes);

  cfg.k = r.has("/k") ? static_cast<int>(r.integer("/k")) : static_cast<int>(N);
  if (cfg.k < 1) r.fail("/k", "budget k must be positive");
  if (r.has("/z_max")) {
    cfg.z_max = static_cast<int>(r.integer("/z_max"));
    if (cfg.z_max < 1) r.fail("/z_max", "z_max must be positive");
  }
  if (r.has("/seed")) {
    const long long s = r.integer("/seed");
    if (s < 0) r.fail("/seed", "seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (r.has("/algorithm")) {
    cfg.algorithm = static_cast<int>(r.integer("/algorithm"));
    if (cfg.algorithm != 1 && cfg.algorithm != 2) {
      r.fail("/algorithm", "algorithm must be 1 or 2");
    }
  }
  if (r.has("/proposals")) {
    const std::size_t np = r.array_size("/proposals");
    if (np == 0) r.fail("/proposals", "proposal list must not be empty");
    for (std::size_t i = 0; i < np; ++i) {
      cfg.proposals.push_back(
          read_params(r, "/proposals/" + std::to_string(i), modes));
    }
  }

  if (r.has("/simulate")) {
    SimulateOptions& s = cfg.simulate;
    if (r.has("/simulate/horizon")) {
      s.horizon = r.number("/simulate/horizon");
      if (!(s.horizon > 0)) r.fail("/simulate/horizon", "must be positive");
    }
    if (r.has("/simulate/sample_dt")) {
      s.sample_dt = r.number("/simulate/sample_dt");
      if (!(s.sample_dt > 0)) r.fail("/simulate/sample_dt", "must be positive");
    }
    if (r.has("/simulate/law")) {
      const std::string law = r.string("/simulate/law");
      if (law == "aperiodic") {
        s.law = SwitchLaw::kAperiodic;
      } else if (law == "cyclic") {
        s.law = SwitchLaw::kCyclic;
      } else {
        r.fail("/simulate/law", "law must be \"aperiodic\" or \"cyclic\"");
      }
    }
    if (r.has("/simulate/followers_only")) {
      s.followers_only = r.boolean("/simulate/followers_only");
    }
    if (r.has("/simulate/include_state")) {
      s.include_state = r.boolean("/simulate/include_state");
    }
    if (r.has("/simulate/signals")) {
      s.signals = static_cast<int>(r.integer("/simulate/signals"));
      if (s.signals < 1) r.fail("/simulate/signals", "must be positive");
    }
  }
  if (r.has("/compare")) {
    if (r.has("/compare/trials")) {
      cfg.compare.trials = static_cast<int>(r.integer("/compare/trials"));
      if (cfg.compare.trials < 1) r.fail("/compare/trials", "must be positive");
    }
    if (r.has("/compare/trial_gains")) {
      cfg.compare.trial_gains = r.numbers("/compare/trial_gains");
      if (static_cast<int>(cfg.compare.trial_gains.size()) != modes) {
        r.fail("/compare/trial_gains", "expected one gain per topology");
      }
    }
  }
  if (r.has("/sweep")) {
    if (r.has("/sweep/increments")) {
      cfg.sweep.increments = r.numbers("/sweep/increments");
      for (size_t i = 0; i < cfg.sweep.increments.size(); ++i) {
        if (cfg.sweep.increments[i] < 0) {
          r.fail("/sweep/increments/" + std::to_string(i),
                 "increments must be nonnegative");
        }
      }
    }
    if (r.has("/sweep/epsilon")) {
      cfg.sweep.epsilon = r.number("/sweep/epsilon");
      if (!(cfg.sweep.epsilon > 0)) r.fail("/sweep/epsilon", "must be positive");
    }
  }
  if (r.has("/modes_table/stable_eta")) {
    cfg.modes_table.stable_eta = r.numbers("/modes_table/stable_eta");
    if (static_cast<int>(cfg.modes_table.stable_eta.size()) != modes) {
      r.fail("/modes_table/stable_eta", "expected one rate per topology");
    }
    for (size_t i = 0; i < cfg.modes_table.stable_eta.size(); ++i) {
      if (!(cfg.modes_table.stable_eta[i] < 0)) {
        r.fail("/modes_table/stable_eta/" + std::to_string(i),
               "stable rates must be negative");
      }
    }
  }

  try {
    m.validate();
  } catch (const InputError& e) {
    r.fail("", e.what());
  }
  return cfg;
}

NetworkConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

json params_to_json(const CertificateParams& p) {
  return json{{"l", p.l},
              {"mu", vec_to_json(p.mu)},
              {"eta", vec_to_json(p.eta)},
              {"phi", num(p.phi)},
              {"beta_setting", num(p.beta_setting)}};
}

CertificateParams params_from_json(const json& j) {
  CertificateParams p;
  p.l = j.at("l").get<std::vector<int>>();
  p.mu = vec_from_json(j.at("mu"));
  p.eta = vec_from_json(j.at("eta"));
  p.phi = get_num(j.value("phi", json(0.0)), 0.0);
  p.beta_setting = get_num(j.value("beta_setting", json(1.0)), 1.0);
  return p;
}

json certificate_to_json(const Certificate& c) {
  json modes = json::array();
  json windows = json::array();
  for (const ModeRecord& r : c.modes) {
    json rec{
        {"mode_class", to_string(r.mode_class)},
        {"route", r.stable_route ? "stable" : "unstable"},
        {"kappa", num(r.gain.kappa)},
        {"shift_target", num(r.shift_target)},
        {"gain", matrix_to_json(r.gain.K)},
        {"gain_structured", r.gain.structured},
        {"margin_a1", num(r.margins.margin_a1)},
        {"margin_a2", num(r.margins.margin_a2)},
        {"beta_computed", opt_num(r.margins.beta_computed)},
        {"lambda_r",
         {{"mode", num(r.margins.rightmost_mode)},
          {"a1", num(r.margins.rightmost_1)},
          {"a2", num(r.margins.rightmost_2)}}},
        {"p_family_residuals",
         {{"flow_start", vec_to_json(r.lmi.flow_start)},
          {"flow_end", vec_to_json(r.lmi.flow_end)},
          {"stable_decay", vec_to_json(r.lmi.stable_decay)}}},
        {"p_family_lambda_min", vec_to_json(r.p_family_lambda_min)},
        {"p_family_lambda_max", vec_to_json(r.p_family_lambda_max)},
        {"p_lambda_max_bound", opt_num(r.p_lambda_max_bound)},
        {"mu", num(r.mu)},
    };
    if (r.gain.K_unstructured.size() > 0) {
      rec["gain_unstructured"] = matrix_to_json(r.gain.K_unstructured);
    }
    modes.push_back(std::move(rec));
    windows.push_back(json::array({num(r.window.lower), num(r.window.upper)}));
  }
  json out{{"leaders", c.leaders},
           {"params", params_to_json(c.params)},
           {"phi", num(c.phi)},
           {"modes", modes},
           {"mu_required", matrix_to_json(c.mu_required)},
           {"tau_windows", windows},
           {"warnings", c.warnings},
           {"verdict", c.pass ? "pass" : "fail"},
           {"failed_condition", c.failed_condition},
           {"failure_detail", c.failure_detail}};
  if (c.beta) {
    out["beta"] = json{{"accepted", c.beta->accepted},
                       {"rerun", c.beta->rerun},
                       {"floor_reached", c.beta->floor_reached},
                       {"final_setting", num(c.beta->final_setting)},
                       {"history", vec_to_json(c.beta->history)}};
  } else {
    out["beta"] = nullptr;
  }
  return out;
}

Certificate certificate_from_json(const json& j) {
  Certificate c;
  c.leaders = j.at("leaders").get<std::vector<int>>();
  c.params = params_from_json(j.at("params"));
  c.phi = get_num(j.at("phi"), 0.0);
  const json& windows = j.at("tau_windows");
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t p = 0; p < j.at("modes").size(); ++p) {
    const json& m = j.at("modes").at(p);
    ModeRecord r;
    r.mode_class = m.at("mode_class").get<std::string>() == "stable"
                       ? ModeClass::kStable
                       : ModeClass::kUnstable;
    r.stable_route = m.at("route").get<std::string>() == "stable";
    r.gain.kappa = get_num(m.at("kappa"), nan);
    r.shift_target = get_num(m.at("shift_target"), nan);
    r.gain.K = matrix_from_json(m.at("gain"));
    r.gain.structured = m.at("gain_structured").get<bool>();
    if (m.contains("gain_unstructured")) {
      r.gain.K_unstructured = matrix_from_json(m.at("gain_unstructured"));
    }
    r.margins.margin_a1 = get_num(m.at("margin_a1"), nan);
    r.margins.margin_a2 = get_num(m.at("margin_a2"), nan);
    r.margins.beta_computed = get_opt(m, "beta_computed");
    r.margins.rightmost_mode = get_num(m.at("lambda_r").at("mode"), nan);
    r.margins.rightmost_1 = get_num(m.at("lambda_r").at("a1"), nan);
    r.margins.rightmost_2 = get_num(m.at("lambda_r").at("a2"), nan);
    const json& res = m.at("p_family_residuals");
    r.lmi.flow_start = vec_from_json(res.at("flow_start"));
    r.lmi.flow_end = vec_from_json(res.at("flow_end"));
    r.lmi.stable_decay = vec_from_json(res.at("stable_decay"));
    r.p_family_lambda_min = vec_from_json(m.at("p_family_lambda_min"));
    r.p_family_lambda_max = vec_from_json(m.at("p_family_lambda_max"));
    r.p_lambda_max_bound = get_opt(m, "p_lambda_max_bound");
    r.mu = get_num(m.at("mu"), nan);
    if (p < windows.size()) {
      r.window.lower = get_num(windows.at(p).at(0), nan);
      r.window.upper = get_num(windows.at(p).at(1), inf);
    }
    c.modes.push_back(std::move(r));
  }
  c.mu_required = matrix_from_json(j.at("mu_required"));
  c.warnings = j.at("warnings").get<std::vector<std::string>>();
  c.pass = j.at("verdict").get<std::string>() == "pass";
  c.failed_condition = j.at("failed_condition").get<std::string>();
  c.failure_detail = j.at("failure_detail").get<std::string>();
  if (!j.at("beta").is_null()) {
    const json& b = j.at("beta");
    BetaDecision d;
    d.accepted = b.at("accepted").get<bool>();
    d.rerun = b.at("rerun").get<bool>();
    d.floor_reached = b.at("floor_reached").get<bool>();
    d.final_setting = get_num(b.at("final_setting"), nan);
    d.history = vec_from_json(b.at("history"));
    c.beta = d;
  }
  return c;
}

json report_to_json(const SelectionReport& r) {
  json out{{"leaders", r.leaders},
           {"f_trace", vec_to_json(r.f_trace)},
           {"gamma_delta", opt_num(r.gamma_delta)},
           {"gamma_0", opt_num(r.gamma_0)},
           {"k_used", r.k_used},
           {"params_used", params_to_json(r.params_used)},
           {"status", to_string(r.status)},
           {"algorithm", r.algorithm},
           {"retries", r.retries},
           {"gamma_delta_sparse", r.gamma_delta_sparse},
           {"bound_holds", r.bound_holds ? json(*r.bound_holds) : json(nullptr)},
           {"f_empty", num(r.f_empty)},
           {"f_initial", num(r.f_initial)},
           {"beta_history", vec_to_json(r.beta_history)}};
  out["xi"] = r.xi ? json(*r.xi) : json(nullptr);
  out["certificate"] =
      r.certificate ? certificate_to_json(*r.certificate) : json(nullptr);
  return out;
}

SelectionReport report_from_json(const json& j) {
  SelectionReport r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.leaders = j.at("leaders").get<std::vector<int>>();
  r.f_trace = vec_from_json(j.at("f_trace"));
  r.gamma_delta = get_opt(j, "gamma_delta");
  r.gamma_0 = get_opt(j, "gamma_0");
  r.k_used = j.at("k_used").get<int>();
  r.params_used = params_from_json(j.at("params_used"));
  const std::string status = j.at("status").get<std::string>();
  if (status == "certified") {
    r.status = SelectStatus::kCertified;
  } else if (status == "uncertified_budget") {
    r.status = SelectStatus::kUncertifiedBudget;
  } else if (status == "none_for_tddt") {
    r.status = SelectStatus::kNoneForTddt;
  } else {
    throw InputError("unknown report status \"" + status + "\"");
  }
  r.algorithm = j.value("algorithm", std::string());
  r.retries = j.value("retries", 0);
  r.gamma_delta_sparse = j.value("gamma_delta_sparse", false);
  if (j.contains("bound_holds") && !j.at("bound_holds").is_null()) {
    r.bound_holds = j.at("bound_holds").get<bool>();
  }
  r.f_empty = get_num(j.value("f_empty", json(nullptr)), nan);
  r.f_initial = get_num(j.value("f_initial", json(nullptr)), nan);
  if (j.contains("beta_history")) {
    r.beta_history = vec_from_json(j.at("beta_history"));
  }
  if (j.contains("xi") && !j.at("xi").is_null()) r.xi = j.at("xi").get<int>();
  if (j.contains("certificate") && !j.at("certificate").is_null()) {
    r.certificate = certificate_from_json(j.at("certificate"));
  }
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

}  // namespace leadersel
