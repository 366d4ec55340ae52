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

#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "leadersel/errors.hpp"
#include "leadersel/experiments.hpp"
#include "leadersel/io.hpp"
#include "leadersel/spectral.hpp"

namespace py = pybind11;
using namespace leadersel;

namespace {

// JSON crosses the boundary as text so Python sees plain dicts and lists.
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_python(const py::object& o) {
  const std::string text = py::str(py::module_::import("json").attr("dumps")(o));
  return nlohmann::json::parse(text);
}

py::dict trajectory_dict(const Trajectory& tr) {
  Eigen::MatrixXd states(static_cast<Eigen::Index>(tr.states.size()),
                         tr.states.empty() ? 0 : tr.states.front().size());
  for (size_t k = 0; k < tr.states.size(); ++k) {
    states.row(static_cast<Eigen::Index>(k)) = tr.states[k].transpose();
  }
  py::dict d;
  d["times"] = tr.times;
  d["states"] = states;
  d["topology"] = tr.topology;
  d["n_agents"] = tr.n_agents;
  d["agent_dim"] = tr.agent_dim;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Leader selection and dwell-time certification for switched networks";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<DegenerateInstance>(m, "DegenerateInstance", PyExc_RuntimeError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);
  py::register_exception<SynthesisError>(m, "SynthesisError", PyExc_RuntimeError);

  py::class_<NetworkConfig>(m, "Config")
      .def_property_readonly("n_agents",
                             [](const NetworkConfig& c) { return c.model.n_agents(); })
      .def_property_readonly("agent_dim",
                             [](const NetworkConfig& c) { return c.model.agent_dim(); })
      .def_property_readonly("n_topologies",
                             [](const NetworkConfig& c) { return c.model.n_modes(); })
      .def_property_readonly("A", [](const NetworkConfig& c) { return c.model.A; })
      .def_readonly("k", &NetworkConfig::k)
      .def_readonly("z_max", &NetworkConfig::z_max)
      .def_readonly("seed", &NetworkConfig::seed);

  m.def("parse_config", &parse_config, py::arg("text"),
        "Parse a configuration from JSON text.");
  m.def("load_config", &load_config, py::arg("path"),
        "Read and parse a configuration file.");

  m.def(
      "initial_leader_set",
      [](const NetworkConfig& c) { return initial_leader_set(c.model.topologies); },
      py::arg("config"), "Agents unreachable in the union of the topologies.");
  m.def(
      "metric_f",
      [](const NetworkConfig& c, const std::vector<int>& leaders) {
        return metric_f(c.model, leaders);
      },
      py::arg("config"), py::arg("leaders"));
  m.def(
      "eigenvalues",
      [](const Eigen::MatrixXd& M) {
        std::vector<std::complex<double>> out;
        for (const auto& p : eig(M)) out.push_back(p.value);
        return out;
      },
      py::arg("M"));
  m.def(
      "tddt_window",
      [](double tau_min, double eta, double mu) {
        const Window w = tddt_window(tau_min, eta, mu);
        return py::make_tuple(w.lower, w.upper);
      },
      py::arg("tau_min"), py::arg("eta"), py::arg("mu"));

  m.def(
      "select",
      [](const NetworkConfig& c, int algorithm) {
        SelectionReport r;
        {
          py::gil_scoped_release release;
          r = run_selection(c, algorithm);
        }
        return to_python(report_to_json(r));
      },
      py::arg("config"), py::arg("algorithm") = 1,
      "Run the selection with the beta re-run loop; returns the report dict.");
  m.def(
      "simulate",
      [](const NetworkConfig& c, const py::object& report, std::uint64_t signal_index,
         std::uint64_t state_index) {
        const SelectionReport r = report_from_json(from_python(report));
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = simulate_report(c, r, signal_index, state_index);
        }
        return trajectory_dict(tr);
      },
      py::arg("config"), py::arg("report"), py::arg("signal_index") = 0,
      py::arg("state_index") = 0,
      "Propagate the certified closed loop described by a report dict.");
  m.def(
      "compare",
      [](const NetworkConfig& c) {
        std::vector<CompareRow> rows;
        {
          py::gil_scoped_release release;
          rows = compare_methods(c);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["leaders"] = r.size;
          d["greedy_f"] = r.greedy;
          d["fmax_greedy_f"] = r.fmax_greedy;
          d["fmax_value"] = r.fmax_value;
          d["random_f"] = r.random_mean;
          out.append(d);
        }
        return out;
      },
      py::arg("config"));
  m.def(
      "sweep_dwell",
      [](const NetworkConfig& c) {
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sweep_dwell(c);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["increment"] = r.increment;
          d["leaders"] = r.leaders;
          d["status"] = to_string(r.status);
          out.append(d);
        }
        return out;
      },
      py::arg("config"));
}
