// Copyright 2026 The parrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parrep/corrsamp.h"
#include "parrep/games.h"
#include "parrep/reduction.h"
#include "parrep/strategy.h"
#include "parrep/values.h"
#include "parrep/verify.h"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace parrep;

namespace {

// Converts 1-based coordinates from Python to the 0-based library convention.
std::vector<int> zero_based(const std::vector<int> &C) {
    std::vector<int> out;
    for (int c : C) {
        out.push_back(c - 1);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_parrep, m) {
    m.doc() = "Parallel repetition toolkit for two-player nonlocal games";

    py::class_<Game>(m, "Game")
        .def_readonly("name", &Game::name)
        .def_readonly("x_size", &Game::x_size)
        .def_readonly("y_size", &Game::y_size)
        .def_readonly("a_size", &Game::a_size)
        .def_readonly("b_size", &Game::b_size)
        .def_readonly("mu", &Game::mu)
        .def("win", &Game::win, py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"))
        .def("to_text", [](const Game &g) { return game_to_text(g); });

    m.def("fixture_game", [](const std::string &name) { return fixture_game(name); }, py::arg("name"));
    m.def("game_from_text", [](const std::string &text) { return game_from_text(text); }, py::arg("text"));
    m.def("load_game", &load_game, py::arg("path"));

    m.def("classical_value", &classical_value, py::arg("game"), py::arg("n"));
    m.def(
        "win_probability",
        [](const Game &g, int n, const std::string &strategy) {
            return win_probability(g, n, strategy_fixture(strategy, g, n));
        },
        py::arg("game"), py::arg("n"), py::arg("strategy"));
    m.def(
        "seesaw_value",
        [](const Game &g, int d, std::uint64_t seed, int max_iters) {
            SeesawConfig cfg;
            cfg.d = d;
            cfg.seed = seed;
            cfg.max_iters = max_iters;
            auto r = seesaw(g, cfg);
            return py::dict("value"_a = r.value, "iterations"_a = r.iterations, "trace"_a = r.trace);
        },
        py::arg("game"), py::arg("d") = 2, py::arg("seed") = 1, py::arg("max_iters") = 500);

    m.def(
        "theorem1_bound",
        [](double eps, double s, double n, double c) {
            auto b = theorem1_bound(eps, s, n, c);
            return py::dict("raw"_a = b.raw, "bound_value"_a = b.bound_value, "vacuous"_a = b.vacuous);
        },
        py::arg("eps"), py::arg("s"), py::arg("n"), py::arg("c") = 1.0);

    m.def("embezzlement_coefficients", [](std::size_t N) { return embezzlement(N).coefficients; }, py::arg("N"));

    m.def(
        "run_reduction_json",
        [](const Game &g, const std::string &strategy, int n, const std::vector<int> &C, const std::string &classical,
           const std::string &quantum, std::uint64_t trials, std::uint64_t seed, std::size_t d_prime, int workers) {
            ReductionConfig cfg(g, n, strategy_fixture(strategy, g, n));
            cfg.strategy_id = strategy;
            cfg.C = zero_based(C);
            cfg.classical = parse_classical_mode(classical);
            cfg.quantum = parse_quantum_mode(quantum);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.d_prime = d_prime;
            cfg.workers = workers;
            py::gil_scoped_release release;
            return run_reduction(cfg).to_json();
        },
        py::arg("game"), py::arg("strategy"), py::arg("n"), py::arg("C") = std::vector<int>{},
        py::arg("classical") = "exact", py::arg("quantum") = "oracle_state", py::arg("trials") = 1000,
        py::arg("seed") = 7, py::arg("d_prime") = 65536, py::arg("workers") = 1);

    m.def(
        "verify_json",
        [](const std::string &suite, const Game &g, const std::string &strategy, int n, const std::vector<int> &C,
           std::uint64_t seed, int trials) {
            SuiteReport rep;
            auto C0 = zero_based(C);
            if (suite == "matcore") {
                rep = verify_matcore(seed, trials);
            } else if (suite == "infotheory") {
                rep = verify_infotheory(seed, trials, std::min(trials, 500));
            } else if (suite == "usefulness") {
                rep = verify_usefulness(g, n, strategy_fixture(strategy, g, n), C0);
            } else if (suite == "skew") {
                rep = verify_skew(g, n, strategy_fixture(strategy, g, n), C0);
            } else if (suite == "xi") {
                rep = verify_xi(g, n, strategy_fixture(strategy, g, n), C0);
            } else if (suite == "corrsamp") {
                rep = verify_corrsamp(seed, trials);
            } else if (suite == "qcs") {
                rep = verify_qcs(seed);
            } else {
                throw std::invalid_argument("unknown suite '" + suite + "'");
            }
            return py::make_tuple(rep.passed(), rep.to_json());
        },
        py::arg("suite"), py::arg("game"), py::arg("strategy") = "tsirelson", py::arg("n") = 2,
        py::arg("C") = std::vector<int>{}, py::arg("seed") = 7, py::arg("trials") = 1000);
}
