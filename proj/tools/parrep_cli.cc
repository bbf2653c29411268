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

// parrep_cli: `verify --suite NAME ...` and `run {reduction,values,bound,corrsamp,qcs} ...`.
// Exit codes: 0 pass, 1 assertion failure, 2 usage or configuration error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "parrep/corrsamp.h"
#include "parrep/games.h"
#include "parrep/reduction.h"
#include "parrep/strategy.h"
#include "parrep/values.h"
#include "parrep/verify.h"

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string suite;
    std::string target;
    std::string game = "chsh";
    std::string strategy = "tsirelson";
    int n = 2;
    std::string C = "";
    std::string mode = "";
    std::string mode_classical = "exact_conditional";
    std::string mode_quantum = "oracle_state";
    std::size_t dprime = std::size_t{1} << 16;
    double alpha = 0.01;
    std::uint64_t seed = 7;
    std::uint64_t trials = 1000;
    int raz_trials = 500;
    int workers = 1;
    int seeds = 10;
    int max_iters = 500;
    int d = 2;
    double eps = 0.25;
    double s = 2.0;
    std::string n_grid = "2^10..2^60";
    std::string dprime_exps = "8,12,16,20";
    std::string out;
};

void add_common(CLI::App *app, Options &o) {
    app->add_option("--game", o.game, "fixture name (chsh, trivial, asym3) or game file");
    app->add_option("--strategy", o.strategy, "fixture name (tsirelson, printing, detprod) or strategy file");
    app->add_option("--n", o.n, "number of repetitions")->check(CLI::Range(1, 12));
    app->add_option("--C", o.C, "1-based coordinates, comma separated; empty, 'none' or 'auto'");
    app->add_option("--mode", o.mode, "shorthand: 'exact' sets both modes to their exact variants");
    app->add_option("--mode-classical", o.mode_classical, "exact_conditional | holenstein | joint");
    app->add_option("--mode-quantum", o.mode_quantum, "oracle_state | embezzle");
    app->add_option("--dprime", o.dprime, "embezzlement junk dimension d'");
    app->add_option("--alpha", o.alpha, "coefficient grid parameter");
    app->add_option("--seed", o.seed, "random seed");
    app->add_option("--trials", o.trials, "trials for sweeps and Monte Carlo");
    app->add_option("--raz-trials", o.raz_trials, "random instances for the Raz sweep");
    app->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 256));
    app->add_option("--seeds", o.seeds, "seesaw restarts");
    app->add_option("--max-iters", o.max_iters, "seesaw iteration cap");
    app->add_option("--d", o.d, "local dimension (seesaw, qcs)");
    app->add_option("--eps", o.eps, "epsilon");
    app->add_option("--s", o.s, "answer length in bits");
    app->add_option("--n-grid", o.n_grid, "e.g. 2^10..2^60 or 100,1000,1e6");
    app->add_option("--dprime-exps", o.dprime_exps, "log2 d' values for run qcs");
    app->add_option("--out", o.out, "output path prefix (writes .json, and .csv for run)");
}

std::vector<std::string> split_list(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

parrep::Game resolve_game(const std::string &name) {
    if (std::filesystem::exists(name)) {
        return parrep::load_game(name);
    }
    try {
        return parrep::fixture_game(name);
    } catch (const std::exception &e) {
        throw UsageError("unknown game '" + name + "' (not a fixture and no such file)");
    }
}

parrep::EntangledStrategy resolve_strategy(const std::string &name, const parrep::Game &g, int n) {
    if (std::filesystem::exists(name)) {
        auto s = parrep::load_strategy(name);
        parrep::check_compatible(g, n, s);
        return s;
    }
    return parrep::strategy_fixture(name, g, n);
}

struct CSpec {
    std::vector<int> C;
    bool automatic = false;
};

CSpec parse_C(const std::string &s, int n) {
    CSpec out;
    if (s.empty() || s == "none") {
        return out;
    }
    if (s == "auto") {
        out.automatic = true;
        return out;
    }
    for (const auto &tok : split_list(s, ',')) {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(tok, &used);
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception &) {
            throw UsageError("bad --C entry '" + tok + "'");
        }
        if (k < 1 || k > n) {
            throw UsageError("--C entry " + tok + " outside [1, n]");
        }
        out.C.push_back(k - 1);
    }
    return out;
}

double parse_number(const std::string &tok) {
    auto caret = tok.find('^');
    try {
        if (caret != std::string::npos) {
            return std::pow(std::stod(tok.substr(0, caret)), std::stod(tok.substr(caret + 1)));
        }
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) {
            throw std::invalid_argument(tok);
        }
        return v;
    } catch (const std::exception &) {
        throw UsageError("bad number '" + tok + "'");
    }
}

// "2^10..2^60" walks the exponent in unit steps; otherwise a comma list.
std::vector<double> parse_grid(const std::string &s) {
    auto dots = s.find("..");
    std::vector<double> out;
    if (dots != std::string::npos) {
        std::string lo = s.substr(0, dots), hi = s.substr(dots + 2);
        auto cl = lo.find('^'), ch = hi.find('^');
        if (cl == std::string::npos || ch == std::string::npos || lo.substr(0, cl) != hi.substr(0, ch)) {
            throw UsageError("range grids must look like b^lo..b^hi");
        }
        double base = parse_number(lo.substr(0, cl));
        int e0 = static_cast<int>(parse_number(lo.substr(cl + 1)));
        int e1 = static_cast<int>(parse_number(hi.substr(ch + 1)));
        for (int e = e0; e <= e1; e++) {
            out.push_back(std::pow(base, e));
        }
    } else {
        for (const auto &tok : split_list(s, ',')) {
            out.push_back(parse_number(tok));
        }
    }
    if (out.empty()) {
        throw UsageError("empty --n-grid");
    }
    return out;
}

json config_json(const std::string &command, const Options &o) {
    return {{"command", command},       {"suite", o.suite},     {"target", o.target},
            {"game", o.game},           {"strategy", o.strategy}, {"n", o.n},
            {"C", o.C},                 {"mode", o.mode},       {"mode_classical", o.mode_classical},
            {"mode_quantum", o.mode_quantum}, {"dprime", o.dprime}, {"alpha", o.alpha},
            {"seed", o.seed},           {"trials", o.trials},   {"raz_trials", o.raz_trials},
            {"workers", o.workers},     {"seeds", o.seeds},     {"max_iters", o.max_iters},
            {"d", o.d},                 {"eps", o.eps},         {"s", o.s},
            {"n_grid", o.n_grid},       {"dprime_exps", o.dprime_exps}};
}

void emit(const Options &o, const json &doc, const std::string &csv) {
    if (o.out.empty()) {
        std::cout << doc.dump(2) << "\n";
        if (!csv.empty()) {
            std::cout << csv;
        }
        return;
    }
    std::ofstream js(o.out + ".json");
    if (!js) {
        throw UsageError("cannot write " + o.out + ".json");
    }
    js << doc.dump(2) << "\n";
    if (!csv.empty()) {
        std::ofstream cs(o.out + ".csv");
        cs << csv;
    }
}

json wrap(const std::string &command, const Options &o, json report) {
    return {{"version", PARREP_VERSION}, {"config", config_json(command, o)}, {"report", std::move(report)}};
}

parrep::ReductionConfig reduction_config(const Options &o) {
    auto g = resolve_game(o.game);
    auto s = resolve_strategy(o.strategy, g, o.n);
    parrep::ReductionConfig cfg(g, o.n, s);
    cfg.strategy_id = o.strategy;
    auto cs = parse_C(o.C, o.n);
    cfg.C = cs.C;
    cfg.auto_C = cs.automatic;
    cfg.eps = o.eps;
    std::string mc = o.mode_classical, mq = o.mode_quantum;
    if (o.mode == "exact") {
        mc = "exact_conditional";
        mq = "oracle_state";
    } else if (!o.mode.empty()) {
        throw UsageError("unknown --mode '" + o.mode + "'");
    }
    try {
        cfg.classical = parrep::parse_classical_mode(mc);
        cfg.quantum = parrep::parse_quantum_mode(mq);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    cfg.d_prime = o.dprime;
    cfg.alpha = o.alpha;
    cfg.seed = o.seed;
    cfg.trials = o.trials;
    cfg.workers = o.workers;
    return cfg;
}

int cmd_verify(const Options &o) {
    const auto &names = parrep::suite_names();
    if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
        throw UsageError("unknown suite '" + o.suite + "'");
    }
    parrep::SuiteReport rep;
    const int trials = static_cast<int>(o.trials);
    if (o.suite == "matcore") {
        rep = parrep::verify_matcore(o.seed, trials);
    } else if (o.suite == "infotheory") {
        rep = parrep::verify_infotheory(o.seed, trials, o.raz_trials);
    } else if (o.suite == "values") {
        rep = parrep::verify_values(resolve_game(o.game), o.seed, o.seeds, o.max_iters);
    } else if (o.suite == "corrsamp") {
        rep = parrep::verify_corrsamp(o.seed, trials);
    } else if (o.suite == "qcs") {
        rep = parrep::verify_qcs(o.seed);
    } else if (o.suite == "reduction") {
        rep = parrep::verify_reduction(reduction_config(o));
    } else if (o.suite == "bound") {
        rep = parrep::verify_bound(o.eps, o.s, parse_grid(o.n_grid));
    } else {
        auto g = resolve_game(o.game);
        auto s = resolve_strategy(o.strategy, g, o.n);
        auto cs = parse_C(o.C, o.n);
        if (cs.automatic) {
            cs.C = parrep::choose_C(parrep::born_joint(g, o.n, s), g, o.n, o.eps, o.n - 1).C;
        }
        if (o.suite == "usefulness") {
            rep = parrep::verify_usefulness(g, o.n, s, cs.C);
        } else if (o.suite == "skew") {
            rep = parrep::verify_skew(g, o.n, s, cs.C);
        } else if (o.suite == "sampleability") {
            rep = parrep::verify_sampleability(g, o.n, s, cs.C);
        } else {
            rep = parrep::verify_xi(g, o.n, s, cs.C);
        }
    }
    emit(o, wrap("verify", o, json::parse(rep.to_json())), "");
    std::cerr << "suite " << rep.suite << ": " << rep.checks.size() << " checks, " << rep.failures() << " failures";
    if (!rep.passed()) {
        std::cerr << "; first: " << rep.first_failure();
    }
    std::cerr << "\n";
    return rep.passed() ? 0 : 1;
}

int run_values(const Options &o) {
    auto g = resolve_game(o.game);
    json rows = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "n,classical,seesaw_best\n";
    double best = 0.0;
    json seeds = json::array();
    for (int k = 0; k < o.seeds; k++) {
        parrep::SeesawConfig cfg;
        cfg.d = o.d;
        cfg.seed = o.seed + static_cast<std::uint64_t>(k);
        cfg.max_iters = o.max_iters;
        auto r = parrep::seesaw(g, cfg);
        seeds.push_back({{"seed", cfg.seed}, {"value", r.value}, {"iterations", r.iterations}, {"converged", r.converged}});
        best = std::max(best, r.value);
    }
    for (int n = 1; n <= o.n; n++) {
        json row = {{"n", n}};
        double cv = std::nan("");
        try {
            cv = parrep::classical_value(g, n);
            row["classical"] = cv;
        } catch (const std::length_error &) {
            row["classical"] = "infeasible";
        }
        if (n == 1) {
            row["seesaw_best"] = best;
        }
        rows.push_back(row);
        csv << n << "," << (std::isnan(cv) ? std::string("") : std::to_string(cv)) << ","
            << (n == 1 ? std::to_string(best) : std::string("")) << "\n";
    }
    emit(o, wrap("run values", o, {{"rows", rows}, {"seesaw", seeds}}), csv.str());
    return 0;
}

int run_bound(const Options &o) {
    json rows = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "n,log2_n,raw,bound,vacuous\n";
    for (double n : parse_grid(o.n_grid)) {
        auto b = parrep::theorem1_bound(o.eps, o.s, n);
        rows.push_back({{"n", n}, {"raw", b.raw}, {"bound", b.bound_value}, {"vacuous", b.vacuous}});
        csv << n << "," << std::log2(n) << "," << b.raw << "," << b.bound_value << "," << (b.vacuous ? 1 : 0) << "\n";
    }
    emit(o, wrap("run bound", o, {{"rows", rows}}), csv.str());
    return 0;
}

int run_corrsamp(const Options &o) {
    const std::vector<double> P{0.4, 0.3, 0.2, 0.1};
    json rows = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "eps,disagreement_rate,rejection_bound,marginal_tv,failures\n";
    for (double eps : {0.0, 0.05, 0.1, 0.2, 0.3}) {
        std::vector<double> Q = P;
        Q[0] -= eps;
        Q[3] += eps;
        std::uint64_t dis = 0, fails = 0;
        std::vector<double> counts(4, 0.0);
        for (std::uint64_t t = 0; t < o.trials; t++) {
            parrep::SharedRandomStream st(o.seed, t, 4);
            auto cs = parrep::classical_corr_sample(P, Q, st);
            if (cs.failed) {
                fails++;
                continue;
            }
            dis += cs.agreed ? 0 : 1;
            counts[cs.p_out] += 1;
        }
        double ok = static_cast<double>(o.trials - fails), tv = 0.0;
        for (int u = 0; u < 4; u++) {
            tv += 0.5 * std::abs(counts[u] / ok - P[u]);
        }
        double rate = static_cast<double>(dis) / static_cast<double>(o.trials);
        double bound = 2 * eps / (1 + eps);
        rows.push_back({{"eps", eps}, {"disagreement_rate", rate}, {"rejection_bound", bound}, {"marginal_tv", tv}, {"failures", fails}});
        csv << eps << "," << rate << "," << bound << "," << tv << "," << fails << "\n";
    }
    emit(o, wrap("run corrsamp", o, {{"rows", rows}}), csv.str());
    return 0;
}

int run_qcs(const Options &o) {
    parrep::Rng rng(o.seed);
    parrep::PureState psi(parrep::random_state(rng, o.d * o.d));
    json rows = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "d,d_prime,alpha,err\n";
    for (const auto &tok : split_list(o.dprime_exps, ',')) {
        int e = static_cast<int>(parse_number(tok));
        std::size_t dp = std::size_t{1} << e;
        auto iso = parrep::qcs_isometry(psi, dp, o.alpha);
        auto r = parrep::qcs_execute(iso, iso, o.d);
        rows.push_back({{"d_prime", dp}, {"err", r.err}});
        csv << o.d << "," << dp << "," << o.alpha << "," << r.err << "\n";
    }
    emit(o, wrap("run qcs", o, {{"rows", rows}}), csv.str());
    return 0;
}

int cmd_run(const Options &o) {
    if (o.target == "reduction") {
        auto rep = parrep::run_reduction(reduction_config(o));
        auto bc = parrep::main_bound_compare(rep, o.eps);
        json r = json::parse(rep.to_json());
        r["bound_compare"] = {{"pass_threshold", bc.pass_threshold},
                              {"margin", bc.margin},
                              {"budget", bc.budget},
                              {"within_eps_quarter", bc.within_eps_quarter}};
        emit(o, wrap("run reduction", o, r), rep.to_csv());
        return 0;
    }
    if (o.target == "values") {
        return run_values(o);
    }
    if (o.target == "bound") {
        return run_bound(o);
    }
    if (o.target == "corrsamp") {
        return run_corrsamp(o);
    }
    if (o.target == "qcs") {
        return run_qcs(o);
    }
    throw UsageError("unknown run target '" + o.target + "'");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"parrep: nonlocal game parallel repetition toolkit"};
    app.set_version_flag("--version", std::string(PARREP_VERSION));
    app.set_config("--config", "", "config file (TOML/INI key = value); flags override it");
    app.require_subcommand(1);
    Options opts;
    // Shared options live on the root so config files can use plain keys;
    // subcommands fall through to them.
    add_common(&app, opts);
    auto *verify = app.add_subcommand("verify", "run an invariant suite");
    verify->add_option("--suite", opts.suite, "suite name")->required();
    verify->fallthrough();
    auto *run = app.add_subcommand("run", "run an experiment and write JSON + CSV");
    run->add_option("target", opts.target, "reduction | values | bound | corrsamp | qcs")->required();
    run->fallthrough();
    // Defaults that differ per command are applied after parsing.
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (verify->parsed()) {
            return cmd_verify(opts);
        }
        return cmd_run(opts);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const parrep::ZeroProbabilityEvent &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
