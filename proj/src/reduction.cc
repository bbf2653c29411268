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

#include "parrep/reduction.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace parrep {

std::string to_string(ClassicalMode m) {
    switch (m) {
        case ClassicalMode::kExactConditional:
            return "exact_conditional";
        case ClassicalMode::kHolenstein:
            return "holenstein";
        case ClassicalMode::kJoint:
            return "joint";
    }
    return "?";
}

std::string to_string(QuantumMode m) {
    return m == QuantumMode::kOracleState ? "oracle_state" : "embezzle";
}

ClassicalMode parse_classical_mode(const std::string &s) {
    if (s == "exact_conditional" || s == "exact") {
        return ClassicalMode::kExactConditional;
    }
    if (s == "holenstein") {
        return ClassicalMode::kHolenstein;
    }
    if (s == "joint") {
        return ClassicalMode::kJoint;
    }
    throw std::invalid_argument("unknown classical mode '" + s + "'");
}

QuantumMode parse_quantum_mode(const std::string &s) {
    if (s == "oracle_state" || s == "oracle" || s == "exact") {
        return QuantumMode::kOracleState;
    }
    if (s == "embezzle") {
        return QuantumMode::kEmbezzle;
    }
    throw std::invalid_argument("unknown quantum mode '" + s + "'");
}

namespace {

Rng trial_rng(std::uint64_t seed, std::uint64_t trial, std::uint32_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32), tag};
    return Rng(seq);
}

double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw; falls back to the last positive entry on roundoff.
std::size_t draw(std::span<const double> p, Rng &rng) {
    double u = uniform01(rng);
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < p.size(); k++) {
        if (p[k] > 0.0) {
            acc += p[k];
            last = k;
            if (u < acc) {
                return k;
            }
        }
    }
    return last;
}

std::vector<double> normalized(std::vector<double> v) {
    double t = stable_sum(v);
    if (!(t > 1e-15)) {
        return {};
    }
    for (double &x : v) {
        x /= t;
    }
    return v;
}

double tv(const std::vector<double> &p, const std::vector<double> &q) {
    std::vector<double> d(p.size());
    for (std::size_t k = 0; k < p.size(); k++) {
        d[k] = std::abs(p[k] - q[k]);
    }
    return 0.5 * stable_sum(d);
}

bool wins_on_C(const Game &g, const CoordinateSplit &split, std::size_t xc, std::size_t yc, std::size_t ac,
               std::size_t bc) {
    const int c = static_cast<int>(split.C.size());
    for (int p = 0; p < c; p++) {
        if (!g.win(RepeatedGame::digit(xc, p, c, g.x_size), RepeatedGame::digit(yc, p, c, g.y_size),
                   RepeatedGame::digit(ac, p, c, g.a_size), RepeatedGame::digit(bc, p, c, g.b_size))) {
            return false;
        }
    }
    return true;
}

std::vector<int> resolve_C(const ReductionConfig &cfg) {
    if (!cfg.auto_C) {
        return cfg.C;
    }
    auto joint = born_joint(cfg.game, cfg.n, cfg.strategy);
    return choose_C(joint, cfg.game, cfg.n, cfg.eps, cfg.n - 1).C;
}

}  // namespace

SingleShotStrategy::SingleShotStrategy(const ReductionConfig &cfg)
    : cfg_(cfg), bundle_(build_bundle(cfg.game, cfg.n, cfg.strategy, resolve_C(cfg))) {
    if (!cfg_.fully_exact() && cfg_.trials < 1) {
        throw std::invalid_argument("reduction: Monte Carlo modes need trials >= 1");
    }
    cfg_.C = bundle_.split.C;
    cfg_.auto_C = false;
    const auto &g = cfg_.game;
    const auto &split = bundle_.split;
    for (std::size_t pos = 0; pos < bundle_.coords.size(); pos++) {
        const auto &cb = bundle_.coords[pos];
        const std::size_t R = r_size(static_cast<int>(pos));
        // Unnormalized P(r, W_C | x_i, y_i).
        std::vector<std::vector<double>> mass(g.x_size * g.y_size, std::vector<double>(R, 0.0));
        for (int x = 0; x < g.x_size; x++) {
            for (int y = 0; y < g.y_size; y++) {
                if (g.mu_at(x, y) == 0.0) {
                    continue;
                }
                for (std::size_t r = 0; r < R; r++) {
                    auto dr = decode(static_cast<int>(pos), r);
                    const auto &w = cb.omegas[dr.w];
                    if (!wins_on_C(g, split, w.xc, w.yc, dr.ac, dr.bc)) {
                        continue;
                    }
                    mass[x * g.y_size + y][r] = w.prob * bundle_.entry(static_cast<int>(pos), dr.w, x, y, dr.ac, dr.bc).state.weight;
                }
            }
        }
        std::vector<std::vector<double>> joint(g.x_size * g.y_size), alice(g.x_size), bob(g.y_size);
        for (int x = 0; x < g.x_size; x++) {
            std::vector<double> acc(R, 0.0);
            for (int y = 0; y < g.y_size; y++) {
                for (std::size_t r = 0; r < R; r++) {
                    acc[r] += g.mu_at(x, y) * mass[x * g.y_size + y][r];
                }
                joint[x * g.y_size + y] = normalized(mass[x * g.y_size + y]);
            }
            alice[x] = normalized(acc);
        }
        for (int y = 0; y < g.y_size; y++) {
            std::vector<double> acc(R, 0.0);
            for (int x = 0; x < g.x_size; x++) {
                for (std::size_t r = 0; r < R; r++) {
                    acc[r] += g.mu_at(x, y) * mass[x * g.y_size + y][r];
                }
            }
            bob[y] = normalized(acc);
        }
        joint_.push_back(std::move(joint));
        alice_.push_back(std::move(alice));
        bob_.push_back(std::move(bob));
    }
}

std::size_t SingleShotStrategy::r_size(int pos) const {
    return bundle_.coords[pos].omegas.size() * bundle_.num_ac * bundle_.num_bc;
}

SingleShotStrategy::Decoded SingleShotStrategy::decode(int, std::size_t r) const {
    return {r / (bundle_.num_ac * bundle_.num_bc), (r / bundle_.num_bc) % bundle_.num_ac, r % bundle_.num_bc};
}

const std::vector<double> &SingleShotStrategy::joint_law(int pos, int x, int y) const {
    return joint_[pos][x * cfg_.game.y_size + y];
}
const std::vector<double> &SingleShotStrategy::alice_law(int pos, int x) const {
    return alice_[pos][x];
}
const std::vector<double> &SingleShotStrategy::bob_law(int pos, int y) const {
    return bob_[pos][y];
}

double SingleShotStrategy::law_skew(int pos) const {
    const auto &g = cfg_.game;
    double acc = 0.0;
    for (int x = 0; x < g.x_size; x++) {
        for (int y = 0; y < g.y_size; y++) {
            const auto &j = joint_law(pos, x, y);
            if (g.mu_at(x, y) == 0.0 || j.empty()) {
                continue;
            }
            double ta = alice_law(pos, x).empty() ? 1.0 : tv(alice_law(pos, x), j);
            double tb = bob_law(pos, y).empty() ? 1.0 : tv(bob_law(pos, y), j);
            acc += g.mu_at(x, y) * std::max(ta, tb);
        }
    }
    return acc;
}

std::vector<double> SingleShotStrategy::answer_distribution(int pos, int x, int y, std::size_t ra, std::size_t rb,
                                                            double *err, bool *absent) const {
    Key key{pos, x, y, ra, rb};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = dist_cache_.find(key);
        if (it != dist_cache_.end()) {
            *err = it->second.second;
            *absent = it->second.first.empty();
            return it->second.first;
        }
    }
    const auto &g = cfg_.game;
    const int d = bundle_.strategy.d();
    auto da = decode(pos, ra), db = decode(pos, rb);
    const auto &ea = bundle_.entry(pos, da.w, x, y, da.ac, da.bc);
    const auto &eb = bundle_.entry(pos, db.w, x, y, db.ac, db.bc);
    std::vector<double> dist;
    double e = 0.0;
    const std::size_t na = ea.alice_fine.size(), nb = eb.bob_fine.size();
    if (cfg_.quantum == QuantumMode::kOracleState) {
        if (ea.state.present) {
            CMatrix pm = unflatten(ea.state.psi, d, d);
            for (std::size_t a = 0; a < na; a++) {
                for (std::size_t b = 0; b < nb; b++) {
                    dist.push_back(std::max(0.0, born_probability(pm, ea.alice_fine[a], eb.bob_fine[b])));
                }
            }
        }
    } else if (ea.state_x.present && eb.state_y.present) {
        auto iso_for = [&](int side, std::size_t r, const CVector &own) {
            std::tuple<int, int, std::size_t, int> k{side, pos, r, side == 0 ? x : y};
            {
                std::lock_guard<std::mutex> lock(mu_);
                auto it = iso_cache_.find(k);
                if (it != iso_cache_.end()) {
                    return it->second;
                }
            }
            auto iso = std::make_shared<AlignmentIsometry>(qcs_isometry(PureState(own), cfg_.d_prime, cfg_.alpha));
            std::lock_guard<std::mutex> lock(mu_);
            iso_cache_.emplace(k, iso);
            return iso;
        };
        auto ia = iso_for(0, ra, ea.state_x.psi);
        auto ib = iso_for(1, rb, eb.state_y.psi);
        std::optional<PureState> ref;
        if (ea.state.present) {
            ref = PureState(ea.state.psi);
        }
        auto q = qcs_execute(*ia, *ib, d, ref);
        e = q.err;
        for (std::size_t a = 0; a < na; a++) {
            for (std::size_t b = 0; b < nb; b++) {
                CMatrix op = tensor(ea.alice_fine[a], eb.bob_fine[b]);
                dist.push_back(std::max(0.0, (op * q.produced_target).trace().real()));
            }
        }
    }
    if (!dist.empty()) {
        dist = normalized(dist);
    }
    (void)g;
    std::lock_guard<std::mutex> lock(mu_);
    dist_cache_.emplace(key, std::make_pair(dist, e));
    *err = e;
    *absent = dist.empty();
    return dist;
}

TrialOutcome SingleShotStrategy::play(int x, int y, std::uint64_t trial_id) const {
    const auto &g = cfg_.game;
    TrialOutcome out;
    out.x = x;
    out.y = y;
    Rng shared = trial_rng(cfg_.seed, trial_id, 1);
    const int m = bundle_.split.m();
    out.pos = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(uniform01(shared) * m), m - 1));
    const int pos = out.pos;

    std::size_t ra = 0, rb = 0;
    const auto &jl = joint_law(pos, x, y);
    switch (cfg_.classical) {
        case ClassicalMode::kExactConditional:
            if (jl.empty()) {
                out.sampling_failed = true;
            } else {
                ra = rb = draw(jl, shared);
            }
            break;
        case ClassicalMode::kJoint:
        case ClassicalMode::kHolenstein: {
            const auto &pa = cfg_.classical == ClassicalMode::kJoint ? jl : alice_law(pos, x);
            const auto &pb = cfg_.classical == ClassicalMode::kJoint ? jl : bob_law(pos, y);
            if (pa.empty() || pb.empty()) {
                out.sampling_failed = true;
                break;
            }
            SharedRandomStream stream(cfg_.seed, trial_id, r_size(pos));
            auto cs = classical_corr_sample(pa, pb, stream);
            out.sampling_failed = cs.failed;
            out.agreed = cs.agreed;
            ra = cs.p_out;
            rb = cs.q_out;
            break;
        }
    }
    if (out.sampling_failed) {
        out.agreed = false;
        out.win = g.win(x, y, 0, 0);
        return out;
    }
    double err = 0.0;
    bool absent = false;
    auto dist = answer_distribution(pos, x, y, ra, rb, &err, &absent);
    if (cfg_.quantum == QuantumMode::kEmbezzle && !absent) {
        out.emb_err = err;
        out.has_emb_err = true;
    }
    if (absent) {
        out.state_absent = true;
        out.win = g.win(x, y, 0, 0);
        return out;
    }
    Rng nature = trial_rng(cfg_.seed, trial_id, 2);
    std::size_t k = draw(dist, nature);
    const int nb = g.b_size + 1;
    int a = static_cast<int>(k / nb), b = static_cast<int>(k % nb);
    // The last outcome on each side is the null outcome, which loses.
    out.a = a;
    out.b = b;
    out.win = a < g.a_size && b < g.b_size && g.win(x, y, a, b);
    return out;
}

double SingleShotStrategy::exact_win(int pos) const {
    const auto &g = cfg_.game;
    const int d = bundle_.strategy.d();
    std::vector<double> terms;
    for (int x = 0; x < g.x_size; x++) {
        for (int y = 0; y < g.y_size; y++) {
            const double q = g.mu_at(x, y);
            const auto &jl = joint_law(pos, x, y);
            if (q == 0.0 || jl.empty()) {
                continue;
            }
            for (std::size_t r = 0; r < jl.size(); r++) {
                if (jl[r] == 0.0) {
                    continue;
                }
                auto dr = decode(pos, r);
                const auto &e = bundle_.entry(pos, dr.w, x, y, dr.ac, dr.bc);
                if (!e.state.present) {
                    continue;
                }
                CMatrix pm = unflatten(e.state.psi, d, d);
                for (int a = 0; a < g.a_size; a++) {
                    for (int b = 0; b < g.b_size; b++) {
                        if (g.win(x, y, a, b)) {
                            terms.push_back(q * jl[r] * born_probability(pm, e.alice_fine[a], e.bob_fine[b]));
                        }
                    }
                }
            }
        }
    }
    return std::clamp(stable_sum(terms), 0.0, 1.0);
}

SingleShotStrategy build_single_shot(const ReductionConfig &cfg) {
    return SingleShotStrategy(cfg);
}

namespace {

struct OracleNumbers {
    double p_cond;
    double skew;
    double p_tilde;
};

// Brute-force reading of P(W_i | .) off the extended joint, independent of the bundle.
OracleNumbers oracle_numbers(const Game &g, const FiniteDistribution &joint, const CoordinateSplit &split, int i) {
    std::vector<std::string> names;
    for (int k : split.rest) {
        if (k != i) {
            names.push_back(d_name(k));
            names.push_back(m_name(k));
        }
    }
    auto add = [&](const char *p, int k) { names.push_back(p + std::to_string(k + 1)); };
    for (int k : split.C) add("X", k);
    for (int k : split.C) add("Y", k);
    for (int k : split.C) add("A", k);
    for (int k : split.C) add("B", k);
    add("X", i);
    add("Y", i);
    add("A", i);
    add("B", i);
    auto t = marginal(joint, std::span<const std::string>(names));
    const int c = static_cast<int>(split.C.size());
    const int base = static_cast<int>(names.size()) - 4 - 4 * c;
    const std::size_t nxy = static_cast<std::size_t>(g.x_size) * g.y_size;
    const std::size_t tail = nxy * g.a_size * g.b_size;
    const std::size_t R = t.size() / tail;
    std::vector<double> mass(R * nxy, 0.0), win(R * nxy, 0.0);
    for (std::size_t k = 0; k < t.size(); k++) {
        double w = t.weight(k);
        if (w == 0.0) {
            continue;
        }
        bool wc = true;
        for (int p = 0; p < c && wc; p++) {
            wc = g.win(t.value(k, base + p), t.value(k, base + c + p), t.value(k, base + 2 * c + p),
                       t.value(k, base + 3 * c + p));
        }
        if (!wc) {
            continue;
        }
        int x = t.value(k, base + 4 * c), y = t.value(k, base + 4 * c + 1);
        int a = t.value(k, base + 4 * c + 2), b = t.value(k, base + 4 * c + 3);
        std::size_t cell = (k / tail) * nxy + static_cast<std::size_t>(x) * g.y_size + y;
        mass[cell] += w;
        if (g.win(x, y, a, b)) {
            win[cell] += w;
        }
    }
    std::vector<double> mxy(nxy, 0.0), wxy(nxy, 0.0);
    std::vector<double> pt_terms;
    for (std::size_t xy = 0; xy < nxy; xy++) {
        for (std::size_t r = 0; r < R; r++) {
            mxy[xy] += mass[r * nxy + xy];
            wxy[xy] += win[r * nxy + xy];
        }
    }
    double total = stable_sum(mxy), wtotal = stable_sum(wxy);
    std::vector<double> skew_terms;
    for (std::size_t xy = 0; xy < nxy; xy++) {
        if (mxy[xy] <= 1e-15) {
            continue;
        }
        double pw = wxy[xy] / mxy[xy];
        double q = g.mu[xy];
        skew_terms.push_back((q - mxy[xy] / total) * pw);
        pt_terms.push_back(q * pw);
    }
    return {wtotal / total, stable_sum(skew_terms), stable_sum(pt_terms)};
}

}  // namespace

ReductionReport run_reduction(const ReductionConfig &cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SingleShotStrategy ss(cfg);
    const auto &g = cfg.game;
    const auto &split = ss.bundle().split;
    ReductionReport rep;
    rep.game = g.name;
    rep.strategy_id = cfg.strategy_id;
    rep.n = cfg.n;
    rep.C = split.C;
    rep.mode_classical = to_string(cfg.classical);
    rep.mode_quantum = to_string(cfg.quantum);
    rep.d_prime = cfg.quantum == QuantumMode::kEmbezzle ? cfg.d_prime : 0;
    rep.alpha = cfg.quantum == QuantumMode::kEmbezzle ? cfg.alpha : 0.0;
    rep.seed = cfg.seed;
    rep.exact = cfg.fully_exact();
    rep.trials = rep.exact ? 0 : cfg.trials;
    rep.workers = cfg.workers;
    rep.eps = cfg.eps;

    auto joint = extended_joint(g, cfg.n, cfg.strategy, split);
    {
        auto born = born_joint(g, cfg.n, cfg.strategy);
        rep.p_wc = probability(born, win_set(g, cfg.n, split.C, born));
    }
    const int m = split.m();
    for (int pos = 0; pos < m; pos++) {
        CoordinateResult cr;
        cr.coord = split.rest[pos];
        auto on = oracle_numbers(g, joint, split, cr.coord);
        cr.p_cond = on.p_cond;
        cr.question_skew = on.skew;
        cr.oracle_p_tilde = on.p_tilde;
        cr.law_skew = ss.law_skew(pos);
        rep.coords.push_back(cr);
    }

    if (rep.exact) {
        for (int pos = 0; pos < m; pos++) {
            auto &cr = rep.coords[pos];
            cr.p_tilde = ss.exact_win(pos);
            rep.max_oracle_gap = std::max(rep.max_oracle_gap, std::abs(cr.p_tilde - cr.oracle_p_tilde));
        }
    } else {
        std::vector<TrialOutcome> outcomes(cfg.trials);
        auto mu = g.mu_distribution();
        auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t t = lo; t < hi; t++) {
                Rng referee = trial_rng(cfg.seed, t, 0);
                std::size_t xy = draw(mu.weights(), referee);
                outcomes[t] = ss.play(static_cast<int>(xy / g.y_size), static_cast<int>(xy % g.y_size), t);
            }
        };
        const int nw = std::max(1, cfg.workers);
        if (nw == 1) {
            worker(0, cfg.trials);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < nw; w++) {
                pool.emplace_back(worker, cfg.trials * w / nw, cfg.trials * (w + 1) / nw);
            }
            for (auto &th : pool) {
                th.join();
            }
        }
        std::vector<std::uint64_t> wins(m, 0), count(m, 0);
        std::vector<double> errs;
        for (const auto &o : outcomes) {
            count[o.pos]++;
            wins[o.pos] += o.win ? 1 : 0;
            rep.sampling_failures += o.sampling_failed ? 1 : 0;
            rep.disagreements += (!o.sampling_failed && !o.agreed) ? 1 : 0;
            rep.absent_states += o.state_absent ? 1 : 0;
            if (o.has_emb_err) {
                errs.push_back(o.emb_err);
                rep.emb_err_max = std::max(rep.emb_err_max, o.emb_err);
            }
        }
        double var = 0.0;
        for (int pos = 0; pos < m; pos++) {
            auto &cr = rep.coords[pos];
            cr.trials = count[pos];
            if (count[pos] > 0) {
                double p = static_cast<double>(wins[pos]) / static_cast<double>(count[pos]);
                cr.p_tilde = p;
                cr.p_tilde_stderr = std::sqrt(p * (1.0 - p) / static_cast<double>(count[pos]));
                var += cr.p_tilde_stderr * cr.p_tilde_stderr;
            }
        }
        rep.stderr_ = std::sqrt(var) / m;
        const double T = static_cast<double>(cfg.trials);
        rep.disagreement_rate = static_cast<double>(rep.disagreements) / T;
        rep.failure_rate = static_cast<double>(rep.sampling_failures) / T;
        rep.absent_rate = static_cast<double>(rep.absent_states) / T;
        rep.emb_err_count = errs.size();
        rep.emb_err_mean = errs.empty() ? 0.0 : stable_sum(errs) / static_cast<double>(errs.size());
    }

    std::vector<double> pt, pc, qs, ls;
    for (auto &cr : rep.coords) {
        cr.residual = std::abs(cr.p_tilde - cr.p_cond);
        pt.push_back(cr.p_tilde);
        pc.push_back(cr.p_cond);
        qs.push_back(cr.question_skew);
        ls.push_back(cr.law_skew);
    }
    rep.avg_p_tilde = stable_sum(pt) / m;
    rep.avg_p_cond = stable_sum(pc) / m;
    rep.avg_question_skew = stable_sum(qs) / m;
    rep.avg_law_skew = stable_sum(ls) / m;
    rep.avg_residual = std::abs(rep.avg_p_tilde - rep.avg_p_cond);
    rep.corrected_residual = std::abs(rep.avg_p_tilde - rep.avg_question_skew - rep.avg_p_cond);
    if (rep.exact) {
        rep.error_budget = std::abs(rep.avg_question_skew);
    } else {
        rep.error_budget = rep.emb_err_mean + rep.disagreement_rate + rep.failure_rate + rep.absent_rate +
                           (cfg.classical == ClassicalMode::kHolenstein ? rep.avg_law_skew : 0.0) +
                           std::abs(rep.avg_question_skew) + 3.0 * rep.stderr_;
    }
    rep.threshold_met = rep.avg_p_cond >= 1.0 - cfg.eps / 2.0;
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

BoundCompare main_bound_compare(const ReductionReport &report, double eps) {
    BoundCompare out;
    out.margin = report.avg_p_tilde - report.avg_p_cond;
    out.budget = std::max(report.error_budget, report.exact ? 1e-8 : 0.0);
    out.pass_threshold = out.margin >= -out.budget;
    out.within_eps_quarter = out.margin >= -eps / 4.0;
    return out;
}

std::string ReductionReport::to_json() const {
    using nlohmann::json;
    json j;
    std::vector<int> c1;
    for (int k : C) {
        c1.push_back(k + 1);
    }
    j["version"] = PARREP_VERSION;
    j["config"] = {{"game", game},         {"strategy", strategy_id}, {"n", n},
                   {"C", c1},              {"mode_classical", mode_classical},
                   {"mode_quantum", mode_quantum},
                   {"d_prime", d_prime},   {"alpha", alpha},          {"seed", seed},
                   {"trials", trials},     {"workers", workers},      {"eps", eps}};
    json rows = json::array();
    for (const auto &cr : coords) {
        rows.push_back({{"i", cr.coord + 1},
                        {"p_tilde", cr.p_tilde},
                        {"p_tilde_stderr", cr.p_tilde_stderr},
                        {"p_cond", cr.p_cond},
                        {"residual", cr.residual},
                        {"question_skew", cr.question_skew},
                        {"oracle_p_tilde", cr.oracle_p_tilde},
                        {"law_skew", cr.law_skew},
                        {"trials", cr.trials}});
    }
    j["coords"] = rows;
    j["exact"] = exact;
    j["p_wc"] = p_wc;
    j["avg_p_tilde"] = avg_p_tilde;
    j["avg_p_cond"] = avg_p_cond;
    j["avg_residual"] = avg_residual;
    j["avg_question_skew"] = avg_question_skew;
    j["corrected_residual"] = corrected_residual;
    j["max_oracle_gap"] = max_oracle_gap;
    j["stderr"] = stderr_;
    j["sampling_failures"] = sampling_failures;
    j["disagreements"] = disagreements;
    j["absent_states"] = absent_states;
    j["disagreement_rate"] = disagreement_rate;
    j["failure_rate"] = failure_rate;
    j["absent_rate"] = absent_rate;
    j["avg_law_skew"] = avg_law_skew;
    j["emb_err"] = {{"mean", emb_err_mean}, {"max", emb_err_max}, {"count", emb_err_count}};
    j["error_budget"] = error_budget;
    j["threshold_met"] = threshold_met;
    j["runtime_seconds"] = runtime_seconds;
    return j.dump(2);
}

std::string ReductionReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "i,p_tilde,p_tilde_stderr,p_cond,residual,question_skew,oracle_p_tilde,law_skew,trials\n";
    for (const auto &cr : coords) {
        os << cr.coord + 1 << "," << cr.p_tilde << "," << cr.p_tilde_stderr << "," << cr.p_cond << "," << cr.residual
           << "," << cr.question_skew << "," << cr.oracle_p_tilde << "," << cr.law_skew << "," << cr.trials << "\n";
    }
    return os.str();
}

}  // namespace parrep
