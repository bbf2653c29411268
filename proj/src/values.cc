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

#include "parrep/values.h"

#include <cmath>
#include <stdexcept>

namespace parrep {

ClassicalResult classical_optimum(const Game &g, int n) {
    RepeatedGame rg(g, n);
    const std::size_t nx = rg.num_x(), ny = rg.num_y(), na = rg.num_a(), nb = rg.num_b();
    double log_count = static_cast<double>(nx) * std::log10(static_cast<double>(na)) +
                       static_cast<double>(ny) * std::log10(static_cast<double>(nb));
    if (log_count > std::log10(kMaxClassicalStrategies) + 1e-12) {
        throw std::length_error("classical_value: strategy space exceeds 1e8 pairs");
    }
    // Flattened per-tuple predicate and mu weights.
    std::vector<std::uint8_t> win(nx * ny * na * nb);
    std::vector<double> mu(nx * ny);
    for (std::size_t x = 0; x < nx; x++) {
        for (std::size_t y = 0; y < ny; y++) {
            mu[x * ny + y] = rg.mu(x, y);
            for (std::size_t a = 0; a < na; a++) {
                for (std::size_t b = 0; b < nb; b++) {
                    win[((x * ny + y) * na + a) * nb + b] = rg.win(x, y, a, b) ? 1 : 0;
                }
            }
        }
    }

    std::vector<std::size_t> f(nx, 0), best_f, best_h;
    std::vector<std::size_t> h(ny, 0);
    double best = -1.0;
    while (true) {
        double total = 0.0;
        for (std::size_t y = 0; y < ny; y++) {
            double top = -1.0;
            for (std::size_t b = 0; b < nb; b++) {
                double v = 0.0;
                for (std::size_t x = 0; x < nx; x++) {
                    if (win[((x * ny + y) * na + f[x]) * nb + b]) {
                        v += mu[x * ny + y];
                    }
                }
                if (v > top) {
                    top = v;
                    h[y] = b;
                }
            }
            total += top;
        }
        if (total > best + 1e-15) {
            best = total;
            best_f = f;
            best_h = h;
        }
        // Odometer over Alice's answer functions.
        std::size_t k = 0;
        while (k < nx && ++f[k] == na) {
            f[k] = 0;
            k++;
        }
        if (k == nx) {
            break;
        }
    }
    DeterministicStrategy s;
    s.n = n;
    s.alice = best_f;
    s.bob = best_h;
    return {std::min(best, 1.0), std::move(s)};
}

double classical_value(const Game &g, int n) {
    return classical_optimum(g, n).value;
}

CMatrix bell_operator(const Game &g, const POVMFamily &alice, const POVMFamily &bob) {
    require_valid(g);
    if (alice.num_questions() != static_cast<std::size_t>(g.x_size) ||
        alice.num_answers() != static_cast<std::size_t>(g.a_size) ||
        bob.num_questions() != static_cast<std::size_t>(g.y_size) ||
        bob.num_answers() != static_cast<std::size_t>(g.b_size)) {
        throw std::invalid_argument("bell_operator: POVMs do not match the game");
    }
    const int da = alice.dim(), db = bob.dim();
    CMatrix w = CMatrix::Zero(static_cast<Eigen::Index>(da) * db, static_cast<Eigen::Index>(da) * db);
    for (int x = 0; x < g.x_size; x++) {
        for (int y = 0; y < g.y_size; y++) {
            double q = g.mu_at(x, y);
            if (q == 0.0) {
                continue;
            }
            for (int a = 0; a < g.a_size; a++) {
                CMatrix bsum = CMatrix::Zero(db, db);
                bool any = false;
                for (int b = 0; b < g.b_size; b++) {
                    if (g.win(x, y, a, b)) {
                        bsum += bob.effect(y, b);
                        any = true;
                    }
                }
                if (any) {
                    w += q * tensor(alice.effect(x, a), bsum);
                }
            }
        }
    }
    return 0.5 * (w + w.adjoint());
}

namespace {

CMatrix positive_projector(const CMatrix &m) {
    auto eig = hermitian_eigen(0.5 * (m + m.adjoint()));
    CMatrix p = CMatrix::Zero(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < eig.values.size(); k++) {
        if (eig.values[k] > 1e-13) {
            p += projector(eig.vectors.col(k));
        }
    }
    return p;
}

using Effects = std::vector<std::vector<CMatrix>>;

double objective(const Effects &eff, const Effects &ops) {
    double v = 0.0;
    for (std::size_t q = 0; q < eff.size(); q++) {
        for (std::size_t a = 0; a < eff[q].size(); a++) {
            v += (eff[q][a] * ops[q][a]).trace().real();
        }
    }
    return v;
}

// Optimal (binary) or pairwise-improved (larger alphabets) effects against
// fixed effective operators.
void improve_measurement(Effects &eff, const Effects &ops) {
    for (std::size_t q = 0; q < eff.size(); q++) {
        auto &e = eff[q];
        const auto &o = ops[q];
        const auto id = CMatrix::Identity(e[0].rows(), e[0].cols());
        if (e.size() == 1) {
            continue;
        }
        if (e.size() == 2) {
            e[0] = positive_projector(o[0] - o[1]);
            e[1] = id - e[0];
            continue;
        }
        for (int sweep = 0; sweep < 100; sweep++) {
            double gain = 0.0;
            for (std::size_t a = 0; a < e.size(); a++) {
                for (std::size_t b = a + 1; b < e.size(); b++) {
                    CMatrix p = e[a] + e[b];
                    CMatrix sp = mat_sqrt(0.5 * (p + p.adjoint()));
                    double before = (e[a] * o[a] + e[b] * o[b]).trace().real();
                    CMatrix pi = positive_projector(sp * (o[a] - o[b]) * sp);
                    CMatrix na = sp * pi * sp;
                    CMatrix nb = p - na;
                    double after = (na * o[a] + nb * o[b]).trace().real();
                    if (after > before) {
                        e[a] = 0.5 * (na + na.adjoint());
                        e[b] = 0.5 * (nb + nb.adjoint());
                        gain += after - before;
                    }
                }
            }
            if (gain < 1e-14) {
                break;
            }
        }
    }
}

}  // namespace

SeesawResult seesaw(const Game &g, const SeesawConfig &cfg) {
    require_valid(g);
    if (cfg.d < 1 || !(cfg.convergence_tol > 0.0) || cfg.max_iters < 1) {
        throw std::invalid_argument("seesaw: need d >= 1, tol > 0, max_iters >= 1");
    }
    const int d = cfg.d;
    Rng rng(cfg.seed);
    auto init = random_strategy(rng, g, 1, d);
    Effects alice = init.alice().effects();
    Effects bob = init.bob().effects();
    CMatrix psi = init.psi_matrix();

    auto alice_ops = [&]() {
        Effects ops(g.x_size, std::vector<CMatrix>(g.a_size, CMatrix::Zero(d, d)));
        for (int x = 0; x < g.x_size; x++) {
            for (int y = 0; y < g.y_size; y++) {
                double q = g.mu_at(x, y);
                if (q == 0.0) {
                    continue;
                }
                for (int b = 0; b < g.b_size; b++) {
                    CMatrix red = psi * bob[y][b].transpose() * psi.adjoint();
                    for (int a = 0; a < g.a_size; a++) {
                        if (g.win(x, y, a, b)) {
                            ops[x][a] += q * red;
                        }
                    }
                }
            }
        }
        return ops;
    };
    auto bob_ops = [&]() {
        Effects ops(g.y_size, std::vector<CMatrix>(g.b_size, CMatrix::Zero(d, d)));
        for (int x = 0; x < g.x_size; x++) {
            for (int a = 0; a < g.a_size; a++) {
                CMatrix red = (psi.adjoint() * alice[x][a] * psi).conjugate();
                for (int y = 0; y < g.y_size; y++) {
                    double q = g.mu_at(x, y);
                    if (q == 0.0) {
                        continue;
                    }
                    for (int b = 0; b < g.b_size; b++) {
                        if (g.win(x, y, a, b)) {
                            ops[y][b] += q * red;
                        }
                    }
                }
            }
        }
        return ops;
    };
    auto current = [&]() {
        return objective(alice, alice_ops());
    };

    SeesawResult res{0.0, init, 0, false, {}};
    double value = current();
    res.trace.push_back(value);
    auto record = [&](double v) {
        if (v < value - 1e-10) {
            throw std::logic_error("seesaw objective decreased from " + std::to_string(value) + " to " +
                                   std::to_string(v));
        }
        value = std::max(value, v);
        res.trace.push_back(v);
    };
    for (int it = 1; it <= cfg.max_iters; it++) {
        double start = value;
        CMatrix w = bell_operator(g, POVMFamily(d, alice), POVMFamily(d, bob));
        auto eig = hermitian_eigen(w);
        psi = unflatten(eig.vectors.col(0), d, d);
        record(current());
        improve_measurement(alice, alice_ops());
        record(current());
        improve_measurement(bob, bob_ops());
        record(current());
        res.iterations = it;
        if (value - start < cfg.convergence_tol) {
            res.converged = true;
            break;
        }
    }
    EntangledStrategy out(1, PureState(flatten(psi)), POVMFamily(d, alice), POVMFamily(d, bob));
    res.value = win_probability(g, 1, out);
    res.strategy = std::move(out);
    return res;
}

BoundReport theorem1_bound(double epsilon, double s_bits, double n, double c, LogBase base) {
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        throw std::invalid_argument("theorem1_bound: epsilon must lie in (0, 1]");
    }
    if (!(n >= 2.0)) {
        throw std::invalid_argument("theorem1_bound: n must be >= 2");
    }
    if (!(s_bits >= 0.0) || !(c > 0.0)) {
        throw std::invalid_argument("theorem1_bound: s must be >= 0 and c > 0");
    }
    double lg = base == LogBase::kTwo ? std::log2(n) : std::log(n);
    double raw = c * s_bits * lg / (std::pow(epsilon, 17.0) * std::pow(n, 0.25));
    return {epsilon, s_bits, n, c, raw, raw >= 1.0 ? 1.0 : raw, raw >= 1.0};
}

}  // namespace parrep
