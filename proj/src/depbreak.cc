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

#include "parrep/depbreak.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "parrep/infotheory.h"

namespace parrep {

CoordinateSplit CoordinateSplit::make(int n, std::vector<int> C) {
    if (n < 1) {
        throw std::invalid_argument("coordinate split: n must be >= 1");
    }
    std::sort(C.begin(), C.end());
    if (std::adjacent_find(C.begin(), C.end()) != C.end()) {
        throw std::invalid_argument("coordinate split: C has repeated coordinates");
    }
    CoordinateSplit out;
    out.n = n;
    for (int k : C) {
        if (k < 0 || k >= n) {
            throw std::out_of_range("coordinate " + std::to_string(k + 1) + " outside [1, n]");
        }
    }
    out.C = C;
    for (int k = 0; k < n; k++) {
        if (!std::binary_search(C.begin(), C.end(), k)) {
            out.rest.push_back(k);
        }
    }
    if (out.rest.empty()) {
        throw std::invalid_argument("coordinate split: C must leave at least one coordinate");
    }
    return out;
}

int CoordinateSplit::rest_pos(int i) const {
    auto it = std::find(rest.begin(), rest.end(), i);
    return it == rest.end() ? -1 : static_cast<int>(it - rest.begin());
}

std::string d_name(int k) {
    return "D" + std::to_string(k + 1);
}

std::string m_name(int k) {
    return "M" + std::to_string(k + 1);
}

std::size_t sub_tuple(std::size_t tuple, const std::vector<int> &coords, int n, int base) {
    std::size_t out = 0;
    for (int k : coords) {
        out = out * static_cast<std::size_t>(base) + static_cast<std::size_t>(RepeatedGame::digit(tuple, k, n, base));
    }
    return out;
}

namespace {

std::size_t int_pow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    for (std::size_t k = 0; k < e; k++) {
        r *= b;
    }
    return r;
}

struct Marginals {
    std::vector<double> x, y;
};

Marginals question_marginals(const Game &g) {
    Marginals m{std::vector<double>(g.x_size, 0.0), std::vector<double>(g.y_size, 0.0)};
    for (int x = 0; x < g.x_size; x++) {
        for (int y = 0; y < g.y_size; y++) {
            m.x[x] += g.mu_at(x, y);
            m.y[y] += g.mu_at(x, y);
        }
    }
    return m;
}

// Law of one player's question at one coordinate given what Omega fixes there.
std::vector<double> coordinate_law(const Game &g, const Marginals &mg, Player side, Player fixed_by, int label) {
    const int qsize = side == Player::kAlice ? g.x_size : g.y_size;
    std::vector<double> law(qsize, 0.0);
    if (side == fixed_by) {
        law[label] = 1.0;
        return law;
    }
    if (side == Player::kAlice) {
        if (!(mg.y[label] > 0.0)) {
            throw ZeroProbabilityEvent("question law conditioned on y=" + std::to_string(label) + " is undefined");
        }
        for (int x = 0; x < g.x_size; x++) {
            law[x] = g.mu_at(x, label) / mg.y[label];
        }
    } else {
        if (!(mg.x[label] > 0.0)) {
            throw ZeroProbabilityEvent("question law conditioned on x=" + std::to_string(label) + " is undefined");
        }
        for (int y = 0; y < g.y_size; y++) {
            law[y] = g.mu_at(label, y) / mg.x[label];
        }
    }
    return law;
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

CMatrix hermitize(const CMatrix &m) {
    return 0.5 * (m + m.adjoint());
}

}  // namespace

FiniteDistribution extended_joint(const Game &g, int n, const EntangledStrategy &s, const CoordinateSplit &split) {
    if (split.n != n) {
        throw std::invalid_argument("extended_joint: split built for another n");
    }
    auto base = born_joint(g, n, s);
    const int m = split.m();
    const int L = std::max(g.x_size, g.y_size);
    std::vector<Variable> vars;
    for (int k : split.rest) {
        vars.push_back({d_name(k), 2});
    }
    for (int k : split.rest) {
        vars.push_back({m_name(k), L});
    }
    for (const auto &v : base.variables()) {
        vars.push_back(v);
    }
    const std::size_t total = assignment_count(vars);
    const std::size_t nd = std::size_t{1} << m;
    const std::size_t nm = int_pow(L, m);
    std::vector<double> w(total, 0.0);
    const double dir_weight = 1.0 / static_cast<double>(nd);
    for (std::size_t k = 0; k < base.size(); k++) {
        double p = base.weight(k);
        if (p == 0.0) {
            continue;
        }
        for (std::size_t dmask = 0; dmask < nd; dmask++) {
            std::size_t mt = 0;
            for (int pos = 0; pos < m; pos++) {
                int coord = split.rest[pos];
                bool bob = RepeatedGame::digit(dmask, pos, m, 2) == 1;
                int label = bob ? base.value(k, n + coord) : base.value(k, coord);
                mt = mt * L + label;
            }
            w[(dmask * nm + mt) * base.size() + k] = p * dir_weight;
        }
    }
    return FiniteDistribution::from_masses(std::move(vars), std::move(w));
}

std::vector<OmegaMinus> enumerate_omega_minus(const Game &g, const CoordinateSplit &split, int i) {
    auto mg = question_marginals(g);
    const int m = split.m();
    const int ipos = i < 0 ? -1 : split.rest_pos(i);
    if (i >= 0 && ipos < 0) {
        throw std::invalid_argument("coordinate " + std::to_string(i + 1) + " lies in C");
    }
    // Options per rest position: (dir, label, prob).
    struct Opt {
        int dir, label;
        double p;
    };
    std::vector<std::vector<Opt>> opts(m);
    for (int pos = 0; pos < m; pos++) {
        if (pos == ipos) {
            opts[pos].push_back({-1, -1, 1.0});
            continue;
        }
        for (int x = 0; x < g.x_size; x++) {
            if (mg.x[x] > 0.0) {
                opts[pos].push_back({0, x, 0.5 * mg.x[x]});
            }
        }
        for (int y = 0; y < g.y_size; y++) {
            if (mg.y[y] > 0.0) {
                opts[pos].push_back({1, y, 0.5 * mg.y[y]});
            }
        }
    }
    const int c = static_cast<int>(split.C.size());
    const std::size_t nxc = int_pow(g.x_size, c), nyc = int_pow(g.y_size, c);
    std::vector<OmegaMinus> out;
    std::vector<std::size_t> pick(m, 0);
    while (true) {
        OmegaMinus base;
        base.prob = 1.0;
        for (int pos = 0; pos < m; pos++) {
            const auto &o = opts[pos][pick[pos]];
            base.dir.push_back(o.dir);
            base.label.push_back(o.label);
            base.prob *= o.p;
        }
        for (std::size_t xc = 0; xc < nxc; xc++) {
            for (std::size_t yc = 0; yc < nyc; yc++) {
                double q = 1.0;
                for (int p = 0; p < c; p++) {
                    q *= g.mu_at(RepeatedGame::digit(xc, p, c, g.x_size), RepeatedGame::digit(yc, p, c, g.y_size));
                }
                if (q == 0.0) {
                    continue;
                }
                OmegaMinus w = base;
                w.xc = xc;
                w.yc = yc;
                w.prob *= q;
                out.push_back(std::move(w));
            }
        }
        int pos = m - 1;
        while (pos >= 0 && ++pick[pos] == opts[pos].size()) {
            pick[pos] = 0;
            pos--;
        }
        if (pos < 0) {
            break;
        }
    }
    return out;
}

std::vector<std::vector<CMatrix>> coarse_family(const Game &g, const EntangledStrategy &s, const CoordinateSplit &split,
                                                int i, const OmegaMinus &w, OmegaI wi, Player side) {
    const int n = split.n;
    auto mg = question_marginals(g);
    const bool alice = side == Player::kAlice;
    const int qsize = alice ? g.x_size : g.y_size;
    const int asize = alice ? g.a_size : g.b_size;
    const POVMFamily &fam = alice ? s.alice() : s.bob();
    const int d = fam.dim();
    const int c = static_cast<int>(split.C.size());

    std::vector<std::vector<double>> law(n);
    for (int p = 0; p < c; p++) {
        std::size_t tup = alice ? w.xc : w.yc;
        law[split.C[p]] = std::vector<double>(qsize, 0.0);
        law[split.C[p]][RepeatedGame::digit(tup, p, c, qsize)] = 1.0;
    }
    for (int pos = 0; pos < split.m(); pos++) {
        int k = split.rest[pos];
        if (k == i) {
            law[k] = coordinate_law(g, mg, side, wi.dir, wi.label);
        } else {
            law[k] = coordinate_law(g, mg, side, static_cast<Player>(w.dir[pos]), w.label[pos]);
        }
    }
    const std::size_t nac = int_pow(asize, c);
    const std::size_t nai = i >= 0 ? static_cast<std::size_t>(asize) : 1;
    std::vector<std::vector<CMatrix>> out(nac, std::vector<CMatrix>(nai, CMatrix::Zero(d, d)));
    for (std::size_t q = 0; q < fam.num_questions(); q++) {
        double wt = 1.0;
        for (int k = 0; k < n && wt > 0.0; k++) {
            wt *= law[k][RepeatedGame::digit(q, k, n, qsize)];
        }
        if (wt == 0.0) {
            continue;
        }
        for (std::size_t a = 0; a < fam.num_answers(); a++) {
            std::size_t ac = sub_tuple(a, split.C, n, asize);
            std::size_t ai = i >= 0 ? static_cast<std::size_t>(RepeatedGame::digit(a, i, n, asize)) : 0;
            out[ac][ai] += wt * fam.effect(q, a);
        }
    }
    for (auto &row : out) {
        for (auto &e : row) {
            e = hermitize(e);
        }
    }
    return out;
}

std::vector<CMatrix> coarse_povm(const Game &g, const EntangledStrategy &s, const CoordinateSplit &split, int i,
                                 const OmegaMinus &w, OmegaI wi, Player side) {
    auto fam = coarse_family(g, s, split, i, w, wi, side);
    std::vector<CMatrix> out;
    for (auto &row : fam) {
        CMatrix sum = CMatrix::Zero(row[0].rows(), row[0].cols());
        for (auto &e : row) {
            sum += e;
        }
        out.push_back(sum);
    }
    return out;
}

AlignedOperators aligned_operators(const CMatrix &coarse, const CMatrix &rho) {
    CMatrix sa = mat_sqrt(coarse);
    CMatrix u = polar_psd_factor(sa * mat_sqrt(rho));
    return {u * sa, u};
}

std::vector<CMatrix> fine_povm(const CMatrix &S, const std::vector<CMatrix> &fine) {
    const auto d = S.rows();
    CMatrix total = CMatrix::Zero(d, d);
    for (const auto &f : fine) {
        total += f;
    }
    if ((S.adjoint() * S - total).norm() > 1e-8) {
        throw std::invalid_argument("fine_povm: fine family does not sum to the coarse operator");
    }
    CMatrix sp = pinv(S, kAlignedPinvTol);
    std::vector<CMatrix> out;
    CMatrix null = CMatrix::Identity(d, d);
    for (const auto &f : fine) {
        CMatrix e = hermitize(sp.adjoint() * f * sp);
        null -= e;
        out.push_back(e);
    }
    out.push_back(hermitize(null));
    return out;
}

DepState dep_state(const CMatrix &S, const CMatrix &T, const PureState &psi) {
    const int d = static_cast<int>(S.rows());
    CMatrix p = unflatten(psi.amplitudes(), d, d);
    CMatrix v = S * p * T.transpose();
    DepState out;
    out.weight = v.squaredNorm();
    if (out.weight > 1e-12) {
        out.present = true;
        out.psi = flatten(v) / std::sqrt(out.weight);
    }
    return out;
}

std::size_t DepBreakBundle::entry_index(std::size_t w, int xi, int yi, std::size_t ac, std::size_t bc) const {
    return (((w * game.x_size + xi) * game.y_size + yi) * num_ac + ac) * num_bc + bc;
}

DepBreakBundle build_bundle(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C) {
    check_compatible(g, n, s);
    auto split = CoordinateSplit::make(n, C);
    auto sym = symmetrize(s);
    CMatrix pm = sym.psi_matrix();
    CMatrix rho_a = hermitize(pm * pm.adjoint());
    CMatrix rho_b = hermitize((pm.adjoint() * pm).conjugate());
    const int c = static_cast<int>(split.C.size());
    DepBreakBundle b{g, n, split, sym, rho_a, int_pow(g.a_size, c), int_pow(g.b_size, c), {}, 0.0, 0.0, 0.0};
    auto mg = question_marginals(g);
    const int d = sym.d();
    const CMatrix id = CMatrix::Identity(d, d);
    CMatrix sqrt_a = mat_sqrt(rho_a), sqrt_b = mat_sqrt(rho_b);

    auto align = [&](const CMatrix &coarse, const CMatrix &rho, const CMatrix &sqrt_rho) {
        auto ops = aligned_operators(coarse, rho);
        CMatrix sr = ops.S * sqrt_rho;
        double defect = (ops.S.adjoint() * ops.S - coarse).norm();
        defect = std::max(defect, hermitian_deviation(sr));
        defect = std::max(defect, -std::min(0.0, min_hermitian_eigenvalue(hermitize(sr))));
        b.max_alignment_defect = std::max(b.max_alignment_defect, defect);
        return ops.S;
    };
    auto completeness = [&](const std::vector<CMatrix> &fam) {
        CMatrix sum = CMatrix::Zero(d, d);
        for (const auto &e : fam) {
            sum += e;
        }
        b.max_coarse_completeness = std::max(b.max_coarse_completeness, (sum - id).norm());
    };
    auto sum_fine = [](const std::vector<CMatrix> &row) {
        CMatrix sum = CMatrix::Zero(row[0].rows(), row[0].cols());
        for (const auto &e : row) {
            sum += e;
        }
        return sum;
    };

    for (int i : split.rest) {
        CoordinateBundle cb;
        cb.i = i;
        cb.omegas = enumerate_omega_minus(g, split, i);
        cb.entries.resize(cb.omegas.size() * g.x_size * g.y_size * b.num_ac * b.num_bc);
        for (std::size_t wi = 0; wi < cb.omegas.size(); wi++) {
            const auto &w = cb.omegas[wi];
            // Alice: S for (omega_{-i}, x_i) with fine POVMs, and S for omega_i = (Bob, y_i).
            std::vector<std::vector<CMatrix>> s_x(g.x_size), fine_a(g.x_size * b.num_ac);
            std::vector<std::vector<CMatrix>> s_y(g.y_size), t_y(g.y_size), fine_b(g.y_size * b.num_bc);
            std::vector<std::vector<CMatrix>> t_x(g.x_size);
            for (int x = 0; x < g.x_size; x++) {
                if (!(mg.x[x] > 0.0)) {
                    continue;
                }
                auto fam = coarse_family(g, sym, split, i, w, {Player::kAlice, x}, Player::kAlice);
                std::vector<CMatrix> coarse;
                for (std::size_t ac = 0; ac < b.num_ac; ac++) {
                    coarse.push_back(sum_fine(fam[ac]));
                    CMatrix S = align(coarse.back(), rho_a, sqrt_a);
                    s_x[x].push_back(S);
                    fine_a[x * b.num_ac + ac] = fine_povm(S, fam[ac]);
                }
                completeness(coarse);
                auto tb = coarse_povm(g, sym, split, i, w, {Player::kAlice, x}, Player::kBob);
                completeness(tb);
                for (std::size_t bc = 0; bc < b.num_bc; bc++) {
                    t_x[x].push_back(align(tb[bc], rho_b, sqrt_b));
                }
            }
            for (int y = 0; y < g.y_size; y++) {
                if (!(mg.y[y] > 0.0)) {
                    continue;
                }
                auto fam = coarse_family(g, sym, split, i, w, {Player::kBob, y}, Player::kBob);
                std::vector<CMatrix> coarse;
                for (std::size_t bc = 0; bc < b.num_bc; bc++) {
                    coarse.push_back(sum_fine(fam[bc]));
                    CMatrix T = align(coarse.back(), rho_b, sqrt_b);
                    t_y[y].push_back(T);
                    fine_b[y * b.num_bc + bc] = fine_povm(T, fam[bc]);
                }
                completeness(coarse);
                auto sa = coarse_povm(g, sym, split, i, w, {Player::kBob, y}, Player::kAlice);
                completeness(sa);
                for (std::size_t ac = 0; ac < b.num_ac; ac++) {
                    s_y[y].push_back(align(sa[ac], rho_a, sqrt_a));
                }
            }
            for (int x = 0; x < g.x_size; x++) {
                for (int y = 0; y < g.y_size; y++) {
                    if (g.mu_at(x, y) == 0.0) {
                        continue;
                    }
                    for (std::size_t ac = 0; ac < b.num_ac; ac++) {
                        for (std::size_t bc = 0; bc < b.num_bc; bc++) {
                            auto &e = cb.entries[b.entry_index(wi, x, y, ac, bc)];
                            e.context_live = true;
                            e.state = dep_state(s_x[x][ac], t_y[y][bc], sym.psi());
                            e.state_x = dep_state(s_x[x][ac], t_x[x][bc], sym.psi());
                            e.state_y = dep_state(s_y[y][ac], t_y[y][bc], sym.psi());
                            e.alice_fine = fine_a[x * b.num_ac + ac];
                            e.bob_fine = fine_b[y * b.num_bc + bc];
                            if (e.state.present) {
                                CMatrix pm2 = unflatten(e.state.psi, d, d);
                                double na = born_probability(pm2, e.alice_fine.back(), id);
                                double nb = born_probability(pm2, id, e.bob_fine.back());
                                b.max_fine_null = std::max({b.max_fine_null, std::abs(na), std::abs(nb)});
                            }
                        }
                    }
                }
            }
        }
        b.coords.push_back(std::move(cb));
    }
    return b;
}

namespace {

// Brute-force conditional tables for one coordinate i, read off the joint.
struct OracleTable {
    FiniteDistribution table;
    int ipos;
};

std::vector<std::string> r_minus_names(const CoordinateSplit &split, int i, bool with_answers) {
    std::vector<std::string> names;
    for (int k : split.rest) {
        if (k != i) {
            names.push_back(d_name(k));
            names.push_back(m_name(k));
        }
    }
    for (int k : split.C) {
        names.push_back("X" + std::to_string(k + 1));
    }
    for (int k : split.C) {
        names.push_back("Y" + std::to_string(k + 1));
    }
    if (with_answers) {
        for (int k : split.C) {
            names.push_back("A" + std::to_string(k + 1));
        }
        for (int k : split.C) {
            names.push_back("B" + std::to_string(k + 1));
        }
    }
    return names;
}

void push_digits(std::vector<int> &v, std::size_t tuple, int len, int base) {
    for (int p = 0; p < len; p++) {
        v.push_back(RepeatedGame::digit(tuple, p, len, base));
    }
}

void push_omega(std::vector<int> &v, const CoordinateSplit &split, int i, const OmegaMinus &w) {
    for (int pos = 0; pos < split.m(); pos++) {
        if (split.rest[pos] != i) {
            v.push_back(w.dir[pos]);
            v.push_back(w.label[pos]);
        }
    }
}

}  // namespace

UsefulnessReport usefulness_check(const DepBreakBundle &bundle, const FiniteDistribution &joint) {
    const auto &g = bundle.game;
    const auto &split = bundle.split;
    const int c = static_cast<int>(split.C.size());
    const int d = bundle.strategy.d();
    UsefulnessReport rep;
    for (const auto &cb : bundle.coords) {
        const int i = cb.i;
        auto names = r_minus_names(split, i, false);
        std::string si = std::to_string(i + 1);
        names.push_back("X" + si);
        names.push_back("Y" + si);
        for (int k : split.C) {
            names.push_back("A" + std::to_string(k + 1));
        }
        for (int k : split.C) {
            names.push_back("B" + std::to_string(k + 1));
        }
        names.push_back("A" + si);
        names.push_back("B" + si);
        auto table = marginal(joint, std::span<const std::string>(names));

        for (std::size_t wi = 0; wi < cb.omegas.size(); wi++) {
            const auto &w = cb.omegas[wi];
            for (int x = 0; x < g.x_size; x++) {
                for (int y = 0; y < g.y_size; y++) {
                    if (g.mu_at(x, y) == 0.0) {
                        continue;
                    }
                    // Oracle masses P(omega_{-i}, x_i, y_i, a_C, b_C, a_i, b_i).
                    std::vector<double> mass(bundle.num_ac * bundle.num_bc * g.a_size * g.b_size);
                    for (std::size_t ac = 0; ac < bundle.num_ac; ac++) {
                        for (std::size_t bc = 0; bc < bundle.num_bc; bc++) {
                            for (int ai = 0; ai < g.a_size; ai++) {
                                for (int bi = 0; bi < g.b_size; bi++) {
                                    std::vector<int> v;
                                    push_omega(v, split, i, w);
                                    push_digits(v, w.xc, c, g.x_size);
                                    push_digits(v, w.yc, c, g.y_size);
                                    v.push_back(x);
                                    v.push_back(y);
                                    push_digits(v, ac, c, g.a_size);
                                    push_digits(v, bc, c, g.b_size);
                                    v.push_back(ai);
                                    v.push_back(bi);
                                    mass[((ac * bundle.num_bc + bc) * g.a_size + ai) * g.b_size + bi] =
                                        table.weight(table.encode(v));
                                }
                            }
                        }
                    }
                    double ctx_mass = stable_sum(mass);
                    if (ctx_mass <= 1e-15) {
                        continue;
                    }
                    rep.contexts++;
                    double wsum = 0.0;
                    const std::size_t nab = static_cast<std::size_t>(g.a_size) * g.b_size;
                    for (std::size_t ac = 0; ac < bundle.num_ac; ac++) {
                        for (std::size_t bc = 0; bc < bundle.num_bc; bc++) {
                            const auto &e = bundle.entry(bundle.split.rest_pos(i), wi, x, y, ac, bc);
                            std::span<const double> cell(&mass[(ac * bundle.num_bc + bc) * nab], nab);
                            double cell_mass = stable_sum(cell);
                            double oracle_w = cell_mass / ctx_mass;
                            wsum += e.state.weight;
                            ContextResidual row{i, wi, x, y, ac, bc, e.state.weight, oracle_w, 0.0};
                            rep.max_weight_residual = std::max(rep.max_weight_residual, std::abs(e.state.weight - oracle_w));
                            if (!e.state.present || cell_mass <= 1e-15) {
                                rep.absent_states++;
                                rep.rows.push_back(row);
                                continue;
                            }
                            CMatrix pm = unflatten(e.state.psi, d, d);
                            for (int ai = 0; ai < g.a_size; ai++) {
                                for (int bi = 0; bi < g.b_size; bi++) {
                                    double model = born_probability(pm, e.alice_fine[ai], e.bob_fine[bi]);
                                    double oracle = cell[ai * g.b_size + bi] / cell_mass;
                                    row.residual = std::max(row.residual, std::abs(model - oracle));
                                }
                            }
                            rep.max_residual = std::max(rep.max_residual, row.residual);
                            rep.rows.push_back(row);
                        }
                    }
                    rep.max_weight_sum_defect = std::max(rep.max_weight_sum_defect, std::abs(wsum - 1.0));
                }
            }
        }
    }
    rep.max_null_weight = bundle.max_fine_null;
    return rep;
}

double skew_delta(const Game &g, const CoordinateSplit &split, double p_wc) {
    if (!(p_wc > 0.0)) {
        throw ZeroProbabilityEvent("P(W_C) = 0");
    }
    double ans = std::log2(static_cast<double>(g.a_size) * g.b_size);
    double v = (std::log2(1.0 / p_wc) + static_cast<double>(split.C.size()) * ans) / split.m();
    return std::max(0.0, v);
}

namespace {

// TV between P_{X_i Y_i R | W_C} and P_{X_i Y_i} P_{R | Z, W_C}, Z one of X_i / Y_i.
double product_skew(const FiniteDistribution &joint, const FiniteDistribution &cond, const std::string &xn,
                    const std::string &yn, const std::vector<std::string> &rn, bool given_x) {
    std::vector<std::string> lhs_names{xn, yn};
    lhs_names.insert(lhs_names.end(), rn.begin(), rn.end());
    auto lhs = marginal(cond, std::span<const std::string>(lhs_names));
    auto pxy = marginal(joint, {xn, yn});
    const std::string &zn = given_x ? xn : yn;
    std::vector<std::string> zr{zn};
    zr.insert(zr.end(), rn.begin(), rn.end());
    auto pzr = marginal(cond, std::span<const std::string>(zr));
    auto pz = marginal(cond, {zn});
    const int ny = pxy.variables()[1].size;
    const std::size_t nr = lhs.size() / pxy.size();
    std::vector<double> diffs;
    diffs.reserve(lhs.size());
    for (std::size_t xy = 0; xy < pxy.size(); xy++) {
        int x = static_cast<int>(xy / ny), y = static_cast<int>(xy % ny);
        int z = given_x ? x : y;
        double pzv = pz.weight(z);
        for (std::size_t r = 0; r < nr; r++) {
            double q = pzv > 0.0 ? pxy.weight(xy) * pzr.weight(z * nr + r) / pzv : 0.0;
            diffs.push_back(std::abs(lhs.weight(xy * nr + r) - q));
        }
    }
    return std::min(1.0, 0.5 * stable_sum(diffs));
}

}  // namespace

SkewReport skew_distances(const Game &g, const FiniteDistribution &joint, const CoordinateSplit &split) {
    auto wc = win_set(g, split.n, split.C, joint);
    auto cond = condition(joint, wc);
    SkewReport rep;
    rep.p_wc = probability(joint, wc);
    rep.delta = skew_delta(g, split, rep.p_wc);
    for (int i : split.rest) {
        std::string si = std::to_string(i + 1);
        std::string xn = "X" + si, yn = "Y" + si;
        std::vector<std::string> ri{d_name(i), m_name(i), xn, yn};
        double t1 = tv_distance(marginal(cond, std::span<const std::string>(ri)),
                                marginal(joint, std::span<const std::string>(ri)));
        auto rn = r_minus_names(split, i, true);
        double t2 = product_skew(joint, cond, xn, yn, rn, true);
        double t3 = product_skew(joint, cond, xn, yn, rn, false);
        rep.coords.push_back(i);
        rep.item1.push_back(t1);
        rep.item2.push_back(t2);
        rep.item3.push_back(t3);
    }
    const double m = split.m();
    rep.avg1 = stable_sum(rep.item1) / m;
    rep.avg2 = stable_sum(rep.item2) / m;
    rep.avg3 = stable_sum(rep.item3) / m;
    auto ratio = [&](double avg) {
        if (rep.delta > 0.0) {
            return avg / std::sqrt(rep.delta);
        }
        return avg == 0.0 ? 0.0 : kInfinity;
    };
    rep.ratio1 = ratio(rep.avg1);
    rep.ratio2 = ratio(rep.avg2);
    rep.ratio3 = ratio(rep.avg3);
    return rep;
}

SampleabilityReport sampleability_distances(const DepBreakBundle &bundle) {
    const auto &g = bundle.game;
    const auto &split = bundle.split;
    SampleabilityReport rep;
    for (std::size_t pos = 0; pos < bundle.coords.size(); pos++) {
        const auto &cb = bundle.coords[pos];
        double acc_b = 0, acc_a = 0, acc_c = 0, used = 0;
        for (int x = 0; x < g.x_size; x++) {
            for (int y = 0; y < g.y_size; y++) {
                double q = g.mu_at(x, y);
                if (q == 0.0) {
                    continue;
                }
                // P(r_{-i}, W_C | x_i, y_i) over (w, a_C, b_C).
                double z = 0.0;
                for (std::size_t w = 0; w < cb.omegas.size(); w++) {
                    for (std::size_t ac = 0; ac < bundle.num_ac; ac++) {
                        for (std::size_t bc = 0; bc < bundle.num_bc; bc++) {
                            if (wins_on_C(g, split, cb.omegas[w].xc, cb.omegas[w].yc, ac, bc)) {
                                z += cb.omegas[w].prob * bundle.entry(pos, w, x, y, ac, bc).state.weight;
                            }
                        }
                    }
                }
                if (z <= 1e-15) {
                    rep.skipped_questions++;
                    continue;
                }
                for (std::size_t w = 0; w < cb.omegas.size(); w++) {
                    for (std::size_t ac = 0; ac < bundle.num_ac; ac++) {
                        for (std::size_t bc = 0; bc < bundle.num_bc; bc++) {
                            if (!wins_on_C(g, split, cb.omegas[w].xc, cb.omegas[w].yc, ac, bc)) {
                                continue;
                            }
                            const auto &e = bundle.entry(pos, w, x, y, ac, bc);
                            double p = q * cb.omegas[w].prob * e.state.weight / z;
                            if (p == 0.0 || !e.state.present) {
                                continue;
                            }
                            if (!e.state_x.present || !e.state_y.present) {
                                rep.skipped_contexts++;
                                rep.skipped_mass += p / split.m();
                                continue;
                            }
                            double db = (e.state.psi - e.state_y.psi).norm();
                            double da = (e.state.psi - e.state_x.psi).norm();
                            double dc = (e.state_y.psi - e.state_x.psi).norm();
                            rep.max_triangle_excess = std::max(rep.max_triangle_excess, dc - da - db);
                            acc_b += p * db;
                            acc_a += p * da;
                            acc_c += p * dc;
                            used += p;
                        }
                    }
                }
            }
        }
        rep.coords.push_back(cb.i);
        rep.d_bob.push_back(used > 0 ? acc_b / used : 0.0);
        rep.d_alice.push_back(used > 0 ? acc_a / used : 0.0);
        rep.d_cross.push_back(used > 0 ? acc_c / used : 0.0);
    }
    const double m = split.m();
    rep.avg_bob = stable_sum(rep.d_bob) / m;
    rep.avg_alice = stable_sum(rep.d_alice) / m;
    rep.avg_cross = stable_sum(rep.d_cross) / m;
    return rep;
}

XiReport xi_raz_check(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C) {
    check_compatible(g, n, s);
    auto split = CoordinateSplit::make(n, C);
    auto sym = symmetrize(s);
    auto mg = question_marginals(g);
    CMatrix pm = sym.psi_matrix();
    const int d = sym.d();
    XiReport rep;
    {
        auto joint = born_joint(g, n, s);
        rep.p_wc = probability(joint, win_set(g, n, split.C, joint));
    }
    rep.delta = skew_delta(g, split, rep.p_wc);
    rep.answer_term = static_cast<double>(split.C.size()) * std::log2(static_cast<double>(g.a_size)) / split.m();
    for (int i : split.rest) {
        const int ipos = split.rest_pos(i);
        auto omegas = enumerate_omega_minus(g, split, -1);
        std::vector<double> terms;
        for (const auto &w : omegas) {
            std::vector<double> px(g.x_size, 0.0);
            if (w.dir[ipos] == 0) {
                px[w.label[ipos]] = 1.0;
            } else {
                px = coordinate_law(g, mg, Player::kAlice, Player::kBob, w.label[ipos]);
            }
            // Blocks per x_i value, indexed [x][a_C].
            std::vector<std::vector<CMatrix>> blocks(g.x_size);
            for (int x = 0; x < g.x_size; x++) {
                if (px[x] == 0.0) {
                    continue;
                }
                for (const auto &a : coarse_povm(g, sym, split, i, w, {Player::kAlice, x}, Player::kAlice)) {
                    blocks[x].push_back(px[x] * CMatrix((pm.adjoint() * a * pm).conjugate()));
                }
            }
            const std::size_t nac = int_pow(g.a_size, static_cast<int>(split.C.size()));
            for (std::size_t ac = 0; ac < nac; ac++) {
                std::vector<double> wts;
                std::vector<CMatrix> normed;
                double total = 0.0;
                for (int x = 0; x < g.x_size; x++) {
                    if (px[x] == 0.0) {
                        continue;
                    }
                    double t = blocks[x][ac].trace().real();
                    total += std::max(t, 0.0);
                    wts.push_back(std::max(t, 0.0));
                    normed.push_back(t > 1e-15 ? CMatrix(hermitize(blocks[x][ac]) / t)
                                               : CMatrix(CMatrix::Identity(d, d) / static_cast<double>(d)));
                }
                if (total <= 1e-15) {
                    continue;
                }
                for (auto &v : wts) {
                    v /= total;
                }
                terms.push_back(w.prob * total * holevo_quantity(wts, normed));
            }
        }
        rep.per_coord.push_back(stable_sum(terms));
    }
    rep.avg_mi = stable_sum(rep.per_coord) / split.m();
    rep.ok = rep.avg_mi <= rep.delta + 1e-6;
    return rep;
}

std::vector<double> conditional_win_rates(const FiniteDistribution &joint, const Game &g, int n,
                                          const std::vector<int> &C, double *p_wc) {
    auto wc = win_set(g, n, C, joint);
    double pc = probability(joint, wc);
    if (p_wc != nullptr) {
        *p_wc = pc;
    }
    if (pc <= 1e-15) {
        throw ZeroProbabilityEvent("P(W_C) = 0");
    }
    std::vector<double> out;
    for (int i = 0; i < n; i++) {
        if (std::find(C.begin(), C.end(), i) != C.end()) {
            continue;
        }
        std::vector<int> single{i};
        auto wi = win_set(g, n, single, joint);
        out.push_back(std::clamp(probability(joint, wc & wi) / pc, 0.0, 1.0));
    }
    return out;
}

ChooseCResult choose_C(const FiniteDistribution &joint, const Game &g, int n, double eps, int t_max) {
    if (t_max < 0 || t_max > n) {
        throw std::invalid_argument("choose_C: need 0 <= t_max <= n");
    }
    ChooseCResult res;
    bool have = false;
    for (int size = 0; size <= std::min(t_max, n - 1); size++) {
        std::vector<int> comb(size);
        for (int k = 0; k < size; k++) {
            comb[k] = k;
        }
        while (true) {
            double pc = 0.0;
            std::vector<double> rates;
            try {
                rates = conditional_win_rates(joint, g, n, comb, &pc);
            } catch (const ZeroProbabilityEvent &) {
                rates.clear();
            }
            if (!rates.empty()) {
                double score = stable_sum(rates) / static_cast<double>(rates.size());
                res.table.push_back({comb, pc, score});
                if (!have || score > res.score + 1e-12) {
                    res.C = comb;
                    res.score = score;
                    have = true;
                }
            }
            int k = size - 1;
            while (k >= 0 && comb[k] == n - size + k) {
                k--;
            }
            if (k < 0) {
                break;
            }
            comb[k]++;
            for (int j = k + 1; j < size; j++) {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    if (!have) {
        throw ZeroProbabilityEvent("choose_C: every candidate subset has P(W_C) = 0");
    }
    res.threshold_met = res.score >= 1.0 - eps / 2.0;
    return res;
}

std::string omega_label(const CoordinateSplit &split, int i, const OmegaMinus &w) {
    std::ostringstream os;
    bool first = true;
    for (int pos = 0; pos < split.m(); pos++) {
        int k = split.rest[pos];
        if (k == i) {
            continue;
        }
        os << (first ? "" : ";") << d_name(k) << "=" << (w.dir[pos] == 0 ? "A" : "B") << ":" << w.label[pos];
        first = false;
    }
    if (!split.C.empty()) {
        os << (first ? "" : ";") << "xC=" << w.xc << ";yC=" << w.yc;
    }
    return os.str();
}

std::string bundle_csv(const DepBreakBundle &bundle, const UsefulnessReport &rep) {
    std::ostringstream os;
    os.precision(17);
    os << "i,omega,aC,bC,xi,yi,weight,residual\n";
    for (const auto &r : rep.rows) {
        int pos = bundle.split.rest_pos(r.i);
        os << r.i + 1 << "," << omega_label(bundle.split, r.i, bundle.coords[pos].omegas[r.w]) << "," << r.ac << ","
           << r.bc << "," << r.xi << "," << r.yi << "," << r.weight << "," << r.residual << "\n";
    }
    return os.str();
}

}  // namespace parrep
