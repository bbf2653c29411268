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

#include "parrep/strategy.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace parrep {

using nlohmann::json;

POVMFamily::POVMFamily(int dim, std::vector<std::vector<CMatrix>> effects) : dim_(dim), effects_(std::move(effects)) {
    if (dim < 1) {
        throw std::invalid_argument("POVM dimension must be positive");
    }
    if (effects_.empty()) {
        throw std::invalid_argument("POVM family has no questions");
    }
    const std::size_t na = effects_[0].size();
    if (na == 0) {
        throw std::invalid_argument("POVM family has no outcomes");
    }
    const CMatrix id = CMatrix::Identity(dim, dim);
    for (std::size_t q = 0; q < effects_.size(); q++) {
        if (effects_[q].size() != na) {
            throw std::invalid_argument("POVM family is ragged at question " + std::to_string(q));
        }
        CMatrix total = CMatrix::Zero(dim, dim);
        for (std::size_t a = 0; a < na; a++) {
            const CMatrix &e = effects_[q][a];
            if (e.rows() != dim || e.cols() != dim) {
                throw std::invalid_argument("POVM effect has wrong shape");
            }
            if (hermitian_deviation(e) > 1e-9 || min_hermitian_eigenvalue(e) < -tol::kNegativeEig) {
                throw std::invalid_argument("POVM effect (" + std::to_string(q) + ", " + std::to_string(a) +
                                            ") is not PSD");
            }
            total += e;
        }
        if ((total - id).norm() > 1e-8) {
            throw std::invalid_argument("POVM effects for question " + std::to_string(q) + " do not sum to I");
        }
    }
}

POVMFamily POVMFamily::conjugated(const CMatrix &u) const {
    auto out = effects_;
    for (auto &row : out) {
        for (auto &e : row) {
            CMatrix c = u * e * u.adjoint();
            e = 0.5 * (c + c.adjoint());
        }
    }
    return POVMFamily(dim_, std::move(out));
}

EntangledStrategy::EntangledStrategy(int n, PureState psi, POVMFamily alice, POVMFamily bob)
    : n_(n), psi_(std::move(psi)), alice_(std::move(alice)), bob_(std::move(bob)) {
    if (n < 1) {
        throw std::invalid_argument("strategy repetition count must be >= 1");
    }
    if (alice_.dim() != bob_.dim()) {
        throw std::invalid_argument("Alice and Bob local dimensions differ");
    }
    if (psi_.dim() != alice_.dim() * alice_.dim()) {
        throw std::invalid_argument("state dimension is not d*d");
    }
}

EntangledStrategy DeterministicStrategy::to_entangled(const Game &g) const {
    check_compatible(g, n, *this);
    RepeatedGame rg(g, n);
    auto embed = [](const std::vector<std::size_t> &f, std::size_t na) {
        std::vector<std::vector<CMatrix>> eff(f.size(), std::vector<CMatrix>(na, CMatrix::Zero(1, 1)));
        for (std::size_t q = 0; q < f.size(); q++) {
            eff[q][f[q]](0, 0) = 1.0;
        }
        return POVMFamily(1, std::move(eff));
    };
    CVector one = CVector::Ones(1);
    return EntangledStrategy(n, PureState(one), embed(alice, rg.num_a()), embed(bob, rg.num_b()));
}

void check_compatible(const Game &g, int n, const EntangledStrategy &s) {
    if (s.n() != n) {
        throw std::invalid_argument("strategy targets n=" + std::to_string(s.n()) + ", not " + std::to_string(n));
    }
    RepeatedGame rg(g, n);
    if (s.alice().num_questions() != rg.num_x() || s.alice().num_answers() != rg.num_a() ||
        s.bob().num_questions() != rg.num_y() || s.bob().num_answers() != rg.num_b()) {
        throw std::invalid_argument("strategy index spaces do not match the repeated game");
    }
}

void check_compatible(const Game &g, int n, const DeterministicStrategy &s) {
    if (s.n != n) {
        throw std::invalid_argument("strategy targets a different repetition count");
    }
    RepeatedGame rg(g, n);
    if (s.alice.size() != rg.num_x() || s.bob.size() != rg.num_y()) {
        throw std::invalid_argument("deterministic strategy tables have the wrong length");
    }
    for (auto a : s.alice) {
        if (a >= rg.num_a()) {
            throw std::invalid_argument("deterministic answer out of range");
        }
    }
    for (auto b : s.bob) {
        if (b >= rg.num_b()) {
            throw std::invalid_argument("deterministic answer out of range");
        }
    }
}

EntangledStrategy symmetrize(const EntangledStrategy &s) {
    const int d = s.d();
    auto sd = schmidt(s.psi(), d, d);
    const CMatrix &u = sd.left_basis;
    CMatrix r = u * sd.right_basis.adjoint();
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
    for (int k = 0; k < d; k++) {
        if (sd.coefficients[k] == 0.0) {
            continue;
        }
        psi += sd.coefficients[k] * tensor(CVector(u.col(k)), CVector(u.col(k)));
    }
    psi /= psi.norm();
    EntangledStrategy out(s.n(), PureState(psi), s.alice(), s.bob().conjugated(r));
    out.set_symmetric_basis(u);
    return out;
}

double born_probability(const CMatrix &psi_mat, const CMatrix &a, const CMatrix &b) {
    CMatrix k = psi_mat.adjoint() * a * psi_mat;
    return (k.array() * b.array()).sum().real();
}

namespace {

double clamp_probability(double p) {
    if (p < -1e-9) {
        throw std::runtime_error("Born rule produced a negative probability " + std::to_string(p));
    }
    return p < 0.0 ? 0.0 : p;
}

}  // namespace

std::vector<double> answer_table(const EntangledStrategy &s, std::size_t x, std::size_t y) {
    const CMatrix psi = s.psi_matrix();
    const auto &as = s.alice().outcomes(x);
    const auto &bs = s.bob().outcomes(y);
    std::vector<double> out(as.size() * bs.size());
    for (std::size_t a = 0; a < as.size(); a++) {
        CMatrix k = psi.adjoint() * as[a] * psi;
        for (std::size_t b = 0; b < bs.size(); b++) {
            out[a * bs.size() + b] = clamp_probability((k.array() * bs[b].array()).sum().real());
        }
    }
    return out;
}

FiniteDistribution born_joint(const Game &g, int n, const EntangledStrategy &s) {
    check_compatible(g, n, s);
    auto vars = repeated_variables(g, n);
    std::size_t total = assignment_count(vars);
    RepeatedGame rg(g, n);
    const std::size_t nab = rg.num_a() * rg.num_b();
    std::vector<double> w(total, 0.0);
    for (std::size_t x = 0; x < rg.num_x(); x++) {
        for (std::size_t y = 0; y < rg.num_y(); y++) {
            double q = rg.mu(x, y);
            if (q == 0.0) {
                continue;
            }
            auto t = answer_table(s, x, y);
            std::size_t base = (x * rg.num_y() + y) * nab;
            for (std::size_t k = 0; k < nab; k++) {
                w[base + k] = q * t[k];
            }
        }
    }
    return FiniteDistribution::from_masses(std::move(vars), std::move(w));
}

double win_probability(const Game &g, int n, const EntangledStrategy &s) {
    check_compatible(g, n, s);
    RepeatedGame rg(g, n);
    std::vector<double> terms;
    for (std::size_t x = 0; x < rg.num_x(); x++) {
        for (std::size_t y = 0; y < rg.num_y(); y++) {
            double q = rg.mu(x, y);
            if (q == 0.0) {
                continue;
            }
            auto t = answer_table(s, x, y);
            for (std::size_t a = 0; a < rg.num_a(); a++) {
                for (std::size_t b = 0; b < rg.num_b(); b++) {
                    if (rg.win(x, y, a, b)) {
                        terms.push_back(q * t[a * rg.num_b() + b]);
                    }
                }
            }
        }
    }
    return std::clamp(stable_sum(terms), 0.0, 1.0);
}

double win_probability(const Game &g, int n, const DeterministicStrategy &s) {
    check_compatible(g, n, s);
    RepeatedGame rg(g, n);
    std::vector<double> terms;
    for (std::size_t x = 0; x < rg.num_x(); x++) {
        for (std::size_t y = 0; y < rg.num_y(); y++) {
            if (rg.win(x, y, s.alice[x], s.bob[y])) {
                terms.push_back(rg.mu(x, y));
            }
        }
    }
    return std::clamp(stable_sum(terms), 0.0, 1.0);
}

CMatrix qubit_projector(double theta, int a) {
    CMatrix m(2, 2);
    double sgn = a == 0 ? 1.0 : -1.0;
    double c = std::cos(theta), s = std::sin(theta);
    m << 0.5 * (1 + sgn * c), 0.5 * sgn * s, 0.5 * sgn * s, 0.5 * (1 - sgn * c);
    return m;
}

namespace {

constexpr double kAliceAngles[2] = {0.0, std::numbers::pi / 2};
constexpr double kBobAngles[2] = {std::numbers::pi / 4, -std::numbers::pi / 4};

CVector max_entangled(int d) {
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
    for (int j = 0; j < d; j++) {
        psi[static_cast<Eigen::Index>(j) * d + j] = 1.0 / std::sqrt(static_cast<double>(d));
    }
    return psi;
}

EntangledStrategy tsirelson_round() {
    std::vector<std::vector<CMatrix>> alice(2), bob(2);
    for (int q = 0; q < 2; q++) {
        for (int a = 0; a < 2; a++) {
            alice[q].push_back(qubit_projector(kAliceAngles[q], a));
            bob[q].push_back(qubit_projector(kBobAngles[q], a));
        }
    }
    return EntangledStrategy(1, PureState(max_entangled(2)), POVMFamily(2, std::move(alice)),
                             POVMFamily(2, std::move(bob)));
}

// Effects of a player whose coordinate-j angle depends on the whole tuple.
POVMFamily angle_family(int n, const double base[2], double kappa) {
    const std::size_t nq = std::size_t{1} << n;
    std::vector<std::vector<CMatrix>> eff(nq, std::vector<CMatrix>(nq));
    for (std::size_t x = 0; x < nq; x++) {
        int parity = std::popcount(x) & 1;
        for (std::size_t a = 0; a < nq; a++) {
            CMatrix e = CMatrix::Ones(1, 1);
            for (int j = 0; j < n; j++) {
                int xj = RepeatedGame::digit(x, j, n, 2);
                int aj = RepeatedGame::digit(a, j, n, 2);
                double theta = base[xj] + kappa * ((parity ^ xj) & 1);
                e = tensor(e, qubit_projector(theta, aj));
            }
            eff[x][a] = e;
        }
    }
    return POVMFamily(1 << n, std::move(eff));
}

}  // namespace

EntangledStrategy product_strategy(const std::vector<EntangledStrategy> &rounds) {
    if (rounds.empty()) {
        throw std::invalid_argument("product_strategy: no rounds");
    }
    const int n = static_cast<int>(rounds.size());
    CMatrix psi = CMatrix::Ones(1, 1);
    int d = 1;
    for (const auto &r : rounds) {
        if (r.n() != 1) {
            throw std::invalid_argument("product_strategy: rounds must be single-shot strategies");
        }
        psi = tensor(psi, r.psi_matrix());
        d *= r.d();
    }
    auto build = [&](bool alice_side) {
        std::vector<int> nq, na;
        std::size_t total_q = 1, total_a = 1;
        for (const auto &r : rounds) {
            const auto &f = alice_side ? r.alice() : r.bob();
            nq.push_back(static_cast<int>(f.num_questions()));
            na.push_back(static_cast<int>(f.num_answers()));
            total_q *= f.num_questions();
            total_a *= f.num_answers();
        }
        std::vector<std::vector<CMatrix>> eff(total_q, std::vector<CMatrix>(total_a));
        for (std::size_t x = 0; x < total_q; x++) {
            for (std::size_t a = 0; a < total_a; a++) {
                CMatrix e = CMatrix::Ones(1, 1);
                std::size_t xr = x, ar = a;
                std::vector<std::pair<int, int>> digits(n);
                for (int j = n - 1; j >= 0; j--) {
                    digits[j] = {static_cast<int>(xr % nq[j]), static_cast<int>(ar % na[j])};
                    xr /= nq[j];
                    ar /= na[j];
                }
                for (int j = 0; j < n; j++) {
                    const auto &f = alice_side ? rounds[j].alice() : rounds[j].bob();
                    e = tensor(e, f.effect(digits[j].first, digits[j].second));
                }
                eff[x][a] = e;
            }
        }
        return POVMFamily(d, std::move(eff));
    };
    return EntangledStrategy(n, PureState(flatten(psi)), build(true), build(false));
}

EntangledStrategy tsirelson(int n) {
    if (n < 1 || n > 6) {
        throw std::invalid_argument("tsirelson: n must be in [1, 6]");
    }
    return product_strategy(std::vector<EntangledStrategy>(n, tsirelson_round()));
}

EntangledStrategy printing(int n, double kappa) {
    if (n < 1 || n > 6) {
        throw std::invalid_argument("printing: n must be in [1, 6]");
    }
    const int d = 1 << n;
    return EntangledStrategy(n, PureState(max_entangled(d)), angle_family(n, kAliceAngles, kappa),
                             angle_family(n, kBobAngles, kappa));
}

DeterministicStrategy detprod(const Game &g, int n) {
    require_valid(g);
    std::size_t fa_count = 1, fb_count = 1;
    for (int k = 0; k < g.x_size; k++) {
        fa_count *= g.a_size;
    }
    for (int k = 0; k < g.y_size; k++) {
        fb_count *= g.b_size;
    }
    if (fa_count * fb_count > 10'000'000) {
        throw std::length_error("detprod: single-round strategy space too large");
    }
    double best = -1.0;
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t fa = 0; fa < fa_count; fa++) {
        for (std::size_t fb = 0; fb < fb_count; fb++) {
            double v = 0.0;
            for (int x = 0; x < g.x_size; x++) {
                for (int y = 0; y < g.y_size; y++) {
                    int a = RepeatedGame::digit(fa, x, g.x_size, g.a_size);
                    int b = RepeatedGame::digit(fb, y, g.y_size, g.b_size);
                    if (g.win(x, y, a, b)) {
                        v += g.mu_at(x, y);
                    }
                }
            }
            if (v > best + 1e-12) {
                best = v;
                best_a = fa;
                best_b = fb;
            }
        }
    }
    RepeatedGame rg(g, n);
    DeterministicStrategy s;
    s.n = n;
    auto lift = [&](std::size_t f, std::size_t count, int qsize, int asize) {
        std::vector<std::size_t> table(count);
        for (std::size_t t = 0; t < count; t++) {
            std::size_t ans = 0;
            for (int j = 0; j < n; j++) {
                int q = RepeatedGame::digit(t, j, n, qsize);
                ans = ans * asize + RepeatedGame::digit(f, q, qsize, asize);
            }
            table[t] = ans;
        }
        return table;
    };
    s.alice = lift(best_a, rg.num_x(), g.x_size, g.a_size);
    s.bob = lift(best_b, rg.num_y(), g.y_size, g.b_size);
    return s;
}

EntangledStrategy strategy_fixture(std::string_view name, const Game &g, int n) {
    if (name == "detprod") {
        return detprod(g, n).to_entangled(g);
    }
    if (name == "tsirelson" || name == "printing") {
        if (g.x_size != 2 || g.y_size != 2 || g.a_size != 2 || g.b_size != 2) {
            throw std::invalid_argument("fixture '" + std::string(name) + "' needs binary questions and answers");
        }
        return name == "tsirelson" ? tsirelson(n) : printing(n);
    }
    throw std::invalid_argument("unknown strategy fixture '" + std::string(name) + "'");
}

EntangledStrategy random_strategy(Rng &rng, const Game &g, int n, int d) {
    RepeatedGame rg(g, n);
    auto family = [&](std::size_t nq, std::size_t na) {
        std::vector<std::vector<CMatrix>> eff(nq, std::vector<CMatrix>(na, CMatrix::Zero(d, d)));
        std::uniform_int_distribution<std::size_t> pick(0, na - 1);
        for (std::size_t q = 0; q < nq; q++) {
            CMatrix u = random_unitary(rng, d);
            for (int k = 0; k < d; k++) {
                eff[q][pick(rng)] += projector(u.col(k));
            }
        }
        return POVMFamily(d, std::move(eff));
    };
    auto alice = family(rg.num_x(), rg.num_a());
    auto bob = family(rg.num_y(), rg.num_b());
    return EntangledStrategy(n, PureState(random_state(rng, d * d)), std::move(alice), std::move(bob));
}

namespace {

json pack_matrix(const CMatrix &m) {
    json arr = json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            arr.push_back(m(r, c).real());
            arr.push_back(m(r, c).imag());
        }
    }
    return arr;
}

CMatrix unpack_matrix(const json &arr, int rows, int cols) {
    if (!arr.is_array() || arr.size() != static_cast<std::size_t>(2 * rows * cols)) {
        throw std::invalid_argument("strategy file: matrix has wrong length");
    }
    CMatrix m(rows, cols);
    std::size_t k = 0;
    for (int r = 0; r < rows; r++) {
        for (int c = 0; c < cols; c++) {
            m(r, c) = Complex(arr[k].get<double>(), arr[k + 1].get<double>());
            k += 2;
        }
    }
    return m;
}

json pack_family(const POVMFamily &f) {
    json out = json::array();
    for (const auto &row : f.effects()) {
        json r = json::array();
        for (const auto &e : row) {
            r.push_back(pack_matrix(e));
        }
        out.push_back(std::move(r));
    }
    return out;
}

POVMFamily unpack_family(const json &j, int d) {
    std::vector<std::vector<CMatrix>> eff;
    for (const auto &row : j) {
        std::vector<CMatrix> r;
        for (const auto &e : row) {
            r.push_back(unpack_matrix(e, d, d));
        }
        eff.push_back(std::move(r));
    }
    return POVMFamily(d, std::move(eff));
}

}  // namespace

std::string strategy_to_text(const EntangledStrategy &s) {
    json j;
    j["d"] = s.d();
    j["n"] = s.n();
    j["psi"] = pack_matrix(s.psi().amplitudes());
    j["alice"] = pack_family(s.alice());
    j["bob"] = pack_family(s.bob());
    return j.dump() + "\n";
}

EntangledStrategy strategy_from_text(std::string_view text) {
    try {
        json j = json::parse(text);
        int d = j.at("d").get<int>();
        int n = j.at("n").get<int>();
        if (d < 1) {
            throw std::invalid_argument("strategy file: d must be positive");
        }
        CVector psi = unpack_matrix(j.at("psi"), d * d, 1).col(0);
        return EntangledStrategy(n, PureState(psi), unpack_family(j.at("alice"), d), unpack_family(j.at("bob"), d));
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("strategy file: ") + e.what());
    }
}

EntangledStrategy load_strategy(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open strategy file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return strategy_from_text(ss.str());
}

void save_strategy(const EntangledStrategy &s, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write strategy file '" + path + "'");
    }
    out << strategy_to_text(s);
}

}  // namespace parrep
