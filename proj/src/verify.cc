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

#include "parrep/verify.h"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "parrep/corrsamp.h"
#include "parrep/depbreak.h"
#include "parrep/infotheory.h"
#include "parrep/values.h"

namespace parrep {

void SuiteReport::expect_le(const std::string &name, double value, double bound) {
    checks.push_back({name, value, bound, "<=", value <= bound});
}

void SuiteReport::expect_ge(const std::string &name, double value, double bound) {
    checks.push_back({name, value, bound, ">=", value >= bound});
}

void SuiteReport::expect_true(const std::string &name, bool ok, double value) {
    checks.push_back({name, value, 1.0, "==", ok});
}

void SuiteReport::info(const std::string &name, double value) {
    checks.push_back({name, value, 0.0, "info", true});
}

void SuiteReport::metric(const std::string &name, double value) {
    metrics.emplace_back(name, value);
}

bool SuiteReport::passed() const {
    return failures() == 0;
}

std::size_t SuiteReport::failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check &c) { return !c.pass; }));
}

std::string SuiteReport::first_failure() const {
    for (const auto &c : checks) {
        if (!c.pass) {
            return c.name + " = " + std::to_string(c.value) + " (want " + c.relation + " " +
                   std::to_string(c.threshold) + ")";
        }
    }
    return "";
}

namespace {

nlohmann::json finite_or_string(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

std::string SuiteReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["passed"] = passed();
    j["failures"] = failures();
    j["num_checks"] = checks.size();
    nlohmann::json cs = nlohmann::json::array();
    for (const auto &c : checks) {
        cs.push_back({{"name", c.name},
                      {"value", finite_or_string(c.value)},
                      {"threshold", finite_or_string(c.threshold)},
                      {"relation", c.relation},
                      {"pass", c.pass}});
    }
    j["checks"] = cs;
    nlohmann::json ms = nlohmann::json::object();
    for (const auto &[k, v] : metrics) {
        ms[k] = finite_or_string(v);
    }
    j["metrics"] = ms;
    j["seconds"] = seconds;
    return j.dump(2);
}

const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names{"matcore", "infotheory", "usefulness", "skew",  "sampleability",
                                                "xi",      "values",     "corrsamp",   "qcs",   "reduction",
                                                "bound"};
    return names;
}

namespace {

class Timer {
   public:
    explicit Timer(SuiteReport &r) : r_(r), t0_(std::chrono::steady_clock::now()) {
    }
    ~Timer() {
        r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

   private:
    SuiteReport &r_;
    std::chrono::steady_clock::time_point t0_;
};

int uniform_int(Rng &rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<double> random_simplex(Rng &rng, std::size_t k, double floor = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(k);
    double t = 0.0;
    for (auto &v : p) {
        v = floor + u(rng);
        t += v;
    }
    for (auto &v : p) {
        v /= t;
    }
    return p;
}

std::string indexed(const std::string &name, int t) {
    return name + "[" + std::to_string(t) + "]";
}

bool same_game(const Game &a, const Game &b) {
    return a.x_size == b.x_size && a.y_size == b.y_size && a.a_size == b.a_size && a.b_size == b.b_size &&
           a.mu == b.mu && a.predicate == b.predicate;
}

}  // namespace

SuiteReport verify_matcore(std::uint64_t seed, int trials) {
    SuiteReport rep;
    rep.suite = "matcore";
    Timer timer(rep);
    Rng rng(seed);
    double worst_ando = 0, worst_ps = 0, worst_pure = 0;
    for (int t = 0; t < trials; t++) {
        const int d = uniform_int(rng, 1, 8);
        CMatrix rho = random_density(rng, d, uniform_int(rng, 1, d));
        auto psi = symmetric_purification(DensityMatrix(rho));
        CMatrix X = random_complex_matrix(rng, d, d), Y = random_complex_matrix(rng, d, d);
        Complex lhs = (psi.amplitudes().adjoint() * tensor(X, Y) * psi.amplitudes())(0, 0);
        CMatrix sr = mat_sqrt(rho);
        CMatrix yt = transpose_in_basis(Y, hermitian_eigen(rho).vectors);
        Complex rhs = (X * sr * yt * sr).trace();
        double ando = std::abs(lhs - rhs);
        rep.expect_le(indexed("ando", t), ando, 1e-9);

        CMatrix A = random_psd(rng, d, uniform_int(rng, 1, d)), B = random_psd(rng, d, uniform_int(rng, 1, d));
        double ps = (A - B).squaredNorm() - trace_norm(A * A - B * B);
        rep.expect_le(indexed("powers_stormer", t), ps, 1e-9);

        CVector v = random_state(rng, d);
        CVector w = t % 2 == 0 ? random_state(rng, d) : CVector((v + 0.05 * random_state(rng, d)).normalized());
        double pure = trace_norm(projector(v) - projector(w)) - 2.0 * (v - w).norm();
        rep.expect_le(indexed("pure_state_trace_bound", t), pure, 1e-9);
        worst_ando = std::max(worst_ando, ando);
        worst_ps = std::max(worst_ps, ps);
        worst_pure = std::max(worst_pure, pure);
    }
    rep.metric("trials", trials);
    rep.metric("worst_ando", worst_ando);
    rep.metric("worst_powers_stormer_excess", worst_ps);
    rep.metric("worst_pure_state_excess", worst_pure);
    return rep;
}

SuiteReport verify_infotheory(std::uint64_t seed, int trials, int raz_trials) {
    SuiteReport rep;
    rep.suite = "infotheory";
    Timer timer(rep);
    Rng rng(seed);

    // Closed-form anchors.
    {
        CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Identity(2, 2) * 0.5;
        a(0, 0) = 1.0;
        rep.expect_le("relative_entropy_pure_vs_mixed_bits", std::abs(relative_entropy(DensityMatrix(a), DensityMatrix(b)) - 1.0), 1e-12);
        rep.expect_le("relative_min_entropy_pure_vs_mixed", std::abs(relative_min_entropy(DensityMatrix(a), DensityMatrix(b)) - 1.0), 1e-12);
        CVector bell = CVector::Zero(4);
        bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
        rep.expect_le("bell_mutual_information", std::abs(mutual_information(DensityMatrix(projector(bell)), 2, 2) - 2.0), 1e-9);
    }

    double min_nat_margin = kInfinity;
    for (int t = 0; t < trials; t++) {
        const int d = uniform_int(rng, 1, 6);
        CMatrix rho = random_density(rng, d, uniform_int(rng, 1, d));
        CMatrix sigma = random_density(rng, d, d);
        DensityMatrix r(rho), s(sigma);

        auto m = metrics(r, s);
        double fvdg = std::max(1.0 - m.fidelity - m.trace_distance,
                               m.trace_distance - std::sqrt(std::max(0.0, 1.0 - m.fidelity * m.fidelity)));
        rep.expect_le(indexed("fuchs_van_de_graaf", t), fvdg, 1e-9);

        double l1 = trace_norm(rho - sigma);
        double rel = relative_entropy(r, s);
        rep.expect_le(indexed("pinsker", t), 0.5 * l1 * l1 - rel, 1e-9);
        min_nat_margin = std::min(min_nat_margin, rel * std::log(2.0) - 0.5 * l1 * l1);

        double smax = relative_min_entropy(r, s);
        rep.expect_le(indexed("max_relative_entropy_dominates", t), rel - smax, 1e-9);

        // Chain rule on random cq pairs.
        const int kz = uniform_int(rng, 1, 3), q = uniform_int(rng, 1, 3);
        std::vector<Variable> zv{{"Z", kz}};
        std::vector<CMatrix> b1, b2;
        for (int z = 0; z < kz; z++) {
            b1.push_back(random_density(rng, q, uniform_int(rng, 1, q)));
            b2.push_back(random_density(rng, q, q));
        }
        CQState rp(FiniteDistribution(zv, random_simplex(rng, kz)), b1);
        CQState rr(FiniteDistribution(zv, random_simplex(rng, kz, 0.05)), b2);
        auto cr = chain_rule_check(rp, rr);
        rep.expect_true(indexed("chain_rule", t), cr.ok, std::abs(cr.lhs - cr.rhs_sum));

        // S(rho_AB || sigma_A (x) tau_B) >= I(A;B).
        const int da = uniform_int(rng, 1, 3), db = uniform_int(rng, 1, 3);
        CMatrix rab = random_density(rng, da * db, uniform_int(rng, 1, da * db));
        CMatrix prod = tensor(random_density(rng, da, da), random_density(rng, db, db));
        double gap = mutual_information(DensityMatrix(rab), da, db) -
                     relative_entropy(DensityMatrix(rab), DensityMatrix(prod));
        rep.expect_le(indexed("product_reference_ordering", t), gap, 1e-8);
    }
    rep.metric("pinsker_min_nat_margin", min_nat_margin);

    double worst_raz = -kInfinity;
    for (int t = 0; t < raz_trials; t++) {
        const int nvars = uniform_int(rng, 1, 3);
        std::vector<Variable> vars;
        std::size_t total = 1;
        for (int k = 0; k < nvars; k++) {
            int sz = uniform_int(rng, 2, 3);
            vars.push_back({"X" + std::to_string(k + 1), sz});
            total *= sz;
        }
        const int q = uniform_int(rng, 1, 4);
        std::vector<CMatrix> rb;
        for (std::size_t k = 0; k < total; k++) {
            rb.push_back(random_density(rng, q, uniform_int(rng, 1, q)));
        }
        CQState rho(FiniteDistribution(vars, random_simplex(rng, total)), rb);
        std::vector<std::vector<double>> marg;
        for (const auto &v : vars) {
            marg.push_back(random_simplex(rng, v.size, 0.05));
        }
        FiniteDistribution proto = FiniteDistribution::uniform(vars);
        std::vector<double> sw(total);
        for (std::size_t k = 0; k < total; k++) {
            double p = 1.0;
            for (int j = 0; j < nvars; j++) {
                p *= marg[j][proto.value(k, j)];
            }
            sw[k] = p;
        }
        CMatrix tau = random_density(rng, q, q);
        CQState sigma(FiniteDistribution(vars, sw), std::vector<CMatrix>(total, tau));
        auto rc = raz_lemma_check(rho, sigma);
        rep.expect_true(indexed("raz", t), rc.ok, rc.lhs - rc.rhs);
        worst_raz = std::max(worst_raz, rc.lhs - rc.rhs);
    }
    rep.metric("trials", trials);
    rep.metric("raz_trials", raz_trials);
    rep.metric("raz_worst_lhs_minus_rhs", worst_raz);
    return rep;
}

SuiteReport verify_usefulness(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C) {
    SuiteReport rep;
    rep.suite = "usefulness";
    Timer timer(rep);
    auto bundle = build_bundle(g, n, s, C);
    auto joint = extended_joint(g, n, s, bundle.split);
    auto u = usefulness_check(bundle, joint);
    rep.expect_le("max_residual", u.max_residual, 1e-8);
    rep.expect_le("max_weight_residual", u.max_weight_residual, 1e-8);
    rep.expect_le("max_weight_sum_defect", u.max_weight_sum_defect, 1e-8);
    rep.expect_le("max_null_weight", u.max_null_weight, 1e-8);
    rep.expect_le("max_coarse_completeness", bundle.max_coarse_completeness, 1e-8);
    rep.expect_le("max_alignment_defect", bundle.max_alignment_defect, 1e-8);
    rep.expect_ge("contexts", static_cast<double>(u.contexts), 1.0);
    rep.metric("contexts", static_cast<double>(u.contexts));
    rep.metric("absent_states", static_cast<double>(u.absent_states));
    rep.metric("rows", static_cast<double>(u.rows.size()));
    return rep;
}

SuiteReport verify_skew(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C) {
    SuiteReport rep;
    rep.suite = "skew";
    Timer timer(rep);
    auto split = CoordinateSplit::make(n, C);
    auto joint = extended_joint(g, n, s, split);
    auto sk = skew_distances(g, joint, split);
    for (std::size_t k = 0; k < sk.coords.size(); k++) {
        std::string i = std::to_string(sk.coords[k] + 1);
        for (auto [name, v] : {std::pair{"item1", sk.item1[k]}, {"item2", sk.item2[k]}, {"item3", sk.item3[k]}}) {
            rep.expect_ge(std::string(name) + "_i" + i + "_nonneg", v, 0.0);
            rep.expect_le(std::string(name) + "_i" + i + "_at_most_1", v, 1.0);
            rep.metric(std::string(name) + "_i" + i, v);
        }
    }
    rep.info("avg_item1", sk.avg1);
    rep.info("avg_item2", sk.avg2);
    rep.info("avg_item3", sk.avg3);
    rep.info("ratio1_over_sqrt_delta", sk.ratio1);
    rep.info("ratio2_over_sqrt_delta", sk.ratio2);
    rep.info("ratio3_over_sqrt_delta", sk.ratio3);
    rep.metric("p_wc", sk.p_wc);
    rep.metric("delta", sk.delta);
    return rep;
}

SuiteReport verify_sampleability(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C) {
    SuiteReport rep;
    rep.suite = "sampleability";
    Timer timer(rep);
    auto bundle = build_bundle(g, n, s, C);
    auto sa = sampleability_distances(bundle);
    rep.expect_le("max_triangle_excess", sa.max_triangle_excess, 1e-10);
    for (double v : {sa.avg_bob, sa.avg_alice, sa.avg_cross}) {
        rep.expect_le("distance_at_most_2", v, 2.0);
    }
    rep.info("avg_d_bob", sa.avg_bob);
    rep.info("avg_d_alice", sa.avg_alice);
    rep.info("avg_d_cross", sa.avg_cross);
    rep.metric("skipped_mass", sa.skipped_mass);
    rep.metric("skipped_contexts", static_cast<double>(sa.skipped_contexts));
    rep.metric("skipped_questions", static_cast<double>(sa.skipped_questions));
    return rep;
}

SuiteReport verify_xi(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C) {
    SuiteReport rep;
    rep.suite = "xi";
    Timer timer(rep);
    auto xr = xi_raz_check(g, n, s, C);
    rep.expect_le("avg_mi_minus_delta", xr.avg_mi - xr.delta, 1e-6);
    rep.info("avg_mi", xr.avg_mi);
    rep.info("delta", xr.delta);
    rep.info("answer_term", xr.answer_term);
    rep.metric("p_wc", xr.p_wc);
    return rep;
}

SuiteReport verify_values(const Game &g, std::uint64_t seed, int seeds, int max_iters) {
    SuiteReport rep;
    rep.suite = "values";
    Timer timer(rep);
    const bool chsh = same_game(g, chsh_game());
    double c1 = classical_value(g, 1);
    if (chsh) {
        rep.expect_le("classical_n1_error", std::abs(c1 - 0.75), 0.0);
    } else {
        rep.info("classical_n1", c1);
    }
    rep.metric("classical_n1", c1);
    try {
        double c2 = classical_value(g, 2);
        if (chsh) {
            rep.expect_le("classical_n2_error", std::abs(c2 - 0.625), 0.0);
        } else {
            rep.info("classical_n2", c2);
        }
        rep.metric("classical_n2", c2);
    } catch (const std::length_error &) {
        rep.info("classical_n2_skipped", 1.0);
    }
    double best = 0.0;
    for (int k = 0; k < seeds; k++) {
        SeesawConfig cfg;
        cfg.seed = seed + static_cast<std::uint64_t>(k);
        cfg.max_iters = max_iters;
        auto res = seesaw(g, cfg);
        rep.info("seesaw_seed_" + std::to_string(cfg.seed), res.value);
        best = std::max(best, res.value);
    }
    rep.metric("seesaw_best", best);
    rep.expect_ge("seesaw_at_least_classical_minus_slack", best, c1 - 1e-6);
    if (chsh) {
        rep.expect_ge("seesaw_best", best, 0.8535);
        double ts = win_probability(g, 1, tsirelson(1));
        double target = std::pow(std::cos(std::numbers::pi / 8.0), 2);
        rep.expect_le("tsirelson_fixture_error", std::abs(ts - target), 1e-9);
    }
    return rep;
}

SuiteReport verify_corrsamp(std::uint64_t seed, int trials) {
    SuiteReport rep;
    rep.suite = "corrsamp";
    Timer timer(rep);
    Rng rng(seed);
    {
        auto P = random_simplex(rng, 6);
        int agree = 0, fails = 0;
        for (int t = 0; t < trials; t++) {
            SharedRandomStream st(seed, static_cast<std::uint64_t>(t), P.size());
            auto cs = classical_corr_sample(P, P, st);
            agree += cs.agreed ? 1 : 0;
            fails += cs.failed ? 1 : 0;
        }
        rep.expect_ge("identical_agreement_rate", static_cast<double>(agree) / trials, 1.0);
        rep.metric("identical_failures", fails);
    }
    const std::vector<double> P{0.4, 0.3, 0.2, 0.1}, Q{0.3, 0.3, 0.2, 0.2};
    const double eps = 0.1;
    int disagree = 0, fails = 0;
    std::vector<double> cp(4, 0.0), cq(4, 0.0);
    for (int t = 0; t < trials; t++) {
        SharedRandomStream st(seed + 1, static_cast<std::uint64_t>(t), P.size());
        auto cs = classical_corr_sample(P, Q, st);
        if (cs.failed) {
            fails++;
            continue;
        }
        disagree += cs.agreed ? 0 : 1;
        cp[cs.p_out] += 1;
        cq[cs.q_out] += 1;
    }
    const double ok_runs = trials - fails;
    double tvp = 0, tvq = 0, chi = 0;
    for (int u = 0; u < 4; u++) {
        tvp += 0.5 * std::abs(cp[u] / ok_runs - P[u]);
        tvq += 0.5 * std::abs(cq[u] / ok_runs - Q[u]);
        double e = P[u] * ok_runs;
        chi += (cp[u] - e) * (cp[u] - e) / e;
    }
    double pval = boost::math::gamma_q(1.5, chi / 2.0);
    double rate = static_cast<double>(disagree) / trials;
    rep.expect_le("disagreement_rate", rate, 4 * eps + 0.02);
    rep.expect_le("marginal_tv_alice", tvp, 0.02);
    rep.expect_le("marginal_tv_bob", tvq, 0.02);
    rep.expect_ge("chi_square_p_value_alice", pval, 0.001);
    rep.info("sampling_failures", fails);
    rep.metric("disagreement_rate", rate);
    rep.metric("rejection_bound_2eps_over_1_plus_eps", 2 * eps / (1 + eps));
    rep.metric("trials", trials);
    return rep;
}

SuiteReport verify_qcs(std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = "qcs";
    Timer timer(rep);
    {
        auto e1 = embezzlement(1);
        rep.expect_le("embezzlement_1", std::abs(e1.coefficients[0] - 1.0), 0.0);
        auto e2 = embezzlement(2);
        rep.expect_le("embezzlement_2", std::max(std::abs(e2.coefficients[0] * e2.coefficients[0] - 2.0 / 3.0),
                                                 std::abs(e2.coefficients[1] * e2.coefficients[1] - 1.0 / 3.0)),
                      1e-15);
        auto big = embezzlement(std::size_t{1} << 20);
        std::vector<double> sq;
        bool decreasing = true;
        for (std::size_t j = 0; j < big.coefficients.size(); j++) {
            sq.push_back(big.coefficients[j] * big.coefficients[j]);
            if (j > 0 && !(big.coefficients[j] < big.coefficients[j - 1])) {
                decreasing = false;
            }
        }
        rep.expect_le("embezzlement_2^20_norm", std::abs(stable_sum(sq) - 1.0), 1e-12);
        rep.expect_true("embezzlement_strictly_decreasing", decreasing);
    }
    {
        Rng one(seed);
        auto psi = PureState(random_state(one, 1));
        auto iso = qcs_isometry(psi, 256);
        auto r = qcs_execute(iso, iso, 1);
        bool ident = true;
        for (std::size_t j = 0; j < iso.permutation.size(); j++) {
            ident = ident && iso.permutation[j] == j;
        }
        rep.expect_true("d1_identity_permutation", ident);
        rep.expect_le("d1_err", r.err, 0.0);
    }
    Rng rng(seed);
    PureState psi(random_state(rng, 16));
    std::vector<double> errs;
    bool valid = true;
    bool deterministic = true;
    for (int e : {8, 12, 16, 20}) {
        std::size_t dp = std::size_t{1} << e;
        auto a = qcs_isometry(psi, dp);
        auto b = qcs_isometry(psi, dp);
        deterministic = deterministic && (a == b);
        auto r = qcs_execute(a, b, 4);
        const CMatrix &m = r.produced_target;
        double tr = std::abs(m.trace().real() - 1.0);
        double herm = hermitian_deviation(m);
        double mn = min_hermitian_eigenvalue(m);
        rep.expect_le("produced_trace_error_2^" + std::to_string(e), tr, 1e-8);
        rep.expect_le("produced_hermitian_dev_2^" + std::to_string(e), herm, 1e-8);
        rep.expect_ge("produced_min_eig_2^" + std::to_string(e), mn, -1e-8);
        valid = valid && tr <= 1e-8 && mn >= -1e-8;
        rep.info("err_2^" + std::to_string(e), r.err);
        errs.push_back(r.err);
    }
    bool strict = true;
    for (std::size_t k = 1; k < errs.size(); k++) {
        strict = strict && errs[k] < errs[k - 1];
    }
    rep.expect_true("err_strictly_decreasing", strict);
    rep.expect_true("isometries_bit_identical", deterministic);
    {
        const std::size_t dp = std::size_t{1} << 12;
        CVector pert = psi.amplitudes() + 1e-7 * random_state(rng, 16);
        PureState theta(pert.normalized());
        double dist = (theta.amplitudes() - psi.amplitudes()).norm();
        auto ia = qcs_isometry(psi, dp);
        auto ib = qcs_isometry(theta, dp);
        double same = qcs_execute(ia, ia, 4).err;
        double mixed = qcs_execute(ia, ib, 4).err;
        rep.expect_le("perturbation_distance", dist, 1e-6);
        rep.expect_le("perturbed_err_over_identical", mixed / same, 2.0);
    }
    {
        // Schmidt coefficients already shaped like an embezzlement state.
        auto shape = embezzlement(4).coefficients;
        CVector v = CVector::Zero(16);
        for (int k = 0; k < 4; k++) {
            v[k * 4 + k] = shape[k];
        }
        const std::size_t dp = std::size_t{1} << 12;
        auto iso = qcs_isometry(PureState(v), dp);
        double shaped = qcs_execute(iso, iso, 4).err;
        rep.info("embezzlement_shaped_err_2^12", shaped);
        rep.expect_true("embezzlement_shaped_top_rank_aligned", iso.permutation[0] == 0);
        double worst = 0.0;
        for (int k = 0; k < 4; k++) {
            worst = std::max(worst, std::abs(std::log(iso.rounded_coefficients[k] / shape[k])));
        }
        rep.expect_le("embezzlement_shaped_rounding_log_ratio", worst, std::log(1.01));
    }
    return rep;
}

SuiteReport verify_reduction(const ReductionConfig &cfg) {
    SuiteReport rep;
    rep.suite = "reduction";
    Timer timer(rep);
    auto r = run_reduction(cfg);
    auto bc = main_bound_compare(r, cfg.eps);
    if (r.exact) {
        if (r.C.empty()) {
            rep.expect_le("avg_residual", r.avg_residual, 1e-8);
        } else {
            rep.info("avg_residual", r.avg_residual);
            rep.expect_le("avg_residual_minus_question_skew", r.corrected_residual, 1e-8);
        }
        rep.expect_le("max_oracle_gap", r.max_oracle_gap, 1e-8);
    } else {
        rep.info("avg_residual", r.avg_residual);
        rep.info("stderr", r.stderr_);
        rep.info("disagreement_rate", r.disagreement_rate);
        rep.info("emb_err_mean", r.emb_err_mean);
    }
    rep.expect_ge("margin_plus_budget", bc.margin + bc.budget, 0.0);
    rep.metric("avg_p_tilde", r.avg_p_tilde);
    rep.metric("avg_p_cond", r.avg_p_cond);
    rep.metric("error_budget", r.error_budget);
    rep.metric("margin", bc.margin);
    rep.metric("p_wc", r.p_wc);
    rep.metric("threshold_met", r.threshold_met ? 1.0 : 0.0);
    return rep;
}

SuiteReport verify_bound(double eps, double s_bits, const std::vector<double> &n_grid) {
    SuiteReport rep;
    rep.suite = "bound";
    Timer timer(rep);
    double prev = kInfinity;
    bool started = false;
    bool monotone = true;
    for (double n : n_grid) {
        auto b = theorem1_bound(eps, s_bits, n);
        double raw = s_bits * std::log2(n) / (std::pow(eps, 17.0) * std::pow(n, 0.25));
        std::string tag = "n=" + std::to_string(std::log2(n)).substr(0, 5) + "bits";
        rep.expect_le("raw_" + tag, std::abs(b.raw - raw), 1e-12 * std::max(1.0, raw));
        rep.expect_true("clamp_" + tag, b.bound_value == std::min(1.0, b.raw) && b.vacuous == (b.raw >= 1.0));
        if (!b.vacuous) {
            if (started && b.bound_value > prev) {
                monotone = false;
            }
            started = true;
            prev = b.bound_value;
        }
    }
    rep.expect_true("monotone_once_nonvacuous", monotone);
    return rep;
}

}  // namespace parrep
