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

#include "parrep/corrsamp.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace parrep {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

SharedRandomStream::SharedRandomStream(std::uint64_t seed, std::uint64_t id, std::size_t universe)
    : gen_(seeded(seed, id)), universe_(universe) {
    if (universe == 0) {
        throw std::invalid_argument("SharedRandomStream: empty universe");
    }
}

std::pair<std::size_t, double> SharedRandomStream::next() {
    const double scale = 0x1.0p-53;
    double a = static_cast<double>(gen_() >> 11) * scale;
    double p = static_cast<double>(gen_() >> 11) * scale;
    auto u = static_cast<std::size_t>(a * static_cast<double>(universe_));
    return {std::min(u, universe_ - 1), p};
}

CorrSample classical_corr_sample(std::span<const double> P, std::span<const double> Q, SharedRandomStream &stream,
                                 std::size_t max_draws) {
    if (P.size() != Q.size() || P.size() != stream.universe()) {
        throw std::invalid_argument("classical_corr_sample: P, Q and the stream disagree on the universe");
    }
    if (max_draws == 0) {
        max_draws = 40 * P.size();
    }
    CorrSample out;
    std::optional<std::size_t> ia, ib;
    for (std::size_t t = 0; t < max_draws && !(ia && ib); t++) {
        auto [u, p] = stream.next();
        out.draws++;
        if (!ia && p < P[u]) {
            ia = t;
            out.p_out = u;
        }
        if (!ib && p < Q[u]) {
            ib = t;
            out.q_out = u;
        }
    }
    out.failed = !(ia && ib);
    out.agreed = !out.failed && *ia == *ib;
    return out;
}

CorrSample classical_corr_sample(const FiniteDistribution &P, const FiniteDistribution &Q, SharedRandomStream &stream,
                                 std::size_t max_draws) {
    if (P.variables() != Q.variables()) {
        throw std::invalid_argument("classical_corr_sample: distributions over different variables");
    }
    return classical_corr_sample(std::span<const double>(P.weights()), std::span<const double>(Q.weights()), stream,
                                 max_draws);
}

EmbezzlementVector embezzlement(std::size_t N) {
    if (N < 1) {
        throw std::invalid_argument("embezzlement: N must be >= 1");
    }
    // Kahan sum from the small end.
    double h = 0.0, comp = 0.0;
    for (std::size_t j = N; j >= 1; j--) {
        double y = 1.0 / static_cast<double>(j) - comp;
        double t = h + y;
        comp = (t - h) - y;
        h = t;
    }
    EmbezzlementVector e;
    e.dim = N;
    e.coefficients.resize(N);
    const double norm = 1.0 / std::sqrt(h);
    for (std::size_t j = 0; j < N; j++) {
        e.coefficients[j] = norm / std::sqrt(static_cast<double>(j + 1));
    }
    return e;
}

bool AlignmentIsometry::operator==(const AlignmentIsometry &o) const {
    auto same = [](const CMatrix &a, const CMatrix &b) {
        return a.rows() == b.rows() && a.cols() == b.cols() &&
               std::equal(a.data(), a.data() + a.size(), b.data(), [](const Complex &x, const Complex &y) {
                   return x.real() == y.real() && x.imag() == y.imag();
               });
    };
    return d == o.d && d_prime == o.d_prime && alpha == o.alpha && permutation == o.permutation &&
           same(left_rotation, o.left_rotation) && same(right_rotation, o.right_rotation) &&
           exact_coefficients == o.exact_coefficients && rounded_coefficients == o.rounded_coefficients;
}

std::vector<double> round_to_grid(std::span<const double> s, double alpha) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("round_to_grid: alpha must be positive");
    }
    const double step = std::log1p(alpha);
    std::vector<double> out(s.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < s.size(); k++) {
        if (s[k] > 0.0) {
            double e = std::round(-std::log(s[k]) / step);
            out[k] = std::exp(-e * step);
            total += out[k] * out[k];
        }
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("round_to_grid: zero vector");
    }
    const double nrm = std::sqrt(total);
    for (double &v : out) {
        v /= nrm;
    }
    return out;
}

namespace {

// Schmidt decomposition with a reproducible basis inside each block of
// (near-)equal coefficients: the left vectors are Gram-Schmidt of the block
// projector applied to e_0, e_1, ..., which is continuous in the state, so two
// parties holding almost the same state pick almost the same basis.
SchmidtDecomposition canonical_schmidt(const PureState &psi, int d) {
    constexpr double kBlockTol = 1e-9;
    constexpr double kZeroTol = 1e-12;
    auto sd = schmidt(psi, d, d);
    const CMatrix mat = unflatten(psi.amplitudes(), d, d);
    auto canonical_block = [d](const CMatrix &block) {
        const CMatrix proj = block * block.adjoint();
        CMatrix out(d, block.cols());
        int filled = 0;
        for (int e = 0; e < d && filled < block.cols(); e++) {
            CVector v = proj.col(e);
            for (int k = 0; k < filled; k++) {
                v -= out.col(k) * out.col(k).dot(v);
            }
            double nv = v.norm();
            if (nv > 1e-6) {
                out.col(filled++) = v / nv;
            }
        }
        return out;
    };
    int start = 0;
    while (start < d) {
        int end = start + 1;
        while (end < d && sd.coefficients[start] - sd.coefficients[end] <= kBlockTol) {
            end++;
        }
        const int len = end - start;
        if (sd.coefficients[start] <= kZeroTol) {
            sd.left_basis.middleCols(start, len) = canonical_block(sd.left_basis.middleCols(start, len));
            sd.right_basis.middleCols(start, len) = canonical_block(sd.right_basis.middleCols(start, len));
        } else {
            CMatrix left = canonical_block(sd.left_basis.middleCols(start, len));
            sd.left_basis.middleCols(start, len) = left;
            for (int k = 0; k < len; k++) {
                CVector v = mat.transpose() * left.col(k).conjugate();
                sd.right_basis.col(start + k) = v / v.norm();
            }
        }
        start = end;
    }
    return sd;
}

}  // namespace

AlignmentIsometry qcs_isometry(const PureState &own_state, std::size_t d_prime, double alpha) {
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(own_state.dim()))));
    if (static_cast<long>(d) * d != own_state.dim()) {
        throw std::invalid_argument("qcs_isometry: state is not on d*d");
    }
    if (d_prime < 1 || static_cast<std::size_t>(d) * d_prime > kMaxEmbezzleDim) {
        throw std::invalid_argument("qcs_isometry: need 1 <= d * d' <= 2^24");
    }
    auto sd = canonical_schmidt(own_state, d);
    AlignmentIsometry iso;
    iso.d = d;
    iso.d_prime = d_prime;
    iso.alpha = alpha;
    iso.left_rotation = sd.left_basis;
    iso.right_rotation = sd.right_basis;
    iso.exact_coefficients.assign(sd.coefficients.data(), sd.coefficients.data() + d);
    iso.rounded_coefficients = round_to_grid(iso.exact_coefficients, alpha);

    // Targets s_k c'_l sorted descending; each row k is already descending in l.
    auto junk = embezzlement(d_prime).coefficients;
    using Item = std::tuple<double, int, std::size_t>;
    auto later = [](const Item &a, const Item &b) {
        if (std::get<0>(a) != std::get<0>(b)) {
            return std::get<0>(a) < std::get<0>(b);
        }
        return std::get<1>(a) > std::get<1>(b);
    };
    std::priority_queue<Item, std::vector<Item>, decltype(later)> heap(later);
    for (int k = 0; k < d; k++) {
        heap.emplace(iso.rounded_coefficients[k] * junk[0], k, 0);
    }
    iso.permutation.reserve(static_cast<std::size_t>(d) * d_prime);
    while (!heap.empty()) {
        auto [v, k, l] = heap.top();
        heap.pop();
        iso.permutation.push_back(static_cast<std::uint32_t>(k * d_prime + l));
        if (l + 1 < d_prime) {
            heap.emplace(iso.rounded_coefficients[k] * junk[l + 1], k, l + 1);
        }
    }
    return iso;
}

QcsResult qcs_execute(const AlignmentIsometry &iso_a, const AlignmentIsometry &iso_b, int d,
                      const std::optional<PureState> &reference) {
    if (iso_a.d != d || iso_b.d != d || iso_a.d_prime != iso_b.d_prime ||
        iso_a.permutation.size() != iso_b.permutation.size()) {
        throw std::invalid_argument("qcs_execute: isometries do not match the target dimension");
    }
    const std::size_t dp = iso_a.d_prime;
    const std::size_t N = iso_a.permutation.size();
    auto emb = embezzlement(N).coefficients;
    auto junk = embezzlement(dp).coefficients;

    // Group ranks by (l_A, l_B): counting sort on l_A, then sort by l_B.
    std::vector<std::uint32_t> order(N);
    {
        std::vector<std::size_t> count(dp + 1, 0);
        for (std::size_t j = 0; j < N; j++) {
            count[iso_a.permutation[j] % dp + 1]++;
        }
        for (std::size_t l = 0; l < dp; l++) {
            count[l + 1] += count[l];
        }
        for (std::size_t j = 0; j < N; j++) {
            order[count[iso_a.permutation[j] % dp]++] = static_cast<std::uint32_t>(j);
        }
    }
    auto la = [&](std::uint32_t j) { return iso_a.permutation[j] % dp; };
    auto lb = [&](std::uint32_t j) { return iso_b.permutation[j] % dp; };
    auto key_less = [&](std::uint32_t x, std::uint32_t y) {
        return std::make_tuple(la(x), lb(x), x) < std::make_tuple(la(y), lb(y), y);
    };
    std::size_t start = 0;
    while (start < N) {
        std::size_t end = start;
        while (end < N && la(order[end]) == la(order[start])) {
            end++;
        }
        std::sort(order.begin() + start, order.begin() + end, key_less);
        start = end;
    }

    const int dd = d * d;
    CMatrix rho = CMatrix::Zero(dd, dd);
    std::vector<std::pair<int, double>> group;
    start = 0;
    while (start < N) {
        std::size_t end = start;
        group.clear();
        while (end < N && la(order[end]) == la(order[start]) && lb(order[end]) == lb(order[start])) {
            std::uint32_t j = order[end];
            int idx = static_cast<int>(iso_a.permutation[j] / dp) * d + static_cast<int>(iso_b.permutation[j] / dp);
            auto it = std::find_if(group.begin(), group.end(), [&](const auto &e) { return e.first == idx; });
            if (it == group.end()) {
                group.emplace_back(idx, emb[j]);
            } else {
                it->second += emb[j];
            }
            end++;
        }
        for (const auto &[i1, c1] : group) {
            for (const auto &[i2, c2] : group) {
                rho(i1, i2) += c1 * c2;
            }
        }
        start = end;
    }
    CMatrix rot = tensor(iso_a.left_rotation, iso_b.right_rotation);
    QcsResult out;
    out.produced_target = rot * rho * rot.adjoint();
    out.produced_target = 0.5 * (out.produced_target + out.produced_target.adjoint());

    CMatrix ref;
    if (reference) {
        if (reference->dim() != dd) {
            throw std::invalid_argument("qcs_execute: reference state has the wrong dimension");
        }
        ref = unflatten(reference->amplitudes(), d, d);
    } else {
        CVector c(d);
        for (int k = 0; k < d; k++) {
            c[k] = iso_a.exact_coefficients[k];
        }
        ref = iso_a.left_rotation * c.asDiagonal() * iso_a.right_rotation.transpose();
    }
    CMatrix h = iso_a.left_rotation.transpose() * ref.conjugate() * iso_b.right_rotation;
    if (d == 1) {
        // Direct sum of squared differences; avoids the 2 - 2<.,.> cancellation.
        const Complex h0 = h(0, 0);
        std::vector<char> hit(dp, 0);
        std::vector<double> sq;
        sq.reserve(N + dp);
        for (std::size_t j = 0; j < N; j++) {
            std::size_t pa = iso_a.permutation[j], pb = iso_b.permutation[j];
            if (pa == pb) {
                sq.push_back(std::norm(emb[j] - h0 * junk[pa]));
                hit[pa] = 1;
            } else {
                sq.push_back(emb[j] * emb[j]);
            }
        }
        for (std::size_t l = 0; l < dp; l++) {
            if (!hit[l]) {
                sq.push_back(std::norm(h0 * junk[l]));
            }
        }
        out.err = std::sqrt(stable_sum(sq));
        return out;
    }
    std::vector<double> terms;
    terms.reserve(N);
    for (std::size_t j = 0; j < N; j++) {
        std::size_t pa = iso_a.permutation[j], pb = iso_b.permutation[j];
        if (pa % dp != pb % dp) {
            continue;
        }
        terms.push_back(emb[j] * junk[pa % dp] * h(static_cast<Eigen::Index>(pa / dp), static_cast<Eigen::Index>(pb / dp)).real());
    }
    out.err = std::sqrt(std::max(0.0, 2.0 - 2.0 * stable_sum(terms)));
    return out;
}

}  // namespace parrep
