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

#ifndef PARREP_CORRSAMP_H
#define PARREP_CORRSAMP_H

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "parrep/matcore.h"
#include "parrep/prob.h"

namespace parrep {

/// Shared randomness: a stream of (universe element, uniform real) pairs.
/// Seeded from (seed, id) so distinct ids give independent streams.
class SharedRandomStream {
   public:
    SharedRandomStream(std::uint64_t seed, std::uint64_t id, std::size_t universe);

    std::pair<std::size_t, double> next();
    std::size_t universe() const {
        return universe_;
    }

   private:
    std::mt19937_64 gen_;
    std::size_t universe_;
};

struct CorrSample {
    std::size_t p_out = 0;
    std::size_t q_out = 0;
    bool agreed = false;
    bool failed = false;  // either player ran out of draws
    std::size_t draws = 0;
};

/// Rejection protocol: each player accepts the first draw (u, p) with
/// p < P(u) (resp. Q(u)). Both read the same stream. max_draws = 0 means
/// 40 * |universe|.
CorrSample classical_corr_sample(std::span<const double> P, std::span<const double> Q, SharedRandomStream &stream,
                                 std::size_t max_draws = 0);
CorrSample classical_corr_sample(const FiniteDistribution &P, const FiniteDistribution &Q, SharedRandomStream &stream,
                                 std::size_t max_draws = 0);

/// Coefficients c_j = j^{-1/2} / sqrt(H_N), j = 1..N, stored in order.
struct EmbezzlementVector {
    std::size_t dim = 0;
    std::vector<double> coefficients;
};

EmbezzlementVector embezzlement(std::size_t N);

/// Local map taking the shared embezzlement register of dimension d*d' to
/// (target d) (x) (junk d'). Rank j of the embezzlement coefficients goes to
/// index permutation[j] = k * d' + l; k then goes through the own Schmidt basis.
struct AlignmentIsometry {
    int d = 1;
    std::size_t d_prime = 1;
    double alpha = 0.01;
    std::vector<std::uint32_t> permutation;
    CMatrix left_rotation;   // Alice side: columns u_k
    CMatrix right_rotation;  // Bob side: columns v_k
    std::vector<double> exact_coefficients;
    std::vector<double> rounded_coefficients;

    bool operator==(const AlignmentIsometry &other) const;
};

inline constexpr std::size_t kMaxEmbezzleDim = std::size_t{1} << 24;

/// Schmidt coefficients rounded to the grid (1 + alpha)^{-k}, renormalized.
std::vector<double> round_to_grid(std::span<const double> s, double alpha);

AlignmentIsometry qcs_isometry(const PureState &own_state, std::size_t d_prime, double alpha = 0.01);

struct QcsResult {
    CMatrix produced_target;  // d*d density on (Alice target) (x) (Bob target)
    double err = 0.0;
};

/// Alice applies iso_A (left rotation), Bob iso_B (right rotation) to
/// |E_{d d'}>. err is the distance to |reference> (x) |E_{d'}>; by default
/// reference is iso_A's unrounded own state.
QcsResult qcs_execute(const AlignmentIsometry &iso_a, const AlignmentIsometry &iso_b, int d,
                      const std::optional<PureState> &reference = std::nullopt);

}  // namespace parrep

#endif
