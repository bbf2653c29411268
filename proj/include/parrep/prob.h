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

#ifndef PARREP_PROB_H
#define PARREP_PROB_H

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace parrep {

/// Largest dense assignment space a FiniteDistribution may hold.
inline constexpr std::size_t kMaxTableEntries = 10'000'000;

struct Variable {
    std::string name;
    int size;

    bool operator==(const Variable &other) const = default;
};

class ZeroProbabilityEvent : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Dense joint distribution over named finite variables.
///
/// Assignments are indexed row-major: the first variable is the most
/// significant digit. Weights are nonnegative and sum to 1 within 1e-12.
class FiniteDistribution {
   public:
    FiniteDistribution(std::vector<Variable> variables, std::vector<double> weights);

    /// Normalizes nonnegative masses. Throws ZeroProbabilityEvent when the
    /// total mass is at most 1e-15.
    static FiniteDistribution from_masses(std::vector<Variable> variables, std::vector<double> masses);
    static FiniteDistribution uniform(std::vector<Variable> variables);

    const std::vector<Variable> &variables() const {
        return vars_;
    }
    std::size_t size() const {
        return weights_.size();
    }
    const std::vector<double> &weights() const {
        return weights_;
    }
    double weight(std::size_t index) const {
        return weights_[index];
    }

    /// Position of a variable; throws std::invalid_argument if unknown.
    int var_index(std::string_view name) const;
    bool has_variable(std::string_view name) const;

    /// Value of variable `var` in assignment `index`.
    int value(std::size_t index, int var) const {
        return static_cast<int>((index / strides_[var]) % vars_[var].size);
    }
    std::vector<int> decode(std::size_t index) const;
    std::size_t encode(std::span<const int> values) const;
    std::size_t stride(int var) const {
        return strides_[var];
    }

   private:
    std::vector<Variable> vars_;
    std::vector<std::size_t> strides_;
    std::vector<double> weights_;
};

/// Space size of a variable list; throws std::length_error over the cap.
std::size_t assignment_count(std::span<const Variable> variables);

/// A subset of a distribution's assignment space.
class Event {
   public:
    explicit Event(std::vector<bool> mask) : mask_(std::move(mask)) {
    }
    static Event full(std::size_t size) {
        return Event(std::vector<bool>(size, true));
    }
    static Event from_predicate(const FiniteDistribution &space, const std::function<bool(std::size_t)> &pred);

    bool contains(std::size_t index) const {
        return mask_[index];
    }
    std::size_t size() const {
        return mask_.size();
    }
    std::size_t count() const;
    bool subset_of(const Event &other) const;
    Event operator&(const Event &other) const;

   private:
    std::vector<bool> mask_;
};

double probability(const FiniteDistribution &d, const Event &e);

/// Renormalized restriction to e; throws ZeroProbabilityEvent if P(e) <= 1e-15.
FiniteDistribution condition(const FiniteDistribution &d, const Event &e);

/// Sums out all variables not listed; output variables follow `names` order.
FiniteDistribution marginal(const FiniteDistribution &d, std::span<const std::string> names);
FiniteDistribution marginal(const FiniteDistribution &d, std::initializer_list<std::string> names);

/// Total variation distance 0.5 * sum |P - Q|; spaces must match exactly.
double tv_distance(const FiniteDistribution &p, const FiniteDistribution &q);

/// Independent product P x Q (variable names must be disjoint).
FiniteDistribution product(const FiniteDistribution &p, const FiniteDistribution &q);

/// (P_{X0} P_{Y|X1})(x, y) = P_{X0}(x) * P_{Y|X1=x}(y). The conditional is
/// queried only on the support of P_{X0} and must return a distribution over
/// `y_variables` (row-major).
FiniteDistribution product_extend(
    const FiniteDistribution &px,
    std::vector<Variable> y_variables,
    const std::function<std::vector<double>(std::span<const int> x)> &conditional);

/// Compensated sum.
double stable_sum(std::span<const double> values);

}  // namespace parrep

#endif
