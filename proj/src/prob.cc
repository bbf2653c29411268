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

#include "parrep/prob.h"

#include <cmath>
#include <set>

namespace parrep {

double stable_sum(std::span<const double> values) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

std::size_t assignment_count(std::span<const Variable> variables) {
    std::size_t n = 1;
    for (const auto &v : variables) {
        if (v.size <= 0) {
            throw std::invalid_argument("variable '" + v.name + "' has empty label set");
        }
        n *= static_cast<std::size_t>(v.size);
        if (n > kMaxTableEntries) {
            throw std::length_error("assignment space exceeds the dense table cap");
        }
    }
    return n;
}

FiniteDistribution::FiniteDistribution(std::vector<Variable> variables, std::vector<double> weights)
    : vars_(std::move(variables)), weights_(std::move(weights)) {
    std::set<std::string> seen;
    for (const auto &v : vars_) {
        if (!seen.insert(v.name).second) {
            throw std::invalid_argument("duplicate variable name '" + v.name + "'");
        }
    }
    if (assignment_count(vars_) != weights_.size()) {
        throw std::invalid_argument("weight count does not match assignment space");
    }
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("weights must be finite and nonnegative");
        }
    }
    if (std::abs(stable_sum(weights_) - 1.0) > 1e-12) {
        throw std::invalid_argument("weights do not sum to 1");
    }
    strides_.assign(vars_.size(), 1);
    for (int k = static_cast<int>(vars_.size()) - 2; k >= 0; k--) {
        strides_[k] = strides_[k + 1] * static_cast<std::size_t>(vars_[k + 1].size);
    }
}

FiniteDistribution FiniteDistribution::from_masses(std::vector<Variable> variables, std::vector<double> masses) {
    double total = stable_sum(masses);
    if (!(total > 1e-15)) {
        throw ZeroProbabilityEvent("total mass is zero");
    }
    for (double &m : masses) {
        m = std::max(m, 0.0) / total;
    }
    return FiniteDistribution(std::move(variables), std::move(masses));
}

FiniteDistribution FiniteDistribution::uniform(std::vector<Variable> variables) {
    std::size_t n = assignment_count(variables);
    return FiniteDistribution(std::move(variables), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

int FiniteDistribution::var_index(std::string_view name) const {
    for (std::size_t k = 0; k < vars_.size(); k++) {
        if (vars_[k].name == name) {
            return static_cast<int>(k);
        }
    }
    throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
}

bool FiniteDistribution::has_variable(std::string_view name) const {
    for (const auto &v : vars_) {
        if (v.name == name) {
            return true;
        }
    }
    return false;
}

std::vector<int> FiniteDistribution::decode(std::size_t index) const {
    std::vector<int> out(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); k++) {
        out[k] = value(index, static_cast<int>(k));
    }
    return out;
}

std::size_t FiniteDistribution::encode(std::span<const int> values) const {
    if (values.size() != vars_.size()) {
        throw std::invalid_argument("encode: wrong number of values");
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < vars_.size(); k++) {
        if (values[k] < 0 || values[k] >= vars_[k].size) {
            throw std::out_of_range("encode: value out of range for '" + vars_[k].name + "'");
        }
        idx += strides_[k] * static_cast<std::size_t>(values[k]);
    }
    return idx;
}

Event Event::from_predicate(const FiniteDistribution &space, const std::function<bool(std::size_t)> &pred) {
    std::vector<bool> mask(space.size());
    for (std::size_t k = 0; k < space.size(); k++) {
        mask[k] = pred(k);
    }
    return Event(std::move(mask));
}

std::size_t Event::count() const {
    std::size_t c = 0;
    for (bool b : mask_) {
        c += b ? 1 : 0;
    }
    return c;
}

bool Event::subset_of(const Event &other) const {
    if (other.size() != size()) {
        throw std::invalid_argument("events over different spaces");
    }
    for (std::size_t k = 0; k < mask_.size(); k++) {
        if (mask_[k] && !other.mask_[k]) {
            return false;
        }
    }
    return true;
}

Event Event::operator&(const Event &other) const {
    if (other.size() != size()) {
        throw std::invalid_argument("events over different spaces");
    }
    std::vector<bool> out(mask_.size());
    for (std::size_t k = 0; k < mask_.size(); k++) {
        out[k] = mask_[k] && other.mask_[k];
    }
    return Event(std::move(out));
}

double probability(const FiniteDistribution &d, const Event &e) {
    if (e.size() != d.size()) {
        throw std::invalid_argument("event is not over this distribution's space");
    }
    std::vector<double> kept;
    kept.reserve(d.size());
    for (std::size_t k = 0; k < d.size(); k++) {
        if (e.contains(k)) {
            kept.push_back(d.weight(k));
        }
    }
    return stable_sum(kept);
}

FiniteDistribution condition(const FiniteDistribution &d, const Event &e) {
    double pe = probability(d, e);
    if (pe <= 1e-15) {
        throw ZeroProbabilityEvent("conditioning on an event of probability " + std::to_string(pe));
    }
    std::vector<double> w(d.size(), 0.0);
    for (std::size_t k = 0; k < d.size(); k++) {
        if (e.contains(k)) {
            w[k] = d.weight(k);
        }
    }
    return FiniteDistribution::from_masses(d.variables(), std::move(w));
}

FiniteDistribution marginal(const FiniteDistribution &d, std::span<const std::string> names) {
    if (names.empty()) {
        throw std::invalid_argument("marginal: empty variable list");
    }
    std::vector<int> idx;
    std::vector<Variable> vars;
    for (const auto &name : names) {
        idx.push_back(d.var_index(name));
        vars.push_back(d.variables()[idx.back()]);
    }
    std::vector<double> w(assignment_count(vars), 0.0);
    for (std::size_t k = 0; k < d.size(); k++) {
        double p = d.weight(k);
        if (p == 0.0) {
            continue;
        }
        std::size_t out = 0;
        for (std::size_t j = 0; j < idx.size(); j++) {
            out = out * static_cast<std::size_t>(vars[j].size) + static_cast<std::size_t>(d.value(k, idx[j]));
        }
        w[out] += p;
    }
    return FiniteDistribution::from_masses(std::move(vars), std::move(w));
}

FiniteDistribution marginal(const FiniteDistribution &d, std::initializer_list<std::string> names) {
    std::vector<std::string> v(names);
    return marginal(d, std::span<const std::string>(v));
}

double tv_distance(const FiniteDistribution &p, const FiniteDistribution &q) {
    if (p.variables() != q.variables()) {
        throw std::invalid_argument("tv_distance: variable spaces differ");
    }
    std::vector<double> diffs(p.size());
    for (std::size_t k = 0; k < p.size(); k++) {
        diffs[k] = std::abs(p.weight(k) - q.weight(k));
    }
    return std::min(1.0, 0.5 * stable_sum(diffs));
}

FiniteDistribution product(const FiniteDistribution &p, const FiniteDistribution &q) {
    std::vector<Variable> vars = p.variables();
    vars.insert(vars.end(), q.variables().begin(), q.variables().end());
    std::vector<double> w;
    w.reserve(assignment_count(vars));
    for (std::size_t i = 0; i < p.size(); i++) {
        for (std::size_t j = 0; j < q.size(); j++) {
            w.push_back(p.weight(i) * q.weight(j));
        }
    }
    return FiniteDistribution::from_masses(std::move(vars), std::move(w));
}

FiniteDistribution product_extend(
    const FiniteDistribution &px,
    std::vector<Variable> y_variables,
    const std::function<std::vector<double>(std::span<const int> x)> &conditional) {
    std::size_t ny = assignment_count(y_variables);
    std::vector<Variable> vars = px.variables();
    vars.insert(vars.end(), y_variables.begin(), y_variables.end());
    std::vector<double> w(assignment_count(vars), 0.0);
    for (std::size_t i = 0; i < px.size(); i++) {
        if (px.weight(i) == 0.0) {
            continue;
        }
        auto x = px.decode(i);
        auto cond = conditional(x);
        if (cond.size() != ny) {
            throw std::invalid_argument("product_extend: conditional has wrong size");
        }
        if (std::abs(stable_sum(cond) - 1.0) > 1e-12) {
            throw std::invalid_argument("product_extend: conditional is not normalized");
        }
        for (std::size_t j = 0; j < ny; j++) {
            w[i * ny + j] = px.weight(i) * cond[j];
        }
    }
    return FiniteDistribution::from_masses(std::move(vars), std::move(w));
}

}  // namespace parrep
