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

#include "parrep/games.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace parrep {

using nlohmann::json;

double Game::answer_bits() const {
    return std::log2(static_cast<double>(a_size) * static_cast<double>(b_size));
}

FiniteDistribution Game::mu_distribution() const {
    return FiniteDistribution::from_masses({{"X", x_size}, {"Y", y_size}}, mu);
}

GameReport validate_game(const Game &g) {
    GameReport r;
    auto fail = [&](std::string msg) {
        r.valid = false;
        r.errors.push_back(std::move(msg));
    };
    if (g.x_size <= 0 || g.y_size <= 0 || g.a_size <= 0 || g.b_size <= 0) {
        fail("alphabet sizes must be positive");
        return r;
    }
    std::size_t nq = static_cast<std::size_t>(g.x_size) * g.y_size;
    if (g.mu.size() != nq) {
        fail("mu has " + std::to_string(g.mu.size()) + " entries, expected " + std::to_string(nq));
    }
    if (g.predicate.size() != nq * g.a_size * g.b_size) {
        fail("predicate is ragged: " + std::to_string(g.predicate.size()) + " entries, expected " +
             std::to_string(nq * g.a_size * g.b_size));
    }
    if (!r.valid) {
        return r;
    }
    for (double m : g.mu) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            fail("mu has a negative or non-finite entry");
            return r;
        }
    }
    double total = stable_sum(g.mu);
    if (std::abs(total - 1.0) > 1e-12) {
        fail("mu sums to " + std::to_string(total) + ", not 1");
    }
    for (auto p : g.predicate) {
        if (p > 1) {
            fail("predicate entries must be 0 or 1");
            break;
        }
    }
    for (int x = 0; x < g.x_size; x++) {
        double row = 0;
        for (int y = 0; y < g.y_size; y++) {
            if (g.mu_at(x, y) > 0) {
                r.support.emplace_back(x, y);
            }
            row += g.mu_at(x, y);
        }
        if (row == 0.0) {
            r.warnings.push_back("question x=" + std::to_string(x) + " has no mass under mu");
        }
    }
    for (int y = 0; y < g.y_size; y++) {
        double col = 0;
        for (int x = 0; x < g.x_size; x++) {
            col += g.mu_at(x, y);
        }
        if (col == 0.0) {
            r.warnings.push_back("question y=" + std::to_string(y) + " has no mass under mu");
        }
    }
    r.answer_bits = g.answer_bits();
    return r;
}

void require_valid(const Game &g) {
    auto r = validate_game(g);
    if (!r.valid) {
        std::string msg = "invalid game '" + g.name + "':";
        for (const auto &e : r.errors) {
            msg += " " + e + ";";
        }
        throw std::invalid_argument(msg);
    }
}

namespace {

Game binary_game(std::string name, int xs, int ys, std::vector<double> mu, auto &&pred) {
    Game g{std::move(name), xs, ys, 2, 2, std::move(mu), {}};
    g.predicate.resize(static_cast<std::size_t>(xs) * ys * 4);
    for (int x = 0; x < xs; x++) {
        for (int y = 0; y < ys; y++) {
            for (int a = 0; a < 2; a++) {
                for (int b = 0; b < 2; b++) {
                    g.predicate[((static_cast<std::size_t>(x) * ys + y) * 2 + a) * 2 + b] = pred(x, y, a, b) ? 1 : 0;
                }
            }
        }
    }
    return g;
}

}  // namespace

Game chsh_game() {
    return binary_game("chsh", 2, 2, std::vector<double>(4, 0.25), [](int x, int y, int a, int b) {
        return (a ^ b) == (x & y);
    });
}

Game trivial_game() {
    return binary_game("trivial", 2, 2, std::vector<double>(4, 0.25), [](int, int, int, int) {
        return true;
    });
}

Game asym3_game() {
    std::vector<double> mu = {0.2, 0.1, 0.05, 0.1, 0.15, 0.1, 0.05, 0.1, 0.15};
    return binary_game("asym3", 3, 3, std::move(mu), [](int x, int y, int a, int b) {
        return (a ^ b) == (x + y >= 3 ? 1 : 0);
    });
}

Game fixture_game(std::string_view name) {
    if (name == "chsh") {
        return chsh_game();
    }
    if (name == "trivial") {
        return trivial_game();
    }
    if (name == "asym3") {
        return asym3_game();
    }
    throw std::invalid_argument("unknown game fixture '" + std::string(name) + "'");
}

namespace {

std::size_t checked_pow(std::size_t base, int n, std::size_t cap) {
    std::size_t out = 1;
    for (int k = 0; k < n; k++) {
        out *= base;
        if (out > cap) {
            throw std::length_error("repeated index space exceeds size cap");
        }
    }
    return out;
}

}  // namespace

RepeatedGame::RepeatedGame(Game g, int n) : g_(std::move(g)), n_(n) {
    if (n < 1) {
        throw std::invalid_argument("repetition count must be >= 1");
    }
    require_valid(g_);
    constexpr std::size_t cap = std::size_t{1} << 40;
    nx_ = checked_pow(g_.x_size, n, cap);
    ny_ = checked_pow(g_.y_size, n, cap);
    na_ = checked_pow(g_.a_size, n, cap);
    nb_ = checked_pow(g_.b_size, n, cap);
}

int RepeatedGame::digit(std::size_t tuple, int coord, int n, int base) {
    for (int k = n - 1; k > coord; k--) {
        tuple /= static_cast<std::size_t>(base);
    }
    return static_cast<int>(tuple % static_cast<std::size_t>(base));
}

std::size_t RepeatedGame::with_digit(std::size_t tuple, int coord, int n, int base, int value) {
    std::size_t place = 1;
    for (int k = n - 1; k > coord; k--) {
        place *= static_cast<std::size_t>(base);
    }
    int old = static_cast<int>((tuple / place) % static_cast<std::size_t>(base));
    return tuple + (static_cast<std::size_t>(value) - static_cast<std::size_t>(old)) * place;
}

double RepeatedGame::mu(std::size_t xt, std::size_t yt) const {
    double w = 1.0;
    for (int j = n_ - 1; j >= 0; j--) {
        w *= g_.mu_at(static_cast<int>(xt % g_.x_size), static_cast<int>(yt % g_.y_size));
        xt /= g_.x_size;
        yt /= g_.y_size;
    }
    return w;
}

bool RepeatedGame::win_coord(int coord, std::size_t xt, std::size_t yt, std::size_t at, std::size_t bt) const {
    return g_.win(x_digit(xt, coord), y_digit(yt, coord), a_digit(at, coord), b_digit(bt, coord));
}

bool RepeatedGame::win(std::size_t xt, std::size_t yt, std::size_t at, std::size_t bt) const {
    for (int j = n_ - 1; j >= 0; j--) {
        if (!g_.win(static_cast<int>(xt % g_.x_size), static_cast<int>(yt % g_.y_size),
                    static_cast<int>(at % g_.a_size), static_cast<int>(bt % g_.b_size))) {
            return false;
        }
        xt /= g_.x_size;
        yt /= g_.y_size;
        at /= g_.a_size;
        bt /= g_.b_size;
    }
    return true;
}

std::vector<QuestionTuple> enumerate_tuples(const Game &g, int n) {
    require_valid(g);
    std::size_t pairs = checked_pow(static_cast<std::size_t>(g.x_size) * g.y_size, n, 1'000'000);
    (void)pairs;
    RepeatedGame rg(g, n);
    std::vector<QuestionTuple> out;
    out.reserve(rg.num_x() * rg.num_y());
    for (std::size_t x = 0; x < rg.num_x(); x++) {
        for (std::size_t y = 0; y < rg.num_y(); y++) {
            out.push_back({x, y, rg.mu(x, y)});
        }
    }
    return out;
}

std::vector<Variable> repeated_variables(const Game &g, int n) {
    std::vector<Variable> vars;
    for (int i = 1; i <= n; i++) {
        vars.push_back({"X" + std::to_string(i), g.x_size});
    }
    for (int i = 1; i <= n; i++) {
        vars.push_back({"Y" + std::to_string(i), g.y_size});
    }
    for (int i = 1; i <= n; i++) {
        vars.push_back({"A" + std::to_string(i), g.a_size});
    }
    for (int i = 1; i <= n; i++) {
        vars.push_back({"B" + std::to_string(i), g.b_size});
    }
    return vars;
}

Event win_set(const Game &g, int n, std::span<const int> S, const FiniteDistribution &space) {
    struct Slots {
        int x, y, a, b;
    };
    std::vector<Slots> slots;
    for (int i : S) {
        if (i < 0 || i >= n) {
            throw std::out_of_range("win_set: coordinate " + std::to_string(i) + " outside [0, n)");
        }
        auto s = std::to_string(i + 1);
        slots.push_back({space.var_index("X" + s), space.var_index("Y" + s), space.var_index("A" + s),
                         space.var_index("B" + s)});
    }
    return Event::from_predicate(space, [&](std::size_t k) {
        for (const auto &s : slots) {
            if (!g.win(space.value(k, s.x), space.value(k, s.y), space.value(k, s.a), space.value(k, s.b))) {
                return false;
            }
        }
        return true;
    });
}

double parse_rational(std::string_view token) {
    auto parse_double = [](std::string_view s) {
        std::string tmp(s);
        std::size_t used = 0;
        double v = std::stod(tmp, &used);
        if (used != tmp.size()) {
            throw std::invalid_argument("malformed number '" + tmp + "'");
        }
        return v;
    };
    auto slash = token.find('/');
    if (slash == std::string_view::npos) {
        return parse_double(token);
    }
    double num = parse_double(token.substr(0, slash));
    double den = parse_double(token.substr(slash + 1));
    if (den == 0.0) {
        throw std::invalid_argument("zero denominator in '" + std::string(token) + "'");
    }
    return num / den;
}

std::string game_to_text(const Game &g) {
    json j;
    j["name"] = g.name;
    j["x_size"] = g.x_size;
    j["y_size"] = g.y_size;
    j["a_size"] = g.a_size;
    j["b_size"] = g.b_size;
    j["mu"] = g.mu;
    std::vector<int> pred(g.predicate.begin(), g.predicate.end());
    j["predicate"] = pred;
    return j.dump(1) + "\n";
}

Game game_from_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(std::string("game file: ") + e.what());
    }
    Game g;
    try {
        g.name = j.value("name", std::string("unnamed"));
        g.x_size = j.at("x_size").get<int>();
        g.y_size = j.at("y_size").get<int>();
        g.a_size = j.at("a_size").get<int>();
        g.b_size = j.at("b_size").get<int>();
        for (const auto &m : j.at("mu")) {
            g.mu.push_back(m.is_string() ? parse_rational(m.get<std::string>()) : m.get<double>());
        }
        for (const auto &p : j.at("predicate")) {
            int v = p.get<int>();
            if (v != 0 && v != 1) {
                throw std::invalid_argument("predicate entries must be 0 or 1");
            }
            g.predicate.push_back(static_cast<std::uint8_t>(v));
        }
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("game file: ") + e.what());
    }
    require_valid(g);
    return g;
}

Game load_game(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open game file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return game_from_text(ss.str());
}

void save_game(const Game &g, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write game file '" + path + "'");
    }
    out << game_to_text(g);
}

}  // namespace parrep
