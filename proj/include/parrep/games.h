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

#ifndef PARREP_GAMES_H
#define PARREP_GAMES_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parrep/prob.h"

namespace parrep {

/// Two-player one-round game: question distribution mu over (x, y) and a
/// 0/1 predicate V(x, y, a, b).
struct Game {
    std::string name;
    int x_size = 0;
    int y_size = 0;
    int a_size = 0;
    int b_size = 0;
    std::vector<double> mu;              // row-major [x][y]
    std::vector<std::uint8_t> predicate;  // row-major [x][y][a][b]

    double mu_at(int x, int y) const {
        return mu[static_cast<std::size_t>(x) * y_size + y];
    }
    bool win(int x, int y, int a, int b) const {
        return predicate[((static_cast<std::size_t>(x) * y_size + y) * a_size + a) * b_size + b] != 0;
    }
    double answer_bits() const;
    FiniteDistribution mu_distribution() const;
};

struct GameReport {
    bool valid = true;
    double answer_bits = 0.0;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    std::vector<std::pair<int, int>> support;
};

GameReport validate_game(const Game &g);
/// Throws std::invalid_argument listing the errors of an invalid game.
void require_valid(const Game &g);

// Fixtures.
Game chsh_game();
/// Predicate identically 1; uniform mu on 2x2 questions, binary answers.
Game trivial_game();
/// Three questions per player, nonuniform mu, binary answers.
Game asym3_game();
/// Looks up "chsh", "trivial" or "asym3".
Game fixture_game(std::string_view name);

/// Index arithmetic for G^n. Tuple indices are row-major over coordinates
/// (coordinate 0 is the most significant digit).
class RepeatedGame {
   public:
    RepeatedGame(Game g, int n);

    const Game &game() const {
        return g_;
    }
    int n() const {
        return n_;
    }
    std::size_t num_x() const {
        return nx_;
    }
    std::size_t num_y() const {
        return ny_;
    }
    std::size_t num_a() const {
        return na_;
    }
    std::size_t num_b() const {
        return nb_;
    }

    static int digit(std::size_t tuple, int coord, int n, int base);
    static std::size_t with_digit(std::size_t tuple, int coord, int n, int base, int value);
    int x_digit(std::size_t t, int coord) const {
        return digit(t, coord, n_, g_.x_size);
    }
    int y_digit(std::size_t t, int coord) const {
        return digit(t, coord, n_, g_.y_size);
    }
    int a_digit(std::size_t t, int coord) const {
        return digit(t, coord, n_, g_.a_size);
    }
    int b_digit(std::size_t t, int coord) const {
        return digit(t, coord, n_, g_.b_size);
    }

    double mu(std::size_t xt, std::size_t yt) const;
    bool win_coord(int coord, std::size_t xt, std::size_t yt, std::size_t at, std::size_t bt) const;
    bool win(std::size_t xt, std::size_t yt, std::size_t at, std::size_t bt) const;

   private:
    Game g_;
    int n_;
    std::size_t nx_, ny_, na_, nb_;
};

struct QuestionTuple {
    std::size_t x;
    std::size_t y;
    double weight;
};

/// All (x_[n], y_[n]) with product weights mu^n; requires (|X||Y|)^n <= 1e6.
std::vector<QuestionTuple> enumerate_tuples(const Game &g, int n);

/// Per-coordinate variables X1..Xn, Y1..Yn, A1..An, B1..Bn of a repeated game.
std::vector<Variable> repeated_variables(const Game &g, int n);

/// Event "V(x_i, y_i, a_i, b_i) = 1 for all i in S" over any table holding the
/// variables Xi, Yi, Ai, Bi (1-based names). S holds 0-based coordinates.
Event win_set(const Game &g, int n, std::span<const int> S, const FiniteDistribution &space);

// Game file format (JSON text):
//   {"name": ..., "x_size": .., "y_size": .., "a_size": .., "b_size": ..,
//    "mu": [row-major numbers or "p/q" strings], "predicate": [0/1 flat]}
std::string game_to_text(const Game &g);
Game game_from_text(std::string_view text);
Game load_game(const std::string &path);
void save_game(const Game &g, const std::string &path);

/// Parses "0.25", "1/4", "3e-2".
double parse_rational(std::string_view token);

}  // namespace parrep

#endif
