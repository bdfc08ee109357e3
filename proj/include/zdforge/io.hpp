#pragma once

#include <string>
#include <vector>

#include "zdforge/game.hpp"
#include "zdforge/zd.hpp"

namespace zdforge {

// Shortest-round-trip decimal text for a double (17 significant digits at
// most), '.' decimal separator regardless of locale.
std::string format_double(double x);

// Game file: UTF-8 JSON with fields
//   n            integer >= 2
//   delta        number in [0, 1)
//   tables       n arrays of 2 arrays of n numbers; row 0 holds the
//                action-1 payoffs indexed by count 0..n-1, row 1 action-2
//   initial_probs  n numbers in [0, 1]
//   equalizer    optional {omega, gamma, phi, leader_init}
// NaN and infinities are rejected.
GameSpec parse_game_json(const std::string& text);
std::string game_to_json(const GameSpec& game);
std::string game_to_json(const GameSpec& game, const EqualizerSpec& equalizer);
GameSpec read_game_file(const std::string& path);
void write_game_file(const std::string& path, const GameSpec& game);

bool game_json_has_equalizer(const std::string& text);
EqualizerSpec parse_equalizer_json(const std::string& text, int n);

// Strategy profile file: {"strategies": [{"probs": [...], "init_prob": x}, ...]}.
std::vector<MemoryOneStrategy> parse_strategies_json(const std::string& text, int state_count);
std::vector<MemoryOneStrategy> read_strategies_file(const std::string& path, int state_count);

// Single-strategy file emitted for a synthesized equalizer.
std::string equalizer_strategy_to_json(const GameSpec& game, const EqualizerSpec& spec,
                                       const MemoryOneStrategy& strategy);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace zdforge
