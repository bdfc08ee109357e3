#include "zdforge/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace zdforge {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw DomainError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
  return v;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DomainError("malformed JSON");
  return j;
}

}  // namespace

GameSpec parse_game_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object()) throw DomainError("game file must be a JSON object");
  GameSpec g;
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw DomainError("field 'n' must be an integer");
  g.n = j["n"].get<int>();
  g.delta = finite_number(j.at("delta"), "delta");
  const json& tables = j.at("tables");
  if (!tables.is_array()) throw DomainError("field 'tables' must be an array");
  for (const json& t : tables) {
    if (!t.is_array() || t.size() != 2) throw DomainError("each table needs 2 rows");
    PayoffTable table;
    for (const json& v : t[0]) table.act1.push_back(finite_number(v, "payoff"));
    for (const json& v : t[1]) table.act2.push_back(finite_number(v, "payoff"));
    g.tables.push_back(std::move(table));
  }
  const json& init = j.at("initial_probs");
  if (!init.is_array()) throw DomainError("field 'initial_probs' must be an array");
  for (const json& v : init) g.initial_probs.push_back(finite_number(v, "initial probability"));
  g.validate();
  return g;
}

namespace {

json game_to_json_value(const GameSpec& game) {
  json j;
  j["n"] = game.n;
  j["delta"] = game.delta;
  json tables = json::array();
  for (const PayoffTable& t : game.tables) tables.push_back(json::array({t.act1, t.act2}));
  j["tables"] = std::move(tables);
  j["initial_probs"] = game.initial_probs;
  return j;
}

}  // namespace

std::string game_to_json(const GameSpec& game) { return game_to_json_value(game).dump(2) + "\n"; }

std::string game_to_json(const GameSpec& game, const EqualizerSpec& equalizer) {
  json j = game_to_json_value(game);
  j["equalizer"] = {{"omega", equalizer.omega},
                    {"gamma", equalizer.gamma},
                    {"phi", equalizer.phi},
                    {"leader_init", equalizer.leader_init}};
  return j.dump(2) + "\n";
}

bool game_json_has_equalizer(const std::string& text) {
  json j = parse(text);
  return j.is_object() && j.contains("equalizer");
}

EqualizerSpec parse_equalizer_json(const std::string& text, int n) {
  json j = parse(text);
  const json& e = j.at("equalizer");
  EqualizerSpec spec;
  for (const json& v : e.at("omega")) spec.omega.push_back(finite_number(v, "omega"));
  spec.gamma = finite_number(e.at("gamma"), "gamma");
  spec.phi = finite_number(e.at("phi"), "phi");
  if (e.contains("leader_init")) spec.leader_init = finite_number(e["leader_init"], "leader_init");
  spec.validate(n);
  return spec;
}

std::vector<MemoryOneStrategy> parse_strategies_json(const std::string& text, int state_count) {
  json j = parse(text);
  const json& arr = j.at("strategies");
  if (!arr.is_array()) throw DomainError("field 'strategies' must be an array");
  std::vector<MemoryOneStrategy> out;
  for (const json& s : arr) {
    MemoryOneStrategy strat;
    for (const json& v : s.at("probs")) strat.probs.push_back(finite_number(v, "probability"));
    if (s.contains("init_prob")) strat.init_prob = finite_number(s["init_prob"], "init_prob");
    strat.validate(state_count);
    out.push_back(std::move(strat));
  }
  return out;
}

std::string equalizer_strategy_to_json(const GameSpec& game, const EqualizerSpec& spec,
                                       const MemoryOneStrategy& strategy) {
  json j;
  j["player"] = 1;
  j["n"] = game.n;
  j["delta"] = game.delta;
  j["omega"] = spec.omega;
  j["gamma"] = spec.gamma;
  j["phi"] = spec.phi;
  j["leader_init"] = spec.leader_init;
  j["probs"] = strategy.probs;
  j["init_prob"] = strategy.init_prob;
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write file: " + path);
  out << text;
}

GameSpec read_game_file(const std::string& path) { return parse_game_json(read_text_file(path)); }

void write_game_file(const std::string& path, const GameSpec& game) {
  write_text_file(path, game_to_json(game));
}

std::vector<MemoryOneStrategy> read_strategies_file(const std::string& path, int state_count) {
  return parse_strategies_json(read_text_file(path), state_count);
}

}  // namespace zdforge
