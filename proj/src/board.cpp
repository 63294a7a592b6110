#include "phaseweb/tokens.hpp"

#include <algorithm>

namespace phaseweb {

std::string to_string(const Assignment& a) {
  std::string out;
  for (const auto& [sensor, value] : a) {
    if (!out.empty()) out += ',';
    out += sensor + ':' + to_string(value);
  }
  return out;
}

std::string to_string(const GoalToken& g) {
  return g.sensor + ':' + to_string(g.from) + '>' + to_string(g.to);
}

const SensorId& Token::sensor() const {
  return std::visit([](const auto& b) -> const SensorId& { return b.sensor; }, body);
}

void check_well_formed(const Token& t) {
  if (t.sensor().empty()) throw std::invalid_argument("token has an empty sensor id");
  if (const auto* x = std::get_if<TransformToken>(&t.body); x && x->from == x->to)
    throw std::invalid_argument("transform token for '" + x->sensor + "' has from == to");
  if (const auto* g = std::get_if<GoalToken>(&t.body); g && g->from == g->to)
    throw std::invalid_argument("goal token for '" + g->sensor + "' has from == to");
}

void Board::begin_tick(Tick t) {
  tick_ = t;
  std::erase_if(tokens_, [t](const Token& tok) { return tok.kind() != TokenKind::goal && tok.tick < t; });
}

bool Board::announce(Token t) {
  check_well_formed(t);
  switch (t.kind()) {
    case TokenKind::state:
      for (const auto& tok : tokens_)
        if (tok.kind() == TokenKind::state && tok.tick == t.tick && tok.sensor() == t.sensor())
          throw DuplicateStateToken("second state token for sensor '" + t.sensor() + "' in tick " +
                                    std::to_string(t.tick));
      break;
    case TokenKind::transform:
      for (const auto& tok : tokens_)
        if (tok.kind() == TokenKind::transform && tok.tick == t.tick && tok.body == t.body) return false;
      break;
    case TokenKind::goal:
      if (has_goal(std::get<GoalToken>(t.body))) return false;
      break;
  }
  tokens_.push_back(std::move(t));
  return true;
}

std::vector<Token> Board::listen(const Pattern& pattern) const {
  std::vector<Token> out;
  for (const auto& tok : tokens_) {
    if (pattern.kind && tok.kind() != *pattern.kind) continue;
    if (pattern.sensor && tok.sensor() != *pattern.sensor) continue;
    out.push_back(tok);
  }
  return out;
}

bool Board::has_goal(const GoalToken& g) const { return find_goal(g).has_value(); }

std::optional<Token> Board::find_goal(const GoalToken& g) const {
  for (const auto& tok : tokens_)
    if (const auto* x = std::get_if<GoalToken>(&tok.body); x && *x == g) return tok;
  return std::nullopt;
}

std::size_t Board::retract(const GoalToken& g) {
  return std::erase_if(tokens_, [&g](const Token& tok) {
    const auto* x = std::get_if<GoalToken>(&tok.body);
    return x && *x == g;
  });
}

}  // namespace phaseweb
