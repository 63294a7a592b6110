#pragma once

// Sensor orientations, board tokens, and the broadcast board.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace phaseweb {

enum class Polarity : std::int8_t { negative = -1, positive = 1 };

constexpr Polarity flip(Polarity p) {
  return p == Polarity::positive ? Polarity::negative : Polarity::positive;
}
constexpr int to_int(Polarity p) { return static_cast<int>(p); }
inline Polarity polarity_from_int(int v) {
  if (v == 1) return Polarity::positive;
  if (v == -1) return Polarity::negative;
  throw std::invalid_argument("orientation must be +1 or -1, got " + std::to_string(v));
}
inline std::string to_string(Polarity p) { return p == Polarity::positive ? "+1" : "-1"; }

using SensorId = std::string;
using Tick = std::int64_t;

/// A sensor -> orientation assignment; ordered so that every rendering is stable.
using Assignment = std::map<SensorId, Polarity>;

std::string to_string(const Assignment& a);

struct StateToken {
  SensorId sensor;
  Polarity value = Polarity::positive;
  friend bool operator==(const StateToken&, const StateToken&) = default;
};

struct TransformToken {
  SensorId sensor;
  Polarity from = Polarity::positive;
  Polarity to = Polarity::negative;
  friend bool operator==(const TransformToken&, const TransformToken&) = default;
};

/// (!, (sensor, from), (sensor, to))
struct GoalToken {
  SensorId sensor;
  Polarity from = Polarity::positive;
  Polarity to = Polarity::negative;
  friend bool operator==(const GoalToken&, const GoalToken&) = default;
  friend auto operator<=>(const GoalToken&, const GoalToken&) = default;
};

std::string to_string(const GoalToken& g);  // "p:+1>-1"

enum class TokenKind { state, transform, goal };

struct Token {
  std::variant<StateToken, TransformToken, GoalToken> body;
  std::string issuer;
  Tick tick = 0;

  TokenKind kind() const { return static_cast<TokenKind>(body.index()); }
  const SensorId& sensor() const;
  friend bool operator==(const Token&, const Token&) = default;
};

/// Throws std::invalid_argument for from == to or an empty sensor id.
void check_well_formed(const Token& t);

struct Pattern {
  std::optional<SensorId> sensor;   // nullopt matches any sensor
  std::optional<TokenKind> kind;    // nullopt matches any kind
};

class DuplicateStateToken : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broadcast medium: announcements stay visible until retracted or the
/// tick they belong to ends. Listening never consumes anything.
class Board {
 public:
  Tick tick() const { return tick_; }

  /// Starts a new tick: state and transform tokens from earlier ticks lapse,
  /// goals persist.
  void begin_tick(Tick t);

  /// Returns false when the token was a duplicate goal/transform and was
  /// dropped. Throws DuplicateStateToken for a second state token for the
  /// same sensor within one tick.
  bool announce(Token t);

  std::vector<Token> listen(const Pattern& pattern) const;

  bool has_goal(const GoalToken& g) const;
  std::optional<Token> find_goal(const GoalToken& g) const;
  /// Removes every copy of the goal; returns how many were removed.
  std::size_t retract(const GoalToken& g);
  std::vector<Token> goals() const { return listen({std::nullopt, TokenKind::goal}); }

  const std::vector<Token>& tokens() const { return tokens_; }
  friend bool operator==(const Board&, const Board&) = default;

 private:
  std::vector<Token> tokens_;
  Tick tick_ = 0;
};

}  // namespace phaseweb
