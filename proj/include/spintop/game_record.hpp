#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace spintop {

enum class Outcome : std::int8_t { WhiteWin, Draw, BlackWin };

// Score from White's perspective: 1 win, 0 draw, -1 loss.
constexpr int white_score(Outcome o) {
  switch (o) {
    case Outcome::WhiteWin: return 1;
    case Outcome::Draw: return 0;
    case Outcome::BlackWin: return -1;
  }
  return 0;
}

std::optional<Outcome> outcome_from_score(int score);

// Maps a PGN Result tag value; nullopt for "*" and anything unrecognised.
std::optional<Outcome> outcome_from_result_tag(std::string_view tag);

// One finished game: both ratings and the result.
struct GameRecord {
  int white_rating = 0;
  int black_rating = 0;
  Outcome outcome = Outcome::Draw;
  std::string source_tag;

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

}  // namespace spintop
