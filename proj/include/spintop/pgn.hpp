#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "spintop/game_record.hpp"

namespace spintop {

// Per-stream bookkeeping. Every game encountered ends up either in `records`
// or in exactly one of the skip counters.
struct ParseStats {
  std::size_t games = 0;
  std::size_t records = 0;
  std::size_t skipped_malformed = 0;    // unterminated or garbled tag pair
  std::size_t skipped_missing_tag = 0;  // WhiteElo, BlackElo or Result absent
  std::size_t skipped_result = 0;       // "*" or unknown result
  std::size_t skipped_rating = 0;       // "?", non-numeric or non-positive

  std::size_t skipped() const {
    return skipped_malformed + skipped_missing_tag + skipped_result +
           skipped_rating;
  }
  ParseStats& operator+=(const ParseStats& o);
};

// Pull parser over PGN text. Only tag pairs are decoded; movetext is scanned
// just far enough to find where the next game begins (brace comments may span
// lines and contain '[').
class PgnReader {
 public:
  PgnReader(std::istream& in, std::string source_tag);

  // Next valid record, or nullopt at end of stream. Throws DataError when the
  // underlying stream fails.
  std::optional<GameRecord> next();

  const ParseStats& stats() const { return stats_; }

 private:
  struct PendingGame {
    bool active = false;
    bool headers_closed = false;
    bool malformed = false;
    std::optional<std::string> white_elo;
    std::optional<std::string> black_elo;
    std::optional<std::string> result;
  };

  std::optional<GameRecord> finish_pending();
  void absorb_tag_line(const std::string& line);
  void scan_movetext(const std::string& line);

  std::istream& in_;
  std::string source_tag_;
  ParseStats stats_;
  PendingGame pending_;
  int brace_depth_ = 0;
  std::string line_;
};

std::vector<GameRecord> parse_archive(std::istream& in,
                                      const std::string& source_tag,
                                      ParseStats* stats = nullptr);

}  // namespace spintop
