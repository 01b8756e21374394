#include "spintop/pgn.hpp"

#include <charconv>
#include <string_view>

#include "spintop/error.hpp"

namespace spintop {

std::optional<Outcome> outcome_from_score(int score) {
  switch (score) {
    case 1: return Outcome::WhiteWin;
    case 0: return Outcome::Draw;
    case -1: return Outcome::BlackWin;
    default: return std::nullopt;
  }
}

std::optional<Outcome> outcome_from_result_tag(std::string_view tag) {
  if (tag == "1-0") return Outcome::WhiteWin;
  if (tag == "0-1") return Outcome::BlackWin;
  if (tag == "1/2-1/2") return Outcome::Draw;
  return std::nullopt;
}

ParseStats& ParseStats::operator+=(const ParseStats& o) {
  games += o.games;
  records += o.records;
  skipped_malformed += o.skipped_malformed;
  skipped_missing_tag += o.skipped_missing_tag;
  skipped_result += o.skipped_result;
  skipped_rating += o.skipped_rating;
  return *this;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::optional<int> parse_rating(std::string_view s) {
  s = trim(s);
  int value = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || value <= 0) return std::nullopt;
  return value;
}

bool is_tag_name_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

PgnReader::PgnReader(std::istream& in, std::string source_tag)
    : in_(in), source_tag_(std::move(source_tag)) {}

std::optional<GameRecord> PgnReader::next() {
  while (true) {
    if (!std::getline(in_, line_)) {
      if (in_.bad()) {
        throw DataError("I/O error while reading archive '" + source_tag_ + "'");
      }
      if (!pending_.active) return std::nullopt;
      auto record = finish_pending();
      if (record) return record;
      return std::nullopt;
    }
    const std::string_view view = trim(line_);
    if (view.empty()) {
      if (pending_.active) pending_.headers_closed = true;
      continue;
    }
    if (brace_depth_ == 0 && view.front() == '%') continue;  // escape line

    if (brace_depth_ == 0 && view.front() == '[') {
      std::optional<GameRecord> done;
      if (pending_.active && pending_.headers_closed) done = finish_pending();
      if (!pending_.active) {
        pending_ = PendingGame{};
        pending_.active = true;
      }
      absorb_tag_line(std::string(view));
      if (done) return done;
      continue;
    }

    if (pending_.active) pending_.headers_closed = true;
    scan_movetext(line_);
  }
}

void PgnReader::scan_movetext(const std::string& line) {
  for (char c : line) {
    if (brace_depth_ == 0) {
      if (c == ';') return;
      if (c == '{') brace_depth_ = 1;
    } else if (c == '}') {
      brace_depth_ = 0;
    }
  }
}

void PgnReader::absorb_tag_line(const std::string& line) {
  std::size_t pos = 0;
  const std::size_t n = line.size();
  auto skip_ws = [&] {
    while (pos < n && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  };
  while (true) {
    skip_ws();
    if (pos >= n) return;
    if (line[pos] != '[') {
      pending_.malformed = true;
      return;
    }
    ++pos;
    skip_ws();
    const std::size_t name_begin = pos;
    while (pos < n && is_tag_name_char(line[pos])) ++pos;
    std::string name = line.substr(name_begin, pos - name_begin);
    skip_ws();
    if (name.empty() || pos >= n || line[pos] != '"') {
      pending_.malformed = true;
      return;
    }
    ++pos;
    std::string value;
    bool closed = false;
    while (pos < n) {
      const char c = line[pos++];
      if (c == '\\' && pos < n) {
        value.push_back(line[pos++]);
      } else if (c == '"') {
        closed = true;
        break;
      } else {
        value.push_back(c);
      }
    }
    skip_ws();
    if (!closed || pos >= n || line[pos] != ']') {
      pending_.malformed = true;
      return;
    }
    ++pos;
    if (name == "WhiteElo") {
      pending_.white_elo = std::move(value);
    } else if (name == "BlackElo") {
      pending_.black_elo = std::move(value);
    } else if (name == "Result") {
      pending_.result = std::move(value);
    }
  }
}

std::optional<GameRecord> PgnReader::finish_pending() {
  PendingGame game = std::move(pending_);
  pending_ = PendingGame{};
  ++stats_.games;

  if (game.malformed) {
    ++stats_.skipped_malformed;
    return std::nullopt;
  }
  if (!game.white_elo || !game.black_elo || !game.result) {
    ++stats_.skipped_missing_tag;
    return std::nullopt;
  }
  const auto outcome = outcome_from_result_tag(trim(*game.result));
  if (!outcome) {
    ++stats_.skipped_result;
    return std::nullopt;
  }
  const auto white = parse_rating(*game.white_elo);
  const auto black = parse_rating(*game.black_elo);
  if (!white || !black) {
    ++stats_.skipped_rating;
    return std::nullopt;
  }
  ++stats_.records;
  return GameRecord{*white, *black, *outcome, source_tag_};
}

std::vector<GameRecord> parse_archive(std::istream& in,
                                      const std::string& source_tag,
                                      ParseStats* stats) {
  PgnReader reader(in, source_tag);
  std::vector<GameRecord> out;
  while (auto record = reader.next()) out.push_back(std::move(*record));
  if (stats) *stats = reader.stats();
  return out;
}

}  // namespace spintop
