#include <doctest.h>

#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "generators.hpp"
#include "spintop/error.hpp"
#include "spintop/log.hpp"
#include "spintop/pgn.hpp"
#include "spintop/sampling.hpp"

using namespace spintop;

namespace {

std::vector<GameRecord> parse(const std::string& text, ParseStats* stats = nullptr) {
  std::istringstream in(text);
  return parse_archive(in, "fixture", stats);
}

}  // namespace

TEST_CASE("pgn: tags map onto a record") {
  ParseStats st;
  const auto r = parse(gen::pgn_game("1500", "1400", "1-0"), &st);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == GameRecord{1500, 1400, Outcome::WhiteWin, "fixture"});
  CHECK(st.games == 1);
  CHECK(st.records == 1);
}

TEST_CASE("pgn: all three result values") {
  const auto r = parse(gen::pgn_game("1500", "1400", "1-0") +
                       gen::pgn_game("1500", "1400", "0-1") +
                       gen::pgn_game("1500", "1400", "1/2-1/2"));
  REQUIRE(r.size() == 3);
  CHECK(r[0].outcome == Outcome::WhiteWin);
  CHECK(r[1].outcome == Outcome::BlackWin);
  CHECK(r[2].outcome == Outcome::Draw);
  CHECK(white_score(r[1].outcome) == -1);
}

TEST_CASE("pgn: unfinished game is skipped and counted") {
  ParseStats st;
  CHECK(parse(gen::pgn_game("1500", "1400", "*"), &st).empty());
  CHECK(st.skipped_result == 1);
  CHECK(st.games == 1);
}

TEST_CASE("pgn: three games, one without WhiteElo") {
  ParseStats st;
  const auto r = parse(gen::pgn_game("1500", "1400", "1-0") + gen::pgn_game("", "1400", "0-1") +
                           gen::pgn_game("1800", "1900", "1/2-1/2"),
                       &st);
  CHECK(r.size() == 2);
  CHECK(st.skipped_missing_tag == 1);
}

TEST_CASE("pgn: provisional and non-numeric ratings are skipped") {
  ParseStats st;
  const auto r = parse(gen::pgn_game("?", "1400", "1-0") + gen::pgn_game("1500?", "1400", "1-0") +
                           gen::pgn_game("0", "1400", "1-0") + gen::pgn_game("-5", "1400", "1-0") +
                           gen::pgn_game("1500", "1400", "1-0"),
                       &st);
  CHECK(r.size() == 1);
  CHECK(st.skipped_rating == 4);
}

TEST_CASE("pgn: unterminated tag marks only that game malformed") {
  ParseStats st;
  const std::string bad =
      "[Event \"x\"]\n[WhiteElo \"1500\n[BlackElo \"1400\"]\n[Result \"1-0\"]\n\n1. e4 1-0\n\n";
  const auto r = parse(gen::pgn_game("1500", "1400", "1-0") + bad +
                           gen::pgn_game("1600", "1400", "0-1"),
                       &st);
  CHECK(r.size() == 2);
  CHECK(st.skipped_malformed == 1);
  CHECK(st.games == 3);
}

TEST_CASE("pgn: movetext comments containing brackets do not split games") {
  const std::string g =
      "[Result \"1-0\"]\n[WhiteElo \"1500\"]\n[BlackElo \"1400\"]\n\n"
      "1. e4 { a comment\n[WhiteElo \"9\"] still comment } e5 ; [rest of line\n2. Nf3 1-0\n\n";
  const auto r = parse(g + gen::pgn_game("1200", "1300", "0-1"));
  REQUIRE(r.size() == 2);
  CHECK(r[0].white_rating == 1500);
  CHECK(r[1].white_rating == 1200);
}

TEST_CASE("pgn: games without blank separators and CRLF line endings") {
  const std::string g =
      "[Result \"1-0\"]\r\n[WhiteElo \"1500\"]\r\n[BlackElo \"1400\"]\r\n1. e4 1-0\r\n"
      "[Result \"0-1\"]\r\n[WhiteElo \"1501\"]\r\n[BlackElo \"1401\"]\r\n1. d4 0-1\r\n";
  const auto r = parse(g);
  REQUIRE(r.size() == 2);
  CHECK(r[1].black_rating == 1401);
  CHECK(r[1].outcome == Outcome::BlackWin);
}

TEST_CASE("pgn: empty stream") {
  ParseStats st;
  CHECK(parse("", &st).empty());
  CHECK(st.games == 0);
}

TEST_CASE("pgn: records plus skips equal games on random mixtures") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> elos{"1500", "", "?", "abc", "2100"};
  const std::vector<std::string> results{"1-0", "0-1", "1/2-1/2", "*", "2-0"};
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    std::uniform_int_distribution<int> pick(0, 4), n(0, 30);
    const int games = n(rng);
    for (int g = 0; g < games; ++g) {
      text += gen::pgn_game(elos[pick(rng)], elos[pick(rng)], results[pick(rng)]);
    }
    ParseStats st;
    const auto r = parse(text, &st);
    CHECK(st.games == static_cast<std::size_t>(games));
    CHECK(r.size() + st.skipped() == st.games);
    CHECK(st.records == r.size());
  }
}

TEST_CASE("pgn: failed stream raises a data error") {
  std::istringstream in("[Result \"1-0\"]\n");
  in.setstate(std::ios::badbit);
  CHECK_THROWS_AS(parse_archive(in, "x"), DataError);
}

TEST_CASE("sampling: plan validation") {
  CHECK_THROWS_AS((SamplePlan{0, 10, 0}.validate()), ConfigError);
  CHECK_THROWS_AS((SamplePlan{10, 5, 0}.validate()), ConfigError);
  CHECK_NOTHROW((SamplePlan{10, 10, 0}.validate()));
}

TEST_CASE("sampling: d = m returns the universe in order") {
  std::vector<int> u(10);
  std::iota(u.begin(), u.end(), 0);
  CHECK(two_stage_sample<int>(u, 10, SamplePlan{10, 10, 3}) == u);
  CHECK(two_stage_sample<int>(u, 10, SamplePlan{10, 20, 3}) == u);
}

TEST_CASE("sampling: oversized sample is rejected") {
  std::vector<int> u(5, 1);
  CHECK_THROWS_WITH_AS(two_stage_sample<int>(u, 6, SamplePlan{6, 6, 0}),
                       "sample larger than universe", ConfigError);
}

TEST_CASE("sampling: distinct positions and determinism") {
  std::vector<int> u(1000);
  std::iota(u.begin(), u.end(), 0);
  const SamplePlan plan{50, 128, 99};
  const auto a = two_stage_sample<int>(u, 50, plan);
  const auto b = two_stage_sample<int>(u, 50, plan);
  CHECK(a == b);
  CHECK(a.size() == 50);
  std::set<int> distinct(a.begin(), a.end());
  CHECK(distinct.size() == 50);
  CHECK(std::is_sorted(a.begin(), a.end()));
}

namespace {

// Inclusion counts of every element over `trials` seeded runs.
std::vector<int> inclusion(std::size_t m, std::size_t h, std::size_t d, int trials) {
  std::vector<int> u(m);
  std::iota(u.begin(), u.end(), 0);
  std::vector<int> hits(m, 0);
  for (int t = 0; t < trials; ++t) {
    for (int x : two_stage_sample<int>(u, d, SamplePlan{d, h, derive_seed(7, std::to_string(t))})) {
      ++hits[static_cast<std::size_t>(x)];
    }
  }
  return hits;
}

void check_within_3_sigma(const std::vector<int>& hits, double p, int trials) {
  const double mean = p * trials;
  const double sd = std::sqrt(trials * p * (1 - p));
  for (int h : hits) CHECK(std::abs(h - mean) <= 3.0 * sd + 1e-9);
}

double chi_square(const std::vector<int>& hits) {
  const double total = std::accumulate(hits.begin(), hits.end(), 0.0);
  const double e = total / static_cast<double>(hits.size());
  double x2 = 0.0;
  for (int h : hits) x2 += (h - e) * (h - e) / e;
  return x2;
}

}  // namespace

TEST_CASE("sampling: m=100, h=20, d=10 inclusion frequencies") {
  const int trials = 20000;
  const auto hits = inclusion(100, 20, 10, trials);
  check_within_3_sigma(hits, 0.1, trials);
  const boost::math::chi_squared dist(99);
  CHECK(chi_square(hits) < boost::math::quantile(dist, 0.999));
}

TEST_CASE("sampling: d=1, m=4") {
  const int trials = 40000;
  check_within_3_sigma(inclusion(4, 2, 1, trials), 0.25, trials);
}

TEST_CASE("sampling: short final chunk follows the pooled-draw rates") {
  // Chunks of 20, 20 and 5 feed 10 + 10 + 5 items to the pool; stage two
  // keeps 10 of 25. Full-chunk items: (10/20)(10/25) = 0.2, short-chunk
  // items: (5/5)(10/25) = 0.4. The bias is a property of the chunking rule.
  const int trials = 20000;
  const auto hits = inclusion(45, 20, 10, trials);
  check_within_3_sigma(std::vector<int>(hits.begin(), hits.begin() + 40), 0.2, trials);
  check_within_3_sigma(std::vector<int>(hits.begin() + 40, hits.end()), 0.4, trials);
}

TEST_CASE("sampling: streaming sampler matches the span helper") {
  std::vector<int> u(300);
  std::iota(u.begin(), u.end(), 0);
  TwoStageSampler<int> s(7, 64, 5);
  for (int x : u) s.push(x);
  CHECK(s.seen() == 300);
  CHECK(s.finish() == two_stage_sample<int>(u, 7, SamplePlan{7, 64, 5}));
}

namespace {

std::string month_text(int games, int base) {
  std::string s;
  for (int g = 0; g < games; ++g) {
    s += gen::pgn_game(std::to_string(base + g), "1500", g % 2 ? "1-0" : "0-1");
  }
  return s;
}

}  // namespace

TEST_CASE("sampling: three months of ten games, quota five") {
  std::istringstream a(month_text(10, 1000)), b(month_text(10, 2000)), c(month_text(10, 3000));
  // Deliberately out of order: output is chronological.
  const std::vector<MonthArchive> months{{"2020-03", &c}, {"2020-01", &a}, {"2020-02", &b}};
  const auto out = sample_archive_by_month(months, SamplePlan{5, 5, 1});
  REQUIRE(out.records.size() == 15);
  for (int i = 0; i < 15; ++i) {
    const int base = 1000 * (i / 5 + 1);
    CHECK(out.records[static_cast<std::size_t>(i)].white_rating >= base);
    CHECK(out.records[static_cast<std::size_t>(i)].white_rating < base + 10);
  }
  CHECK(out.months[0].month_id == "2020-01");
  CHECK(out.months[2].drawn == 5);
}

TEST_CASE("sampling: month below quota contributes all games and warns") {
  std::istringstream a(month_text(4, 1000));
  const std::vector<MonthArchive> months{{"2020-01", &a}};
  ScopedWarningCapture cap;
  const auto out = sample_archive_by_month(months, SamplePlan{120, 1000, 1});
  CHECK(out.records.size() == 4);
  CHECK(out.months[0].below_quota);
  CHECK(cap.messages().size() == 1);
}

TEST_CASE("sampling: month sampling is deterministic") {
  auto run = [] {
    std::istringstream a(month_text(200, 1000)), b(month_text(150, 3000));
    const std::vector<MonthArchive> months{{"m1", &a}, {"m2", &b}};
    return sample_archive_by_month(months, SamplePlan{40, 64, 17}).records;
  };
  CHECK(run() == run());
}

TEST_CASE("sampling: empty archive list is an error") {
  CHECK_THROWS_AS(sample_archive_by_month({}, SamplePlan{}), ConfigError);
}
