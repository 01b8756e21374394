#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "spintop/bins.hpp"
#include "spintop/error.hpp"
#include "spintop/payoff.hpp"

using namespace spintop;

namespace {

GameRecord game(int w, int b, Outcome o) { return {w, b, o, "t"}; }

bool exactly_skew(const Eigen::MatrixXd& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (M(i, j) != -M(j, i)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("bins: width 20 over [1000, 1040]") {
  const BinScheme s = make_bin_scheme(1000, 1040, 20);
  REQUIRE(s.size() == 2);
  CHECK(s.bin(0).lower == 1000);
  CHECK(s.bin(0).upper == 1020);
  CHECK(s.bin(1).lower == 1020);
  CHECK(s.bin(1).upper == 1040);
  CHECK(s.midpoint(1) == 1030);
}

TEST_CASE("bins: default range gives 230 bins") {
  CHECK(make_bin_scheme(600, 2900, 10).size() == 230);
}

TEST_CASE("bins: final bin is clipped at hi") {
  const BinScheme s = make_bin_scheme(1000, 1050, 20);
  REQUIRE(s.size() == 3);
  CHECK(s.bin(2).upper == 1050);
}

TEST_CASE("bins: degenerate ranges and widths are rejected") {
  CHECK_THROWS_AS(make_bin_scheme(600, 605, 10), ConfigError);
  CHECK_THROWS_AS(make_bin_scheme(600, 700, 0), ConfigError);
  CHECK_THROWS_AS(make_bin_scheme(600, 700, -5), ConfigError);
  CHECK_THROWS_AS(BinScheme({1.0}), ConfigError);
  CHECK_THROWS_AS(BinScheme({1.0, 1.0}), ConfigError);
}

TEST_CASE("bins: locate uses half-open bins with a closed top") {
  const BinScheme s = make_bin_scheme(1000, 1040, 20);
  CHECK(s.locate(1000) == 0u);
  CHECK(s.locate(1019.999) == 0u);
  CHECK(s.locate(1020) == 1u);
  CHECK(s.locate(1040) == 1u);
  CHECK_FALSE(s.locate(999.99).has_value());
  CHECK_FALSE(s.locate(1040.01).has_value());
}

TEST_CASE("elo: closed-form values") {
  CHECK(expected_win_probability(1500, 1500) == 0.5);
  CHECK(expected_win_probability(1800, 1400) == 10.0 / 11.0);
  CHECK(expected_win_probability(1400, 1800) == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
  CHECK(expected_score(1600, 1600) == 0.0);
  CHECK(expected_score(1800, 1400) == doctest::Approx(9.0 / 11.0).epsilon(1e-15));
  CHECK(expected_score(1400, 1800) == -expected_score(1800, 1400));
}

TEST_CASE("elo: agrees with the logistic form and is antisymmetric") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(500, 3000);
  for (int i = 0; i < 1000; ++i) {
    const double a = r(rng), b = r(rng);
    const double logistic = 1.0 / (1.0 + std::exp(-kEloSlope * (a - b)));
    CHECK(expected_win_probability(a, b) == doctest::Approx(logistic).epsilon(1e-14));
    CHECK(expected_win_probability(a, b) + expected_win_probability(b, a) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(expected_score(a, b) == -expected_score(b, a));
  }
}

TEST_CASE("payoff: single bin gives [0]") {
  const BinScheme one({1500.0, 1510.0});
  const std::vector<GameRecord> r{game(1505, 1505, Outcome::WhiteWin)};
  const PayoffMatrix M = build_payoff_matrix(r, one);
  REQUIRE(M.size() == 1);
  CHECK(M(0, 0) == 0.0);
}

TEST_CASE("payoff: both directions won by the lower bin's player") {
  const BinScheme s = make_bin_scheme(1000, 1040, 20);
  // White in bin 0 beats Black in bin 1; White in bin 1 loses to Black in bin 0.
  const std::vector<GameRecord> r{game(1005, 1025, Outcome::WhiteWin),
                                  game(1025, 1005, Outcome::BlackWin)};
  const PayoffMatrix M = build_payoff_matrix(r, s);
  CHECK(M(0, 1) == 1.0);
  CHECK(M(1, 0) == -1.0);
  CHECK(M.observed(0, 1));
  CHECK(M.observed(1, 0));
}

TEST_CASE("payoff: no games -> Elo fill at the midpoints") {
  const BinScheme s({1390.0, 1410.0, 1790.0, 1810.0});  // midpoints 1400, 1600, 1800
  const std::vector<GameRecord> r{game(1600, 1600, Outcome::Draw)};
  const PayoffMatrix M = build_payoff_matrix(r, s);
  CHECK(M(0, 2) == -expected_score(1800, 1400));
  CHECK(M(0, 2) == doctest::Approx(-9.0 / 11.0).epsilon(1e-15));
  CHECK(M(2, 0) == expected_score(1800, 1400));
  CHECK_FALSE(M.observed(0, 2));
}

TEST_CASE("payoff: mixed fill resolves each colour direction separately") {
  const BinScheme s = make_bin_scheme(1000, 1040, 20);  // midpoints 1010, 1030
  // Only the (White bin 0, Black bin 1) direction is observed: 1 win, 1 draw.
  const std::vector<GameRecord> r{game(1001, 1021, Outcome::WhiteWin),
                                  game(1002, 1039, Outcome::Draw)};
  const PayoffMatrix M = build_payoff_matrix(r, s);
  const double rs01 = 0.5;
  const double rs10 = expected_score(1010, 1030);
  CHECK(M(0, 1) == (rs01 + rs10) / 2.0);
  CHECK(M(1, 0) == -M(0, 1));
  CHECK_FALSE(M.observed(0, 1));
}

TEST_CASE("payoff: three-bin hand trace") {
  const BinScheme s = make_bin_scheme(1000, 1300, 100);  // midpoints 1050, 1150, 1250
  const std::vector<GameRecord> r{
      // (0, 1): White 0 vs Black 1 -> +1, 0 ; White 1 vs Black 0 -> +1 (bin 1 wins)
      game(1010, 1110, Outcome::WhiteWin), game(1020, 1120, Outcome::Draw),
      game(1130, 1030, Outcome::WhiteWin),
      // (1, 2): only White 2 vs Black 1 observed, Black wins -> bin 1 scores +1
      game(1250, 1150, Outcome::BlackWin),
      // out of range: skipped
      game(900, 1100, Outcome::WhiteWin), game(1100, 1400, Outcome::Draw)};
  const PayoffMatrix M = build_payoff_matrix(r, s);
  CHECK(M.skipped_count() == 2);
  CHECK(M(0, 1) == (0.5 + -1.0) / 2.0);
  CHECK(M(1, 2) == (expected_score(1150, 1250) + 1.0) / 2.0);
  CHECK(M(0, 2) == expected_score(1050, 1250));
  CHECK(M.observed(0, 1));
  CHECK_FALSE(M.observed(1, 2));
  CHECK(exactly_skew(M.entries()));
}

TEST_CASE("payoff: errors") {
  const BinScheme s = make_bin_scheme(1000, 1040, 20);
  const std::vector<GameRecord> out_of_range{game(500, 600, Outcome::Draw)};
  CHECK_THROWS_WITH_AS(build_payoff_matrix(out_of_range, s), "no in-range records", DataError);
  CHECK_THROWS_AS(build_payoff_matrix(out_of_range, BinScheme()), ConfigError);
  CHECK_THROWS_AS(build_payoff_matrix({}, s), DataError);
}

TEST_CASE("payoff: matrix invariants validated on construction") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0, 0.5, -0.4, 0;
  CHECK_THROWS_AS(PayoffMatrix{bad}, ConfigError);
  bad << 0, 1.5, -1.5, 0;
  CHECK_THROWS_AS(PayoffMatrix{bad}, ConfigError);
  CHECK_THROWS_AS(PayoffMatrix(Eigen::MatrixXd::Zero(2, 3)), ConfigError);
  CHECK_NOTHROW(PayoffMatrix(gen::rps()));
}

TEST_CASE("payoff: properties on simulated records") {
  std::mt19937_64 rng(21);
  const BinScheme s = make_bin_scheme(800, 2200, 100);
  for (int trial = 0; trial < 10; ++trial) {
    const auto records = gen::elo_games(3000, rng);
    const PayoffMatrix M = build_payoff_matrix(records, s);
    CHECK(exactly_skew(M.entries()));
    CHECK(M.entries().cwiseAbs().maxCoeff() <= 1.0);
    for (std::size_t i = 0; i < M.size(); ++i) {
      for (std::size_t j = 0; j < M.size(); ++j) {
        if (i != j && !M.observed(i, j) && M(i, j) != 0.0) {
          // fully predicted entries never hit the bounds
          CHECK(std::abs(M(i, j)) < 1.0);
        }
      }
    }

    // Permutation equivariance: reversing the rating axis reverses the bins.
    std::vector<GameRecord> mirrored;
    for (GameRecord g : records) {
      g.white_rating = 3000 - g.white_rating;
      g.black_rating = 3000 - g.black_rating;
      mirrored.push_back(g);
    }
    // Ratings on the mirrored axis land in [800, 2200] iff they did before,
    // except at the closed top edge; use interior-only records.
    std::vector<GameRecord> a, b;
    for (std::size_t k = 0; k < records.size(); ++k) {
      const auto& g = records[k];
      auto inside = [](int r) { return r > 800 && r < 2200 && r % 100 != 0; };
      if (inside(g.white_rating) && inside(g.black_rating)) {
        a.push_back(g);
        b.push_back(mirrored[k]);
      }
    }
    const PayoffMatrix Ma = build_payoff_matrix(a, s);
    const PayoffMatrix Mb = build_payoff_matrix(b, s);
    const auto m = static_cast<Eigen::Index>(s.size());
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (Ma.fill_mask()(i, j)) {
          CHECK(Mb.fill_mask()(m - 1 - i, m - 1 - j));
          CHECK(Mb.entries()(m - 1 - i, m - 1 - j) == Ma.entries()(i, j));
        }
      }
    }
  }
}

TEST_CASE("payoff: an extra win weakly increases the entry") {
  std::mt19937_64 rng(4);
  const BinScheme s = make_bin_scheme(1000, 2000, 100);
  auto records = gen::elo_games(2000, rng, 1500, 200);
  const PayoffMatrix before = build_payoff_matrix(records, s);
  std::uniform_int_distribution<int> bin(0, 9);
  for (int t = 0; t < 50; ++t) {
    const int i = bin(rng), j = bin(rng);
    if (i == j) continue;
    auto more = records;
    more.push_back(game(1000 + 100 * i + 50, 1000 + 100 * j + 50, Outcome::WhiteWin));
    const PayoffMatrix after = build_payoff_matrix(more, s);
    CHECK(after(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) >=
          before(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  }
}
