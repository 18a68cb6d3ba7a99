#include "ccq/distprod.hpp"

#include "ccq/mm.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ccq;

namespace {

using Strategy = DistributedMatrix (*)(CliqueWorld&, const DistributedMatrix&, const DistributedMatrix&, std::int64_t,
                                       const std::string&);

DistributedMatrix via_dft(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b, std::int64_t M,
                          const std::string& out) {
  return dist_prod_dft(w, a, b, M, out);
}
DistributedMatrix via_selector(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b, std::int64_t M,
                               const std::string& out) {
  return dist_prod(w, a, b, M, out);
}

oracle::IMat run(Strategy s, const oracle::IMat& a, const oracle::IMat& b, std::int64_t M, std::uint64_t seed = 1) {
  const std::size_t n = a.size();
  CliqueWorld w(n, PrimeField(101), seed);
  const auto da = scatter(w, "A", th::encode(a), Layout::rows);
  const auto db = scatter(w, "B", th::encode(b), Layout::cols);
  const auto c = s(w, da, db, M, "C");
  CHECK(gather(w, c) == gather_cols(w, c));
  return th::decode(gather(w, c));
}

const Strategy kAll[] = {via_dft, dist_prod_semiring, via_selector};

}  // namespace

TEST_CASE("dft plan parameters") {
  for (auto [m, M] : {std::pair<std::size_t, std::int64_t>{1, 0}, {2, 2}, {8, 5}, {16, 16}}) {
    const auto plan = make_dft_plan(m, M);
    CAPTURE(m);
    CAPTURE(M);
    {
      // N is the bit length of (m+1)^{2M}, computed here by repeated doubling.
      std::vector<int> digits{1};
      for (std::int64_t e = 0; e < 2 * M; ++e) {
        int carry = 0;
        for (auto& d : digits) {
          const int v = d * static_cast<int>(m + 1) + carry;
          d = v % 2;
          carry = v / 2;
        }
        while (carry) {
          digits.push_back(carry % 2);
          carry /= 2;
        }
      }
      CHECK(plan.N == digits.size());
    }
    CHECK(plan.p % (2 * plan.N) == 1);
    CHECK(plan.p > m * plan.N);
    CHECK(is_prime(plan.p));
    const PrimeField f(plan.p);
    for (Word j = 1; j < 2 * plan.N; ++j) CHECK(f.pow(plan.root, j) != 1);
    CHECK(f.pow(plan.root, 2 * plan.N) == 1);
  }
}

TEST_CASE("distance product examples") {
  const auto I = oracle::INF;
  const oracle::IMat a = {{0, 1}, {2, I}}, b = {{1, 0}, {I, 3}};
  const oracle::IMat want = {{1, 0}, {3, 2}};
  CHECK(oracle::minplus(a, b) == want);
  // B holds a 3, so the bound is 3; the transform path needs M <= n, so it
  // runs the instance padded with an infinite third row and column.
  CHECK(run(dist_prod_semiring, a, b, 3) == want);
  CHECK(run(via_selector, a, b, 3) == want);
  const oracle::IMat a3 = {{0, 1, I}, {2, I, I}, {I, I, I}}, b3 = {{1, 0, I}, {I, 3, I}, {I, I, I}};
  const auto c3 = run(via_dft, a3, b3, 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(c3[i][j] == want[i][j]);
  for (Strategy s : kAll) {
    const oracle::IMat inf(3, std::vector<oracle::i64>(3, I));
    CHECK(run(s, inf, inf, 1) == inf);
  }
  SUBCASE("M = 0 is a boolean product") {
    std::mt19937_64 g(1);
    for (int t = 0; t < 10; ++t) {
      const auto x = th::random_minplus(g, 6, 6, 0, 60), y = th::random_minplus(g, 6, 6, 0, 60);
      for (Strategy s : kAll) CHECK(run(s, x, y, 0) == oracle::minplus(x, y));
    }
  }
  SUBCASE("a row of infinities stays infinite") {
    std::mt19937_64 g(2);
    auto x = th::random_minplus(g, 5, 5, 3, 10);
    const auto y = th::random_minplus(g, 5, 5, 3, 10);
    x[2].assign(5, I);
    for (Strategy s : kAll) CHECK(run(s, x, y, 3)[2] == std::vector<oracle::i64>(5, I));
  }
}

TEST_CASE("strategies agree with the oracle") {
  std::mt19937_64 g(3);
  for (int t = 0; t < 100; ++t) {
    const auto x = th::random_minplus(g, 8, 8, 5, 20), y = th::random_minplus(g, 8, 8, 5, 20);
    CHECK(run(dist_prod_semiring, x, y, 5) == oracle::minplus(x, y));
  }
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + g() % 8, m = 1 + g() % n;
    const std::int64_t M = static_cast<std::int64_t>(g() % (n + 1));
    CAPTURE(n);
    CAPTURE(m);
    CAPTURE(M);
    const auto x = th::random_minplus(g, n, m, M, 25), y = th::random_minplus(g, m, n, M, 25);
    const auto want = oracle::minplus(x, y);
    CHECK(run(via_dft, x, y, M) == want);
    CHECK(run(dist_prod_semiring, x, y, M) == want);
  }
}

TEST_CASE("rectangular inner dimension beyond n uses the semiring path") {
  std::mt19937_64 g(4);
  const auto x = th::random_minplus(g, 4, 9, 3, 20), y = th::random_minplus(g, 9, 4, 3, 20);
  CHECK(run(dist_prod_semiring, x, y, 3) == oracle::minplus(x, y));
  CHECK(run(via_selector, x, y, 3) == oracle::minplus(x, y));
  CHECK(select_strategy(4, 9, 3) == DistStrategy::semiring);
}

TEST_CASE("dft strategy preconditions") {
  CliqueWorld w(3, PrimeField(101), 1);
  const oracle::IMat z(3, std::vector<oracle::i64>(3, 0));
  const auto a = scatter(w, "A", th::encode(z), Layout::rows);
  const auto b = scatter(w, "B", th::encode(z), Layout::cols);
  CHECK_THROWS_AS(dist_prod_dft(w, a, b, 4, "C"), std::invalid_argument);
  auto bad = z;
  bad[0][0] = 3;
  const auto c = scatter(w, "X", th::encode(bad), Layout::rows);
  CHECK_THROWS_AS(dist_prod_dft(w, c, b, 2, "C"), dimension_error);
}

TEST_CASE("monotonicity under entry decrease") {
  std::mt19937_64 g(5);
  for (int t = 0; t < 20; ++t) {
    auto x = th::random_minplus(g, 6, 6, 4, 20);
    const auto y = th::random_minplus(g, 6, 6, 4, 20);
    const auto before = run(via_selector, x, y, 4);
    auto& e = x[g() % 6][g() % 6];
    e = e == oracle::INF ? 4 : std::max<oracle::i64>(-4, e - 1);
    const auto after = run(via_selector, x, y, 4);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) CHECK(after[i][j] <= before[i][j]);
  }
}

TEST_CASE("strategy selection") {
  CHECK(select_strategy(64, 64, 64) == DistStrategy::semiring);
  CHECK(select_strategy(16, 32, 1) == DistStrategy::semiring);
  CHECK(predict_dft_rounds(8, 8, 9) == std::numeric_limits<std::uint64_t>::max());
  for (std::size_t n : {8, 16, 64})
    for (std::int64_t M : {1, 2, 8}) {
      const auto s = select_strategy(n, n, M);
      CHECK(s == (predict_dft_rounds(n, n, M) < predict_semiring_rounds(n, n, M) ? DistStrategy::dft
                                                                                  : DistStrategy::semiring));
    }
  CHECK(minplus_units(0, 16) == 1);
  CHECK(minplus_units(127, 16) == 1);
  CHECK(minplus_units(1000, 4) == 3);
  // The chosen strategy is named in the ledger.
  CliqueWorld w(4, PrimeField(101), 1);
  const oracle::IMat z(4, std::vector<oracle::i64>(4, 0));
  dist_prod(w, scatter(w, "A", th::encode(z), Layout::rows), scatter(w, "B", th::encode(z), Layout::cols), 1, "C");
  CHECK(w.ledger().to_text().find("dist_prod." + to_string(select_strategy(4, 4, 1))) != std::string::npos);
}

TEST_CASE("predicted rounds match the ledger") {
  std::mt19937_64 g(6);
  for (std::size_t n : {4, 8, 16}) {
    const std::int64_t M = 2;
    const auto x = th::random_minplus(g, n, n, M, 10), y = th::random_minplus(g, n, n, M, 10);
    for (DistStrategy s : {DistStrategy::dft, DistStrategy::semiring}) {
      CliqueWorld w(n, PrimeField(101), 1);
      const auto a = scatter(w, "A", th::encode(x), Layout::rows);
      const auto b = scatter(w, "B", th::encode(y), Layout::cols);
      if (s == DistStrategy::dft) {
        dist_prod_dft(w, a, b, M, "C");
        CHECK(w.ledger().total_rounds() <= predict_dft_rounds(n, n, M));
      } else {
        dist_prod_semiring(w, a, b, M, "C");
        CHECK(w.ledger().total_rounds() <= predict_semiring_rounds(n, n, M));
      }
    }
  }
}
