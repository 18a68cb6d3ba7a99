#include "ccq/krylov.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace ccq;

namespace {

// Singular matrix of rank r: product of n x r and r x n random factors.
oracle::Mat random_rank(std::mt19937_64& g, std::size_t n, std::size_t r, oracle::u64 p) {
  if (r == 0) return oracle::Mat(n, std::vector<oracle::u64>(n, 0));
  return oracle::matmul(th::random_mat(g, n, r, p), th::random_mat(g, r, n, p), p);
}

}  // namespace

TEST_CASE("krylov_sequence matches repeated products") {
  const Word p = 1009;
  std::mt19937_64 g(4);
  for (std::size_t n : {1, 2, 3, 6, 9}) {
    for (std::size_t count : {std::size_t{1}, n, 2 * n - 1, 2 * n}) {
      if (count == 0) continue;
      CAPTURE(n);
      CAPTURE(count);
      const auto a = th::random_mat(g, n, n, p);
      std::vector<Word> u(n);
      for (auto& x : u) x = g() % p;
      CliqueWorld w(n, PrimeField(p), 1);
      const auto d = scatter(w, "A", th::from_oracle(a));
      w.store(0).put("u", u);
      const auto seq = krylov_sequence(w, d, "u", count, "K");
      oracle::Mat col(n, std::vector<oracle::u64>(1));
      for (std::size_t i = 0; i < n; ++i) col[i][0] = u[i];
      for (std::size_t j = 0; j < count; ++j) {
        const auto& got = w.store(j % n).get(seq.chunk_key(j / n));
        for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == col[i][0]);
        col = oracle::matmul(a, col, p);
      }
    }
  }
}

TEST_CASE("minpol_monte_carlo") {
  const Word p = 1000003;
  std::mt19937_64 g(8);
  for (std::size_t n : {1, 4, 7, 12}) {
    CAPTURE(n);
    REQUIRE(monte_carlo_field_ok(p, n));
    for (std::size_t r : {n, n / 2}) {
      const auto a = random_rank(g, n, r, p);
      CliqueWorld w(n, PrimeField(p), 11 + n);
      const auto mp = minpol_monte_carlo(w, scatter(w, "A", th::from_oracle(a)));
      CHECK(mp.coeffs() == th::to_oracle_vec(oracle::minpol(a, p)));
    }
  }
  SUBCASE("derogatory matrix") {
    // diag(2, 2, 3): minimal polynomial (x-2)(x-3) of degree 2.
    oracle::Mat a = {{2, 0, 0}, {0, 2, 0}, {0, 0, 3}};
    CliqueWorld w(3, PrimeField(p), 5);
    const auto mp = minpol_monte_carlo(w, scatter(w, "A", th::from_oracle(a)));
    CHECK(mp.degree() == 2);
    CHECK(mp.coeffs() == th::to_oracle_vec(oracle::minpol(a, p)));
  }
}

TEST_CASE("det_rand") {
  const Word p = 1000003;
  std::mt19937_64 g(15);
  for (std::size_t n : {1, 2, 5, 8, 13}) {
    CAPTURE(n);
    const auto a = th::random_mat(g, n, n, p);
    CliqueWorld w(n, PrimeField(p), n);
    CHECK(det_rand(w, scatter(w, "A", th::from_oracle(a))).value() == oracle::det(a, p));
  }
  SUBCASE("singular gives zero") {
    const auto a = random_rank(g, 6, 4, p);
    CliqueWorld w(6, PrimeField(p), 2);
    CHECK(det_rand(w, scatter(w, "A", th::from_oracle(a))).value() == 0);
  }
  SUBCASE("identity is not cyclic but DA is") {
    CliqueWorld w(5, PrimeField(p), 3);
    CHECK(det_rand(w, scatter(w, "I", th::from_oracle(oracle::identity(5)))).value() == 1);
  }
}

TEST_CASE("solve") {
  const Word p = 1000003;
  std::mt19937_64 g(21);
  for (std::size_t n : {1, 3, 8, 10}) {
    CAPTURE(n);
    const auto a = th::random_mat(g, n, n, p);
    std::vector<oracle::u64> b(n);
    for (auto& x : b) x = g() % p;
    CliqueWorld w(n, PrimeField(p), 7);
    const auto d = scatter(w, "A", th::from_oracle(a));
    for (std::size_t l = 0; l < n; ++l) w.store(l).put("b", {b[l]});
    const auto x = solve(w, d, "b", "x");
    const auto want = oracle::solve(a, b, p);
    REQUIRE(want);
    CHECK(x == th::to_oracle_vec(*want));
    for (std::size_t l = 0; l < n; ++l) CHECK(w.store(l).get("x") == std::vector<Word>{x[l]});
  }
  SUBCASE("singular system throws") {
    const auto a = random_rank(g, 5, 3, p);
    CliqueWorld w(5, PrimeField(p), 1);
    const auto d = scatter(w, "A", th::from_oracle(a));
    for (std::size_t l = 0; l < 5; ++l) w.store(l).put("b", {g() % p});
    CHECK_THROWS_AS(solve(w, d, "b", "x"), singular_matrix_error);
  }
}

TEST_CASE("rank_rand") {
  const Word p = 1000003;
  std::mt19937_64 g(33);
  for (std::size_t n : {1, 4, 9}) {
    for (std::size_t r = 0; r <= n; ++r) {
      CAPTURE(n);
      CAPTURE(r);
      const auto a = random_rank(g, n, r, p);
      CliqueWorld w(n, PrimeField(p), n * 10 + r);
      CHECK(rank_rand(w, scatter(w, "A", th::from_oracle(a))) == oracle::rank(a, p));
    }
  }
}

TEST_CASE("toeplitz_pair is unit triangular Toeplitz") {
  CliqueWorld w(6, PrimeField(101), 9);
  const auto [u, v] = toeplitz_pair(w, "T");
  const auto U = gather(w, u), V = gather(w, v);
  CHECK(gather_cols(w, u) == U);
  CHECK(gather_cols(w, v) == V);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      if (i == j) {
        CHECK(U(i, j) == 1);
        CHECK(V(i, j) == 1);
      }
      if (i > j) CHECK(U(i, j) == 0);
      if (i < j) CHECK(V(i, j) == 0);
      if (i > 0 && j > 0) {
        CHECK(U(i, j) == U(i - 1, j - 1));
        CHECK(V(i, j) == V(i - 1, j - 1));
      }
    }
}
