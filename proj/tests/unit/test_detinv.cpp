#include "ccq/detinv.hpp"

#include <map>

#include "ccq/mm.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace ccq;

namespace {

oracle::Mat random_lower(std::mt19937_64& g, std::size_t n, oracle::u64 p) {
  auto m = th::random_mat(g, n, n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = 0;
    m[i][i] = 1 + g() % (p - 1);
  }
  return m;
}

}  // namespace

TEST_CASE("tri_inverse") {
  const Word p = 101;
  std::mt19937_64 g(3);
  for (std::size_t n : {1, 2, 3, 5, 8, 11, 16}) {
    CAPTURE(n);
    const auto a = random_lower(g, n, p);
    CliqueWorld w(n, PrimeField(p), 1);
    const auto inv = tri_inverse(w, scatter(w, "A", th::from_oracle(a)), "X");
    CHECK(th::to_oracle(gather(w, inv)) == *oracle::inverse(a, p));
    CHECK(th::to_oracle(gather_cols(w, inv)) == *oracle::inverse(a, p));
  }
  SUBCASE("identity and diagonal") {
    CliqueWorld w(4, PrimeField(p), 1);
    const auto id = th::from_oracle(oracle::identity(4));
    CHECK(gather(w, tri_inverse(w, scatter(w, "I", id), "X")) == id);
    oracle::Mat d = oracle::identity(4);
    for (std::size_t i = 0; i < 4; ++i) d[i][i] = i + 2;
    oracle::Mat dinv = oracle::identity(4);
    for (std::size_t i = 0; i < 4; ++i) dinv[i][i] = oracle::invm(i + 2, p);
    CHECK(th::to_oracle(gather(w, tri_inverse(w, scatter(w, "D", th::from_oracle(d)), "Y"))) == dinv);
  }
  SUBCASE("zero diagonal names its index") {
    auto a = random_lower(g, 8, p);
    a[5][5] = 0;
    CliqueWorld w(8, PrimeField(p), 1);
    try {
      tri_inverse(w, scatter(w, "A", th::from_oracle(a)), "X");
      FAIL("expected singular_matrix_error");
    } catch (const singular_matrix_error& e) {
      CHECK(e.index() == 5);
    }
  }
  SUBCASE("rejects upper entries") {
    auto a = random_lower(g, 4, p);
    a[0][3] = 1;
    CliqueWorld w(4, PrimeField(p), 1);
    CHECK_THROWS_AS(tri_inverse(w, scatter(w, "A", th::from_oracle(a)), "X"), dimension_error);
  }
}

TEST_CASE("tri_inverse recursion cost") {
  // R(n) <= R(n/2) + 2 R_M(n/2) + 4, the max over both halves.
  std::map<std::size_t, std::uint64_t> cost;
  for (std::size_t n : {1, 2, 4, 8, 16, 32}) {
    std::mt19937_64 g(n);
    CliqueWorld w(n, PrimeField(101), 1);
    tri_inverse(w, scatter(w, "A", th::from_oracle(random_lower(g, n, 101))), "X");
    cost[n] = w.ledger().total_rounds();
    if (n > 1) {
      const std::uint64_t rm = predict_mm_rounds(n / 2, n / 2, 1, KernelFamily::trivial);
      CHECK(cost[n] <= cost[n / 2] + 2 * rm + 4);
    }
  }
}

TEST_CASE("power_batch") {
  const Word p = 101;
  SUBCASE("random matrix against iterated products") {
    std::mt19937_64 g(4);
    const std::size_t n = 8, q = power_split(n);
    const auto a = th::random_mat(g, n, n, p);
    CliqueWorld w(n, PrimeField(p), 1);
    const auto pt = power_batch(w, scatter(w, "A", th::from_oracle(a)), q, "pw");
    REQUIRE(pt.low.size() == q);
    REQUIRE(pt.stride.size() == q);
    for (std::size_t i = 0; i < q; ++i) {
      CHECK(th::to_oracle(gather(w, pt.low[i])) == oracle::matpow(a, i, p));
      CHECK(th::to_oracle(gather_cols(w, pt.stride[i])) == oracle::matpow(a, i * q, p));
    }
  }
  SUBCASE("4-cycle permutation has order 4") {
    oracle::Mat c(4, std::vector<oracle::u64>(4, 0));
    for (std::size_t i = 0; i < 4; ++i) c[i][(i + 1) % 4] = 1;
    CliqueWorld w(4, PrimeField(p), 1);
    const auto pt = power_batch(w, scatter(w, "A", th::from_oracle(c)), 3, "pw");
    CHECK(th::to_oracle(gather(w, pt.stride[0])) == oracle::identity(4));
    CHECK(th::to_oracle(gather(w, pt.low[2])) == oracle::matmul(c, c, p));
    CHECK(th::to_oracle(gather(w, pt.stride[2])) == oracle::matpow(c, 6, p));
  }
  SUBCASE("zero matrix") {
    CliqueWorld w(4, PrimeField(p), 1);
    const auto pt = power_batch(w, scatter(w, "A", FieldMatrix(4, 4, 0)), 3, "pw");
    for (std::size_t i = 1; i < 3; ++i) CHECK(gather(w, pt.low[i]) == FieldMatrix(4, 4, 0));
  }
}

TEST_CASE("char_poly, det and inverse") {
  SUBCASE("identity over GF(7)") {
    CliqueWorld w(4, PrimeField(7), 1);
    const auto c = char_poly(w, scatter(w, "I", th::from_oracle(oracle::identity(4))));
    CHECK(c == std::vector<Word>{3, 6, 3, 1});
  }
  SUBCASE("companion matrix of x^2 - 3x + 2") {
    CliqueWorld w(2, PrimeField(101), 1);
    const auto c = char_poly(w, scatter(w, "A", th::from_oracle({{0, 101 - 2}, {1, 3}})));
    CHECK(c == std::vector<Word>(th::to_oracle_vec(oracle::char_poly({{0, 99}, {1, 3}}, 101))));
    CHECK(c == std::vector<Word>{101 - 3, 2});
  }
  SUBCASE("zero matrix") {
    CliqueWorld w(4, PrimeField(101), 1);
    CHECK(char_poly(w, scatter(w, "Z", FieldMatrix(4, 4, 0))) == std::vector<Word>(4, 0));
  }
  SUBCASE("small characteristic is rejected") {
    CliqueWorld w(8, PrimeField(7), 1);
    CHECK_THROWS_AS(char_poly(w, scatter(w, "I", th::from_oracle(oracle::identity(8)))), unsupported_field_error);
  }
  SUBCASE("diagonal determinant") {
    oracle::Mat d = oracle::identity(4);
    for (std::size_t i = 0; i < 4; ++i) d[i][i] = i + 1;
    CliqueWorld w(4, PrimeField(101), 1);
    CHECK(det(w, scatter(w, "D", th::from_oracle(d))).value() == 24);
  }
  SUBCASE("block inverse") {
    const oracle::Mat a{{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    CliqueWorld w(4, PrimeField(101), 1);
    const auto inv = gather(w, inverse(w, scatter(w, "A", th::from_oracle(a)), "X"));
    CHECK(inv(0, 1) == 100);
    CHECK(th::to_oracle(inv) == *oracle::inverse(a, 101));
  }
  SUBCASE("random instances against elimination") {
    const Word p = 101;
    std::mt19937_64 g(11);
    for (std::size_t n : {1, 2, 3, 5, 8, 9, 16}) {
      for (int rep = 0; rep < 4; ++rep) {
        CAPTURE(n);
        const auto a = th::random_mat(g, n, n, p);
        CliqueWorld w(n, PrimeField(p), 1);
        const auto da = scatter(w, "A", th::from_oracle(a));
        CHECK(char_poly(w, da) == std::vector<Word>(th::to_oracle_vec(oracle::char_poly(a, p))));
        CHECK(det(w, da).value() == oracle::det(a, p));
        const auto expect = oracle::inverse(a, p);
        if (expect) {
          const auto x = inverse(w, da, "X");
          CHECK(th::to_oracle(gather(w, x)) == *expect);
          CHECK(th::to_oracle(gather_cols(w, x)) == *expect);
        } else {
          CHECK_THROWS_AS(inverse(w, da, "X"), singular_matrix_error);
        }
      }
    }
  }
  SUBCASE("singular input") {
    CliqueWorld w(4, PrimeField(101), 1);
    oracle::Mat a(4, std::vector<oracle::u64>(4, 3));
    CHECK_THROWS_AS(inverse(w, scatter(w, "A", th::from_oracle(a)), "X"), singular_matrix_error);
  }
}

TEST_CASE("det is multiplicative") {
  const Word p = 1009;
  std::mt19937_64 g(13);
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = th::random_mat(g, 6, 6, p), b = th::random_mat(g, 6, 6, p);
    CliqueWorld w(6, PrimeField(p), 1);
    const auto da = scatter(w, "A", th::from_oracle(a)), db = scatter(w, "B", th::from_oracle(b));
    const auto ab = mm(w, da, db, "AB");
    CHECK(det(w, ab) == det(w, da) * det(w, db));
  }
}
