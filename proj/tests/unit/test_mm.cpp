#include "ccq/mm.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace ccq;

namespace {

struct Case {
  std::size_t n, m, k;
};

void check_products(const Case& c, KernelFamily fam, Layout la, Layout lb, std::uint64_t seed) {
  const Word p = 101;
  std::mt19937_64 g(seed);
  CliqueWorld w(c.n, PrimeField(p), seed);
  std::vector<oracle::Mat> oa, ob;
  std::vector<DistributedMatrix> da, db;
  for (std::size_t s = 0; s < c.k; ++s) {
    oa.push_back(th::random_mat(g, c.n, c.m, p));
    ob.push_back(th::random_mat(g, c.m, c.n, p));
    da.push_back(scatter(w, "A" + std::to_string(s), th::from_oracle(oa.back()), la));
    db.push_back(scatter(w, "B" + std::to_string(s), th::from_oracle(ob.back()), lb));
  }
  const auto out = mm_multi(w, da, db, "C", {fam, 1});
  REQUIRE(out.size() == c.k);
  for (std::size_t s = 0; s < c.k; ++s) {
    const auto expect = oracle::matmul(oa[s], ob[s], p);
    CHECK(th::to_oracle(gather(w, out[s])) == expect);
    CHECK(th::to_oracle(gather_cols(w, out[s])) == expect);
  }
}

}  // namespace

TEST_CASE("mm_multi matches the triple loop across regimes and layouts") {
  const std::vector<Case> cases{{8, 8, 1}, {16, 16, 1}, {16, 3, 1},  {16, 16, 4}, {9, 5, 2},  {16, 40, 1},
                                {8, 64, 2}, {16, 16, 16}, {8, 8, 20}, {12, 7, 3}, {27, 27, 1}, {1, 1, 1}};
  std::uint64_t seed = 1;
  for (const auto& c : cases)
    for (auto fam : {KernelFamily::trivial, KernelFamily::strassen}) {
      CAPTURE(c.n);
      CAPTURE(c.m);
      CAPTURE(c.k);
      check_products(c, fam, Layout::rows, Layout::cols, seed++);
      if (c.m <= c.n) check_products(c, fam, Layout::cols, Layout::rows, seed++);
    }
}

TEST_CASE("every medium plan in a small search space is correct") {
  const std::size_t n = 12, m = 10, k = 2;
  const Word p = 97;
  std::mt19937_64 g(5);
  const auto a = th::random_mat(g, n, m, p), b = th::random_mat(g, m, n, p);
  const auto a2 = th::random_mat(g, n, m, p), b2 = th::random_mat(g, m, n, p);
  std::vector<BilinearAlgorithm> algs{trivial_algorithm(1, 1), trivial_algorithm(2, 1), trivial_algorithm(1, 3),
                                      trivial_algorithm(2, 1), strassen()};
  for (const auto& alg : algs)
    for (std::size_t qu = 1; qu <= n / k; ++qu)
      for (std::size_t qv = 1; qu * qv * k <= n; ++qv) {
        if (alg.t * k > n) continue;
        CliqueWorld w(n, PrimeField(p), 1);
        std::vector<DistributedMatrix> da{scatter(w, "A0", th::from_oracle(a), Layout::rows),
                                          scatter(w, "A1", th::from_oracle(a2), Layout::rows)};
        std::vector<DistributedMatrix> db{scatter(w, "B0", th::from_oracle(b), Layout::cols),
                                          scatter(w, "B1", th::from_oracle(b2), Layout::cols)};
        const auto plan = make_medium_plan(n, m, k, alg, qu, qv);
        const auto out = mm_medium(w, FieldRing{PrimeField(p)}, std::span<const DistributedMatrix>(da),
                                   std::span<const DistributedMatrix>(db), "C", plan);
        CHECK(th::to_oracle(gather(w, out[0])) == oracle::matmul(a, b, p));
        CHECK(th::to_oracle(gather_cols(w, out[1])) == oracle::matmul(a2, b2, p));
        CHECK(w.ledger().total_rounds() <= plan.predicted_rounds());
      }
}

TEST_CASE("min-plus products over the same communication pattern") {
  std::mt19937_64 g(9);
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{8, 8}, {16, 5}, {8, 70}, {16, 16}}) {
    const auto a = th::random_minplus(g, n, m, 7, 20), b = th::random_minplus(g, m, n, 7, 20);
    CliqueWorld w(n, PrimeField(101), 3);
    const auto da = scatter(w, "A", th::encode(a), Layout::rows);
    const auto db = scatter(w, "B", th::encode(b), Layout::cols);
    const auto out = mm_multi(w, MinPlusRing{}, std::span(&da, 1), std::span(&db, 1), "C");
    CHECK(th::decode(gather(w, out[0])) == oracle::minplus(a, b));
  }
  CliqueWorld w(4, PrimeField(101), 3);
  const auto d = scatter(w, "A", th::encode(oracle::IMat(4, std::vector<oracle::i64>(4, 1))), Layout::rows_and_cols);
  CHECK_THROWS_AS(mm_multi(w, MinPlusRing{}, std::span(&d, 1), std::span(&d, 1), "C", {KernelFamily::strassen, 1}),
                  std::invalid_argument);
}

TEST_CASE("branch selection and plan validation") {
  CHECK(select_branch(64, 8, 1) == MmBranch::small_m);
  CHECK(select_branch(64, 64, 1) == MmBranch::medium_m);
  CHECK(select_branch(64, 4096, 1) == MmBranch::large_m);
  CHECK(select_branch(64, 512, 8) == MmBranch::large_m);
  CHECK_THROWS_AS(make_medium_plan(16, 16, 2, trivial_algorithm(3, 1), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_medium_plan(16, 16, 2, trivial_algorithm(1, 1), 3, 3), std::invalid_argument);
  CliqueWorld w(4, PrimeField(7), 1);
  const auto a = scatter(w, "A", FieldMatrix(4, 3, 1), Layout::rows);
  const auto b = scatter(w, "B", FieldMatrix(4, 4, 1), Layout::cols);
  CHECK_THROWS_AS(mm(w, a, b, "C"), dimension_error);
}

TEST_CASE("inputs within budget route in predicted rounds and outputs are data independent") {
  const std::size_t n = 16;
  std::vector<CostLedger> ledgers;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 g(seed);
    CliqueWorld w(n, PrimeField(101), seed);
    const auto a = scatter(w, "A", th::from_oracle(th::random_mat(g, n, n, 101)), Layout::rows);
    const auto b = scatter(w, "B", th::from_oracle(th::random_mat(g, n, n, 101)), Layout::cols);
    mm(w, a, b, "C");
    ledgers.push_back(w.ledger());
  }
  for (const auto& l : ledgers) CHECK(l == ledgers.front());
  CHECK(ledgers.front().total_rounds() == predict_mm_rounds(n, n, 1, KernelFamily::trivial));
}
