#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ccq/detinv.hpp"
#include "ccq/distprod.hpp"
#include "ccq/errors.hpp"
#include "ccq/graphs.hpp"
#include "ccq/io.hpp"
#include "ccq/krylov.hpp"
#include "ccq/mm.hpp"
#include "ccq/planner.hpp"
#include "oracle/oracle.hpp"

#ifndef CCQ_VERSION
#define CCQ_VERSION "dev"
#endif

namespace ccq::app {

namespace {

constexpr Word kDefaultPrime = 1000003;
constexpr std::size_t kAlgebraOracleLimit = 64;
constexpr std::size_t kGraphOracleLimit = 256;
constexpr std::size_t kMatchingOracleLimit = 20;

enum class FieldRule { fixed, monte_carlo, tutte, unused };

struct AlgInfo {
  FieldRule field;
  bool monte_carlo;
  bool graph;
  std::size_t oracle_limit;
};

const std::map<std::string, AlgInfo>& registry() {
  static const std::map<std::string, AlgInfo> r{
      {"mm", {FieldRule::fixed, false, false, kAlgebraOracleLimit}},
      {"distprod", {FieldRule::unused, false, false, kAlgebraOracleLimit}},
      {"det", {FieldRule::fixed, false, false, kAlgebraOracleLimit}},
      {"det-deterministic", {FieldRule::fixed, false, false, kAlgebraOracleLimit}},
      {"char-poly", {FieldRule::fixed, false, false, kAlgebraOracleLimit}},
      {"inverse", {FieldRule::fixed, false, false, kAlgebraOracleLimit}},
      {"tri-inverse", {FieldRule::fixed, false, false, kAlgebraOracleLimit}},
      {"minpol", {FieldRule::monte_carlo, true, false, kAlgebraOracleLimit}},
      {"det-rand", {FieldRule::monte_carlo, true, false, kAlgebraOracleLimit}},
      {"solve", {FieldRule::monte_carlo, true, false, kAlgebraOracleLimit}},
      {"rank", {FieldRule::monte_carlo, true, false, kAlgebraOracleLimit}},
      {"apsp", {FieldRule::unused, false, true, kGraphOracleLimit}},
      {"apsp-zwick", {FieldRule::unused, true, true, kGraphOracleLimit}},
      {"diameter", {FieldRule::unused, false, true, kGraphOracleLimit}},
      {"matching-size", {FieldRule::tutte, true, true, kMatchingOracleLimit}},
      {"allowed-edges", {FieldRule::tutte, true, true, kMatchingOracleLimit}},
      {"gallai-edmonds", {FieldRule::tutte, true, true, kMatchingOracleLimit}},
  };
  return r;
}

const AlgInfo& info(const std::string& alg) {
  const auto it = registry().find(alg);
  if (it == registry().end()) throw usage_error("unknown algorithm '" + alg + "'");
  return it->second;
}

Word default_prime(const AlgInfo& a, std::size_t n) {
  switch (a.field) {
    case FieldRule::monte_carlo: return least_prime_at_least(std::max(kDefaultPrime, monte_carlo_field_bound(n)));
    case FieldRule::tutte: return tutte_prime(n);
    case FieldRule::fixed:
    case FieldRule::unused: break;
  }
  return kDefaultPrime;
}

// ---- conversions ----------------------------------------------------------

oracle::Mat to_oracle(const FieldMatrix& m) {
  oracle::Mat r(m.rows(), std::vector<oracle::u64>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  return r;
}

oracle::IMat to_oracle_minplus(const Matrix<Word>& m) {
  oracle::IMat r(m.rows(), std::vector<oracle::i64>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const std::int64_t v = mp_decode(m(i, j));
      r[i][j] = v == kInf ? oracle::INF : v;
    }
  return r;
}

oracle::Graph to_oracle(const WeightedGraph& g) {
  oracle::Graph r{g.n, {}};
  for (const auto& e : g.edges) r.edges.emplace_back(e.u, e.v);
  return r;
}

oracle::IMat weight_matrix(const WeightedGraph& g) {
  oracle::IMat w(g.n, std::vector<oracle::i64>(g.n, oracle::INF));
  for (std::size_t i = 0; i < g.n; ++i) w[i][i] = 0;
  for (const auto& e : g.edges) {
    w[e.u][e.v] = std::min(w[e.u][e.v], e.w);
    if (!g.directed) w[e.v][e.u] = std::min(w[e.v][e.u], e.w);
  }
  return w;
}

std::int64_t max_abs_finite(const Matrix<Word>& m) {
  std::int64_t r = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const std::int64_t v = mp_decode(m(i, j));
      if (v != kInf) r = std::max(r, v < 0 ? -v : v);
    }
  return r;
}

Json words(const std::vector<Word>& v) { return Json(v); }

std::string join(const std::vector<Word>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s + "\n";
}

Json vertex_list(const std::vector<std::size_t>& v) { return Json(v); }

std::vector<std::size_t> vertices_where(const std::vector<bool>& b) {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i]) r.push_back(i);
  return r;
}

Json ledger_json(const CostLedger& l) {
  Json phases = Json::array();
  for (const auto& p : l.phases()) {
    if (p.kind == PhaseRecord::Kind::local) continue;
    Json j;
    j["name"] = p.name;
    j["kind"] = p.kind == PhaseRecord::Kind::route ? "route" : "parallel";
    j["subset"] = p.subset_size;
    j["rounds"] = p.rounds;
    j["messages"] = p.messages;
    if (p.kind == PhaseRecord::Kind::parallel) {
      j["branches"] = Json::array();
      for (const auto& b : p.branches) j["branches"].push_back(ledger_json(b));
    }
    phases.push_back(std::move(j));
  }
  Json r;
  r["rounds"] = l.total_rounds();
  r["messages"] = l.total_messages();
  r["phases"] = std::move(phases);
  return r;
}

// ---- execution context ----------------------------------------------------

struct Source {
  std::string text, origin;
};

std::string read_input(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::runtime_error& e) {
    throw usage_error(e.what());
  }
}

class Runner {
 public:
  explicit Runner(const RunRequest& req)
      : req_(req), info_(info(req.algorithm)), family_(parse_family(req.kernel)), gen_(make_gen(req.seed)) {}

  RunResult execute();

 private:
  static KernelFamily parse_family(const std::string& k) {
    try {
      return parse_kernel_family(k);
    } catch (const std::invalid_argument& e) {
      throw usage_error(e.what());
    }
  }
  static std::mt19937_64 make_gen(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x67656eU};
    return std::mt19937_64(seq);
  }

  std::optional<Source> source(const std::string& path, const std::string& text, const char* slot) {
    if (!path.empty() && !text.empty()) throw usage_error(std::string("both a file and inline text for ") + slot);
    if (!path.empty()) {
      Source s{read_input(path), path};
      input_[slot] = Json{{"source", "file"}, {"path", path}, {"digest", digest(s.text)}};
      return s;
    }
    if (!text.empty()) {
      input_[slot] = Json{{"source", "inline"}, {"digest", digest(text)}};
      return Source{text, std::string("<") + slot + ">"};
    }
    return std::nullopt;
  }

  void describe_generator(const std::string& kind, std::size_t n, std::size_t m) {
    input_["input"] = Json{{"source", "generator"}, {"kind", kind},       {"n", n},
                           {"m", m},                {"k", req_.k},       {"bound", req_.bound},
                           {"density", req_.density}};
  }

  Word choose_prime(std::size_t n, std::optional<Word> from_file) {
    if (from_file && req_.field_prime && *from_file != req_.field_prime)
      throw usage_error("input field p=" + std::to_string(*from_file) + " conflicts with --field-prime " +
                        std::to_string(req_.field_prime));
    Word p = from_file ? *from_file : req_.field_prime ? req_.field_prime : default_prime(info_, n);
    if (!is_prime(p)) throw usage_error("field size " + std::to_string(p) + " is not prime");
    if (info_.field == FieldRule::monte_carlo && !monte_carlo_field_ok(p, n))
      warnings_.push_back("field size " + std::to_string(p) + " is below 4 n^2 ceil(log2 n) = " +
                          std::to_string(monte_carlo_field_bound(n)) + "; the success bound does not hold");
    p_ = p;
    return p;
  }

  CliqueWorld& make_world(std::size_t n, Word p) {
    if (n == 0) throw usage_error("n must be positive");
    world_ = std::make_unique<CliqueWorld>(n, PrimeField(p), req_.seed);
    world_->set_parallel_local(req_.parallel);
    return *world_;
  }

  bool verifying(std::size_t n) const { return req_.verify && n <= info_.oracle_limit; }
  void check(bool ok, const std::string& oracle) {
    verdict_ = ok ? Verdict::pass : Verdict::fail;
    oracle_ = oracle;
  }

  FieldMatrix random_matrix(std::size_t r, std::size_t c, Word p) {
    FieldMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform_below(gen_, p);
    return m;
  }
  FieldMatrix random_lower(std::size_t n, Word p) {
    FieldMatrix m = random_matrix(n, n, p);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) m(i, j) = 0;
      m(i, i) = 1 + uniform_below(gen_, p - 1);
    }
    return m;
  }
  // X Y with X n x r, Y r x n, r uniform in [0, n].
  FieldMatrix random_low_rank(std::size_t n, Word p) {
    const std::size_t r = uniform_below(gen_, n + 1);
    const FieldMatrix x = random_matrix(n, r, p), y = random_matrix(r, n, p);
    const PrimeField f(p);
    FieldMatrix m(n, n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t t = 0; t < r; ++t)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = f.add(m(i, j), f.mul(x(i, t), y(t, j)));
    return m;
  }
  Matrix<Word> random_minplus(std::size_t r, std::size_t c, std::int64_t M) {
    Matrix<Word> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        m(i, j) = uniform_below(gen_, 5) == 0
                      ? kInfWord
                      : mp_encode(static_cast<std::int64_t>(uniform_below(gen_, static_cast<Word>(2 * M + 1))) - M);
    return m;
  }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(gen_) < p; }

  WeightedGraph random_graph(std::size_t n, bool directed, bool weighted, bool connected, bool perfect) {
    WeightedGraph g{n, directed, weighted ? req_.bound : 1, {}};
    std::set<std::pair<std::size_t, std::size_t>> seen;
    auto add = [&](std::size_t u, std::size_t v) {
      if (u == v) return;
      if (!directed && u > v) std::swap(u, v);
      if (!seen.insert({u, v}).second) return;
      const std::int64_t wt = weighted ? static_cast<std::int64_t>(uniform_below(gen_, static_cast<Word>(g.M) + 1)) : 1;
      g.edges.push_back({u, v, wt});
    };
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen_);
    if (connected)
      for (std::size_t i = 1; i < n; ++i) add(perm[uniform_below(gen_, i)], perm[i]);
    if (perfect)
      for (std::size_t i = 0; i + 1 < n; i += 2) add(perm[i], perm[i + 1]);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = directed ? 0 : u + 1; v < n; ++v)
        if (u != v && coin(req_.density)) add(u, v);
    return g;
  }

  FieldMatrix square_input(const char* kind, const std::function<FieldMatrix(std::size_t, Word)>& gen_fn) {
    if (auto s = source(req_.input, req_.input_text, "input")) {
      auto d = parse_field_matrix(s->text, s->origin);
      if (d.m.rows() != d.m.cols()) throw usage_error("square matrix expected");
      choose_prime(d.m.rows(), d.p);
      return d.m;
    }
    describe_generator(kind, req_.n, req_.n);
    return gen_fn(req_.n, choose_prime(req_.n, std::nullopt));
  }

  WeightedGraph graph_input(bool directed, bool weighted, bool connected, bool perfect) {
    if (auto s = source(req_.input, req_.input_text, "input")) return parse_graph(s->text, s->origin);
    describe_generator(perfect ? "graph-with-perfect-matching" : connected ? "connected-graph" : "graph", req_.n, req_.n);
    if (perfect && req_.n % 2) throw usage_error("allowed-edges generator needs even n");
    return random_graph(req_.n, directed, weighted, connected, perfect);
  }

  void run_mm();
  void run_distprod();
  void run_square();
  void run_solve();
  void run_apsp();
  void run_matching();

  const RunRequest& req_;
  const AlgInfo& info_;
  KernelFamily family_;
  std::mt19937_64 gen_;
  Json input_ = Json::object();
  Json result_ = Json::object();
  std::string output_;
  Verdict verdict_ = Verdict::skipped;
  std::string oracle_;
  std::vector<std::string> warnings_;
  Word p_ = 0;
  std::unique_ptr<CliqueWorld> world_;
};

void Runner::run_mm() {
  std::vector<FieldMatrix> as, bs;
  std::size_t n = req_.n, m = req_.m ? req_.m : req_.n;
  auto sa = source(req_.input, req_.input_text, "input");
  auto sb = source(req_.input2, req_.input2_text, "input2");
  if (sa || sb) {
    if (!sa || !sb) throw usage_error("mm needs both --input and --input2");
    auto a = parse_field_matrix(sa->text, sa->origin), b = parse_field_matrix(sb->text, sb->origin);
    if (a.p != b.p) throw usage_error("inputs use different fields");
    if (a.m.cols() != b.m.rows() || b.m.cols() != a.m.rows()) throw usage_error("shapes must be n x m and m x n");
    n = a.m.rows();
    m = a.m.cols();
    choose_prime(n, a.p);
    as.push_back(std::move(a.m));
    bs.push_back(std::move(b.m));
  } else {
    describe_generator("uniform", n, m);
    const Word p = choose_prime(n, std::nullopt);
    for (std::size_t s = 0; s < req_.k; ++s) {
      as.push_back(random_matrix(n, m, p));
      bs.push_back(random_matrix(m, n, p));
    }
  }
  auto& w = make_world(n, p_);
  std::vector<DistributedMatrix> da, db;
  for (std::size_t s = 0; s < as.size(); ++s) {
    da.push_back(scatter(w, "A/" + std::to_string(s), as[s], Layout::rows));
    db.push_back(scatter(w, "B/" + std::to_string(s), bs[s], Layout::cols));
  }
  const auto out = mm_multi(w, da, db, "C", {family_, 1});
  const std::size_t k = as.size();
  result_["n"] = n;
  result_["m"] = m;
  result_["k"] = k;
  result_["branch"] = to_string(select_branch(n, m, std::min(k, n)));
  result_["predicted_rounds"] = predict_mm_rounds(n, m, k, family_);
  bool ok = true;
  for (std::size_t s = 0; s < k; ++s) {
    const FieldMatrix c = gather(w, out[s]);
    output_ += format_field_matrix(c, p_);
    if (verifying(n)) ok = ok && to_oracle(c) == oracle::matmul(to_oracle(as[s]), to_oracle(bs[s]), p_);
  }
  if (verifying(n)) check(ok, "triple-loop product");
}

void Runner::run_distprod() {
  Matrix<Word> a, b;
  std::int64_t M = req_.bound;
  auto sa = source(req_.input, req_.input_text, "input");
  auto sb = source(req_.input2, req_.input2_text, "input2");
  if (sa || sb) {
    if (!sa || !sb) throw usage_error("distprod needs both --input and --input2");
    auto pa = parse_minplus(sa->text, sa->origin), pb = parse_minplus(sb->text, sb->origin);
    if (pa.m.cols() != pb.m.rows() || pb.m.cols() != pa.m.rows()) throw usage_error("shapes must be n x m and m x n");
    M = std::max(pa.M, pb.M);
    a = std::move(pa.m);
    b = std::move(pb.m);
  } else {
    const std::size_t m = req_.m ? req_.m : req_.n;
    describe_generator("minplus", req_.n, m);
    a = random_minplus(req_.n, m, M);
    b = random_minplus(m, req_.n, M);
  }
  const std::size_t n = a.rows(), m = a.cols();
  auto& w = make_world(n, choose_prime(n, std::nullopt));
  const auto d = gather(w, dist_prod(w, scatter(w, "A", a, Layout::rows), scatter(w, "B", b, Layout::cols), M, "D",
                                     family_));
  result_["n"] = n;
  result_["m"] = m;
  result_["M"] = M;
  result_["strategy"] = to_string(select_strategy(n, m, M, family_));
  output_ = format_minplus(d, max_abs_finite(d));
  if (verifying(n)) check(to_oracle_minplus(d) == oracle::minplus(to_oracle_minplus(a), to_oracle_minplus(b)),
                          "direct min-plus product");
}

void Runner::run_square() {
  const std::string& alg = req_.algorithm;
  FieldMatrix a;
  if (alg == "tri-inverse")
    a = square_input("lower-triangular", [&](std::size_t n, Word p) { return random_lower(n, p); });
  else if (alg == "rank" || alg == "minpol")
    a = square_input("low-rank", [&](std::size_t n, Word p) { return random_low_rank(n, p); });
  else
    a = square_input("uniform", [&](std::size_t n, Word p) { return random_matrix(n, n, p); });
  const std::size_t n = a.rows();
  auto& w = make_world(n, p_);
  const auto da = scatter(w, "A", a);
  const bool v = verifying(n);
  const auto oa = to_oracle(a);
  result_["n"] = n;
  if (alg == "det" || alg == "det-deterministic" || alg == "det-rand") {
    const Word d = (alg == "det-rand" ? det_rand(w, da, family_) : det(w, da, family_)).value();
    result_["det"] = d;
    output_ = std::to_string(d) + "\n";
    if (v) check(d == oracle::det(oa, p_), "elimination");
  } else if (alg == "char-poly") {
    const auto c = char_poly(w, da, family_);
    result_["coefficients"] = words(c);
    output_ = join(c);
    if (v) {
      const auto expect = oracle::char_poly(oa, p_);
      check(std::equal(c.begin(), c.end(), expect.begin(), expect.end()), "interpolated det(xI - A)");
    }
  } else if (alg == "minpol") {
    const auto mp = minpol_monte_carlo(w, da, family_);
    result_["degree"] = mp.degree();
    result_["coefficients"] = words(mp.coeffs());
    output_ = join(mp.coeffs());
    if (v) {
      const auto expect = oracle::minpol(oa, p_);
      check(std::equal(mp.coeffs().begin(), mp.coeffs().end(), expect.begin(), expect.end()), "linear dependency of powers");
    }
  } else if (alg == "rank") {
    const std::size_t r = rank_rand(w, da, family_);
    result_["rank"] = r;
    output_ = std::to_string(r) + "\n";
    if (v) check(r == oracle::rank(oa, p_), "elimination");
  } else {
    std::optional<FieldMatrix> inv;
    try {
      inv = gather(w, alg == "tri-inverse" ? tri_inverse(w, da, "X", family_) : inverse(w, da, "X", family_));
    } catch (const singular_matrix_error&) {
      result_["singular"] = true;
      output_ = "singular\n";
    }
    if (inv) {
      result_["singular"] = false;
      output_ = format_field_matrix(*inv, p_);
    }
    if (v) {
      const auto expect = oracle::inverse(oa, p_);
      check(inv ? expect && to_oracle(*inv) == *expect : !expect, "elimination");
    }
  }
}

void Runner::run_solve() {
  const FieldMatrix a = square_input("uniform", [&](std::size_t n, Word p) { return random_matrix(n, n, p); });
  const std::size_t n = a.rows();
  std::vector<Word> b(n);
  if (auto s = source(req_.input2, req_.input2_text, "input2")) {
    auto d = parse_field_matrix(s->text, s->origin);
    if (d.p != p_) throw usage_error("right-hand side uses a different field");
    if (d.m.rows() != n || d.m.cols() != 1) throw usage_error("right-hand side must be n x 1");
    for (std::size_t i = 0; i < n; ++i) b[i] = d.m(i, 0);
  } else {
    for (auto& x : b) x = uniform_below(gen_, p_);
  }
  auto& w = make_world(n, p_);
  for (std::size_t l = 0; l < n; ++l) w.store(l).put("b", {b[l]});
  std::optional<std::vector<Word>> x;
  try {
    x = solve(w, scatter(w, "A", a), "b", "x", family_);
  } catch (const singular_matrix_error&) {
  }
  result_["n"] = n;
  result_["solved"] = x.has_value();
  if (x) {
    result_["x"] = words(*x);
    FieldMatrix col(n, 1);
    for (std::size_t i = 0; i < n; ++i) col(i, 0) = (*x)[i];
    output_ = format_field_matrix(col, p_);
  } else {
    output_ = "unsolved\n";
  }
  if (verifying(n)) {
    const auto oa = to_oracle(a);
    if (x) {
      oracle::Mat xc(n, std::vector<oracle::u64>(1));
      for (std::size_t i = 0; i < n; ++i) xc[i][0] = (*x)[i];
      const auto ax = oracle::matmul(oa, xc, p_);
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) ok = ok && ax[i][0] == b[i];
      check(ok, "substitution");
    } else {
      check(oracle::det(oa, p_) == 0, "elimination");
    }
  }
}

void Runner::run_apsp() {
  const std::string& alg = req_.algorithm;
  const WeightedGraph g = graph_input(alg != "diameter", true, alg == "diameter", false);
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  auto& w = make_world(g.n, choose_prime(g.n, std::nullopt));
  result_["n"] = g.n;
  result_["directed"] = g.directed;
  result_["M"] = g.M;
  const bool v = verifying(g.n);
  const auto expect = v ? oracle::floyd_warshall(weight_matrix(g)) : oracle::IMat{};
  if (alg == "diameter") {
    const std::int64_t d = diameter(w, g, family_);
    result_["diameter"] = d == kInf ? Json("inf") : Json(d);
    output_ = (d == kInf ? std::string("inf") : std::to_string(d)) + "\n";
    if (v) {
      oracle::i64 e = 0;
      for (const auto& row : expect)
        for (auto x : row) e = std::max(e, x);
      check(e == (d == kInf ? oracle::INF : d), "Floyd-Warshall");
    }
    return;
  }
  const auto d = gather(w, alg == "apsp" ? apsp_minplus_squaring(w, g, "D", family_)
                                         : apsp_zwick(w, g, "D", req_.zwick_c, family_));
  output_ = format_minplus(d, max_abs_finite(d));
  if (v) check(to_oracle_minplus(d) == expect, "Floyd-Warshall");
}

void Runner::run_matching() {
  const std::string& alg = req_.algorithm;
  const WeightedGraph g = graph_input(false, false, false, alg == "allowed-edges");
  if (g.directed) throw usage_error(alg + " needs an undirected graph");
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  auto& w = make_world(g.n, choose_prime(g.n, std::nullopt));
  result_["n"] = g.n;
  result_["edges"] = g.edges.size();
  const bool v = verifying(g.n);
  const auto og = to_oracle(g);
  if (alg == "matching-size") {
    const std::size_t s = matching_size(w, g, family_);
    result_["matching_size"] = s;
    output_ = std::to_string(s) + "\n";
    if (v) check(s == oracle::matching_number(og), "subset recursion");
  } else if (alg == "allowed-edges") {
    std::optional<std::vector<std::pair<std::size_t, std::size_t>>> edges;
    try {
      edges = allowed_edges(w, g, family_);
    } catch (const no_perfect_matching_error&) {
    }
    result_["perfect_matching"] = edges.has_value();
    if (edges) {
      for (auto& [a, b] : *edges)
        if (a > b) std::swap(a, b);
      std::sort(edges->begin(), edges->end());
      Json list = Json::array();
      for (auto [a, b] : *edges) {
        list.push_back({a, b});
        output_ += std::to_string(a) + " " + std::to_string(b) + "\n";
      }
      result_["allowed"] = std::move(list);
    } else {
      output_ = "no perfect matching\n";
    }
    if (v) {
      const bool has_pm = 2 * oracle::matching_number(og) == g.n;
      check(edges ? has_pm && *edges == oracle::allowed_edges(og) : !has_pm, "matching enumeration");
    }
  } else {
    const auto ge = gallai_edmonds(w, g, family_);
    result_["D"] = vertex_list(ge.d);
    result_["K"] = vertex_list(ge.k);
    result_["C"] = vertex_list(ge.c);
    auto line = [](const char* name, const std::vector<std::size_t>& vs) {
      std::string s = name;
      for (auto x : vs) s += " " + std::to_string(x);
      return s + "\n";
    };
    output_ = line("D:", ge.d) + line("K:", ge.k) + line("C:", ge.c);
    if (v) {
      const auto e = oracle::gallai_edmonds(og);
      check(ge.d == vertices_where(e.d) && ge.k == vertices_where(e.a) && ge.c == vertices_where(e.c),
            "matching enumeration");
    }
  }
}

RunResult Runner::execute() {
  const std::string& alg = req_.algorithm;
  try {
    try {
      if (alg == "mm") run_mm();
      else if (alg == "distprod") run_distprod();
      else if (alg == "solve") run_solve();
      else if (info_.graph && info_.field == FieldRule::tutte) run_matching();
      else if (info_.graph) run_apsp();
      else run_square();
    } catch (const monte_carlo_failure& e) {
      result_["failure"] = e.what();
      output_ = "failure\n";
      verdict_ = Verdict::fail;
      oracle_ = "none";
    }
  } catch (const parse_error& e) {
    throw usage_error(e.what());
  } catch (const unsupported_field_error& e) {
    throw usage_error(e.what());
  } catch (const dimension_error& e) {
    throw usage_error(e.what());
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }

  RunResult r;
  r.report["tool"] = "ccq";
  r.report["version"] = CCQ_VERSION;
  r.report["request"] = req_.to_json();
  r.report["input"] = input_;
  r.report["field_prime"] = p_;
  r.report["result"] = result_;
  r.report["output_digest"] = digest(output_);
  Json ver;
  ver["status"] = to_string(verdict_);
  if (!oracle_.empty()) ver["oracle"] = oracle_;
  r.report["verification"] = std::move(ver);
  r.report["warnings"] = warnings_;
  r.report["ledger"] = ledger_json(world_->ledger());
  r.output = std::move(output_);
  r.verdict = verdict_;
  r.ledger = world_->ledger();
  r.warnings = warnings_;
  return r;
}

std::vector<std::size_t> check_ascending(const std::vector<std::size_t>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1]) throw usage_error(std::string(what) + " must be strictly ascending");
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
  return r + "\"";
}

OmegaCurve load_curve(const PlanOptions& o) {
  if (o.omega) return OmegaCurve::constant(*o.omega);
  if (o.curve == "trivial") return OmegaCurve::trivial();
  if (o.curve == "strassen") return OmegaCurve::from_square(std::log2(7.0));
  return OmegaCurve::sampled(load_sampled(o.curve));
}

Json estimate_json(const CostEstimate& e) {
  Json j;
  j["regime"] = to_string(e.regime);
  if (e.regime == Regime::medium_m) j["gamma"] = e.gamma;
  j["exponent"] = e.exponent;
  return j;
}

}  // namespace

// ---- public API -------------------------------------------------------------

const std::vector<std::string>& algorithms() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

bool is_monte_carlo(const std::string& algorithm) { return info(algorithm).monte_carlo; }
bool is_graph_algorithm(const std::string& algorithm) { return info(algorithm).graph; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: break;
  }
  return "skipped";
}

Json RunRequest::to_json() const {
  Json j;
  j["algorithm"] = algorithm;
  if (!input.empty()) j["input"] = input;
  if (!input2.empty()) j["input2"] = input2;
  if (!input_text.empty()) j["input_text"] = input_text;
  if (!input2_text.empty()) j["input2_text"] = input2_text;
  j["n"] = n;
  j["m"] = m;
  j["k"] = k;
  j["bound"] = bound;
  j["density"] = density;
  j["seed"] = seed;
  j["field_prime"] = field_prime;
  j["kernel"] = kernel;
  j["zwick_c"] = zwick_c;
  j["verify"] = verify;
  return j;
}

RunRequest RunRequest::from_json(const Json& j) {
  try {
    RunRequest r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.input = j.value("input", "");
    r.input2 = j.value("input2", "");
    r.input_text = j.value("input_text", "");
    r.input2_text = j.value("input2_text", "");
    r.n = j.value("n", r.n);
    r.m = j.value("m", r.m);
    r.k = j.value("k", r.k);
    r.bound = j.value("bound", r.bound);
    r.density = j.value("density", r.density);
    r.seed = j.value("seed", r.seed);
    r.field_prime = j.value("field_prime", r.field_prime);
    r.kernel = j.value("kernel", r.kernel);
    r.zwick_c = j.value("zwick_c", r.zwick_c);
    r.verify = j.value("verify", r.verify);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw usage_error(std::string("malformed request: ") + e.what());
  }
}

RunResult run(const RunRequest& req) {
  if (req.k == 0) throw usage_error("k must be positive");
  if (req.bound < 0) throw usage_error("bound must be nonnegative");
  if (req.density < 0 || req.density > 1) throw usage_error("density must lie in [0, 1]");
  return Runner(req).execute();
}

bool VerifySummary::ok() const {
  if (runs == 0) return false;
  if (graphs > 0 && graphs_passed != graphs) return false;
  return rate() >= required;
}

Json VerifySummary::to_json() const {
  Json j;
  j["algorithm"] = algorithm;
  j["runs"] = runs;
  j["passed"] = passed;
  j["rate"] = rate();
  j["required"] = required;
  if (graphs > 0) {
    j["graphs"] = graphs;
    j["graphs_passed"] = graphs_passed;
  }
  j["ok"] = ok();
  return j;
}

VerifySummary verify(const VerifyOptions& opt) {
  const AlgInfo& a = info(opt.algorithm);
  VerifySummary s;
  s.algorithm = opt.algorithm;
  s.required = a.monte_carlo ? 0.95 : 1.0;
  RunRequest base;
  base.algorithm = opt.algorithm;
  base.kernel = opt.kernel;
  base.field_prime = opt.field_prime;
  base.density = opt.density;
  base.bound = opt.bound;
  auto tally = [&](const RunRequest& r) {
    const Verdict v = run(r).verdict;
    if (v == Verdict::skipped) throw usage_error("verification skipped for " + r.algorithm);
    s.verdicts.push_back(v);
    ++s.runs;
    if (v == Verdict::pass) ++s.passed;
    return v == Verdict::pass;
  };
  if (opt.exhaustive > 0) {
    if (!a.graph || a.field != FieldRule::tutte)
      throw usage_error("exhaustive mode covers matching-size, allowed-edges and gallai-edmonds");
    if (opt.exhaustive > 7) throw usage_error("oracle capacity exceeded: exhaustive enumeration needs n <= 7");
    if (opt.seeds == 0) throw usage_error("seeds must be positive");
    for (std::size_t n = 1; n <= opt.exhaustive; ++n)
      for (const auto& og : oracle::connected_graphs(n)) {
        if (opt.algorithm == "allowed-edges" && 2 * oracle::matching_number(og) != n) continue;
        WeightedGraph g{n, false, 1, {}};
        for (auto [u, v] : og.edges) g.edges.push_back({u, v, 1});
        RunRequest r = base;
        r.input_text = format_graph(g);
        std::size_t wins = 0;
        for (std::size_t k = 0; k < opt.seeds; ++k) {
          r.seed = opt.seed + k;
          wins += tally(r) ? 1 : 0;
        }
        ++s.graphs;
        if (2 * wins > opt.seeds) ++s.graphs_passed;
      }
    return s;
  }
  if (opt.n > a.oracle_limit)
    throw usage_error("oracle capacity exceeded: " + opt.algorithm + " is verified up to n = " +
                      std::to_string(a.oracle_limit));
  if (opt.trials == 0) throw usage_error("trials must be positive");
  base.n = opt.n;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    RunRequest r = base;
    r.seed = opt.seed + t;
    tally(r);
  }
  return s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw usage_error("slope needs two or more points");
  const double cnt = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw usage_error("slope needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = cnt * sxx - sx * sx;
  if (den == 0) throw usage_error("slope needs distinct x values");
  return (cnt * sxy - sx * sy) / den;
}

BenchResult bench(const BenchOptions& opt) {
  info(opt.algorithm);
  const bool ksweep = !opt.ks.empty();
  if (ksweep && opt.algorithm != "mm") throw usage_error("a k sweep needs algorithm mm");
  if (ksweep && opt.sizes.size() != 1) throw usage_error("a k sweep needs exactly one size");
  const auto& axis = ksweep ? opt.ks : opt.sizes;
  check_ascending(axis, ksweep ? "ks" : "sizes");
  if (axis.size() < 4) throw usage_error("fit refused: at least 4 points are needed");
  BenchResult res;
  res.csv = "n,k,m,kernel,phase,rounds,messages\n";
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    RunRequest r;
    r.algorithm = opt.algorithm;
    r.n = ksweep ? opt.sizes[0] : axis[i];
    r.k = ksweep ? axis[i] : 1;
    r.kernel = opt.kernel;
    r.seed = opt.seed;
    r.verify = false;
    if (opt.algorithm == "allowed-edges" && r.n % 2) throw usage_error("allowed-edges needs even sizes");
    RunResult out = run(r);
    BenchPoint pt{r.n, r.k, r.n, std::move(out.ledger)};
    const std::string prefix = std::to_string(pt.n) + "," + std::to_string(pt.k) + "," + std::to_string(pt.m) + "," +
                               opt.kernel + ",";
    for (const auto& ph : pt.ledger.phases())
      if (ph.kind != PhaseRecord::Kind::local)
        res.csv += prefix + csv_field(ph.name) + "," + std::to_string(ph.rounds) + "," + std::to_string(ph.messages) + "\n";
    res.csv += prefix + "total," + std::to_string(pt.ledger.total_rounds()) + "," +
               std::to_string(pt.ledger.total_messages()) + "\n";
    xs.push_back(static_cast<double>(axis[i]));
    double y = static_cast<double>(pt.ledger.total_rounds());
    if (opt.per_log) y /= std::log2(static_cast<double>(pt.n));
    ys.push_back(y);
    res.points.push_back(std::move(pt));
  }
  res.slope = loglog_slope(xs, ys);
  return res;
}

Json plan(const PlanOptions& opt) {
  try {
    Json j;
    j["query"] = opt.query;
    if (opt.query == "theorem1") {
      const auto curve = load_curve(opt);
      j["a"] = opt.a;
      j["b"] = opt.b;
      j["curve"] = curve.name();
      j.update(estimate_json(theorem1_exponent(opt.a, opt.b, curve)));
    } else if (opt.query == "dis") {
      const auto curve = load_curve(opt);
      const double n = static_cast<double>(opt.n), m = static_cast<double>(opt.m ? opt.m : opt.n);
      j["n"] = opt.n;
      j["m"] = opt.m ? opt.m : opt.n;
      j["M"] = opt.M;
      j["curve"] = curve.name();
      j.update(estimate_json(dis_exponent(n, m, static_cast<double>(opt.M), curve)));
      j["semiring_exponent"] = dis_semiring_exponent(n, m);
    } else if (opt.query == "zwick") {
      ZwickOptimum z;
      if (!opt.left.empty() || !opt.right.empty()) {
        if (opt.left.empty() || opt.right.empty()) throw usage_error("zwick needs both --left and --right");
        const auto l = load_sampled(opt.left), r = load_sampled(opt.right);
        j["left"] = opt.left;
        j["right"] = opt.right;
        z = zwick_exponent([&](double s) { return l(s); }, [&](double s) { return r(s); });
      } else {
        const auto curve = load_curve(opt);
        j["curve"] = curve.name();
        z = zwick_exponent(curve);
      }
      j["sigma"] = z.sigma;
      j["exponent"] = z.exponent;
    } else if (opt.query == "mm") {
      if (opt.n == 0 || opt.k == 0) throw usage_error("plan mm needs --n and --k");
      const std::size_t n = opt.n, m = opt.m ? opt.m : opt.n, k = opt.k;
      const KernelFamily f = parse_kernel_family(opt.kernel);
      const std::size_t kb = std::min(k, n);
      const MmBranch br = select_branch(n, m, kb);
      j["n"] = n;
      j["m"] = m;
      j["k"] = k;
      j["kernel"] = to_string(f);
      j["batches"] = (k + n - 1) / n;
      j["branch"] = to_string(br);
      if (br == MmBranch::large_m) {
        const auto lp = plan_large(n, m, kb);
        j["T"] = lp.T;
        j["width"] = lp.w;
        j["step_rounds"] = lp.predicted;
      } else {
        const auto mp = plan_medium(n, m, kb, f, 1, br == MmBranch::small_m);
        j["plan"] = mp.describe();
        j["step_rounds"] = mp.predicted;
      }
      j["predicted_rounds"] = predict_mm_rounds(n, m, k, f);
    } else {
      throw usage_error("unknown plan query '" + opt.query + "' (theorem1, dis, zwick, mm)");
    }
    return j;
  } catch (const usage_error&) {
    throw;
  } catch (const std::exception& e) {
    throw usage_error(e.what());
  }
}

std::string digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ccq::app
