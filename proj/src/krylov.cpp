#include "ccq/krylov.hpp"

#include "ccq/collective.hpp"
#include "ccq/mm.hpp"

namespace ccq {

namespace {

constexpr Tag kShift = 501, kCoef = 502, kPart = 503, kValue = 504;

void check_square(const CliqueWorld& w, const DistributedMatrix& a, const char* who) {
  if (a.rows != a.cols || a.rows != w.active().count)
    throw dimension_error(std::string(who) + ": need an n x n matrix on n nodes");
}

// Node 0 sends one word to every node; everyone stores it under key.
Word broadcast_word(CliqueWorld& w, std::string_view phase, const std::string& key) {
  w.exchange(phase, [&](NodeContext& ctx, Outbox& box) {
    if (ctx.rel() != 0) return;
    const Word v = ctx.store().get(key)[0];
    for (std::size_t j = 0; j < ctx.n_active(); ++j) box.send(j, kValue, {v});
  });
  w.run_local(std::string(phase) + ".store", [&](NodeContext& ctx) {
    auto in = ctx.store().take(kValue);
    ctx.store().put(key, {in.front().payload[0]});
  });
  return w.store(w.active().first).get(key)[0];
}

Word random_word(std::mt19937_64& g, const PrimeField& f, bool nonzero) {
  return nonzero ? 1 + uniform_below(g, f.p() - 1) : uniform_below(g, f.p());
}

}  // namespace

Word monte_carlo_field_bound(std::size_t n) {
  Word lg = 0;
  while ((std::size_t{1} << lg) < n) ++lg;
  return 4 * static_cast<Word>(n) * n * std::max<Word>(lg, 1);
}

bool monte_carlo_field_ok(Word p, std::size_t n) { return p >= monte_carlo_field_bound(n); }

KrylovColumns krylov_sequence(CliqueWorld& w, const DistributedMatrix& a, const std::string& u_key, std::size_t count,
                              const std::string& key, KernelFamily family) {
  check_square(w, a, "krylov_sequence");
  const std::size_t n = a.rows;
  if (count == 0 || count > 2 * n) throw std::invalid_argument("krylov_sequence: 1 <= count <= 2n");
  CliqueWorld::Scope scope(w, "krylov");
  const KrylovColumns res{key, count};
  w.run_local("init", [&](NodeContext& ctx) {
    if (ctx.rel() != 0) return;
    auto u = ctx.store().get(u_key);
    if (u.size() != n) throw dimension_error("krylov_sequence: u must have n entries");
    ctx.store().put(res.chunk_key(0), std::move(u));
  });
  DistributedMatrix power = complete_layout(w, a, Layout::rows_and_cols);
  const DistributedMatrix shifted{key + "/B", n, n, Layout::cols};
  for (std::size_t h = 1, it = 0; h < count; h *= 2, ++it) {
    const std::size_t c = std::min(h, count - h);
    w.run_local("stage", [&](NodeContext& ctx) {
      auto& st = ctx.store();
      st.put(shifted.col_key(), ctx.rel() < c ? st.get(res.chunk_key(0)) : std::vector<Word>(n, 0));
    });
    const std::string tag = std::to_string(it);
    const DistributedMatrix prod = mm(w, power, shifted, key + "/P" + tag, {family, 1});
    w.exchange("shift", [&](NodeContext& ctx, Outbox& box) {
      if (ctx.rel() < c) box.send((ctx.rel() + h) % n, kShift, ctx.store().get(prod.col_key()));
    });
    w.run_local("place", [&](NodeContext& ctx) {
      auto& st = ctx.store();
      for (auto& e : st.take(kShift)) st.put(res.chunk_key((e.source + h) / n), std::move(e.payload));
      st.erase_prefix(prod.key + "/");
      st.erase(shifted.col_key());
    });
    if (2 * h < count) {
      const DistributedMatrix next = mm(w, power, power, key + "/Q" + tag, {family, 1});
      if (power.key != a.key) erase(w, power);
      power = next;
    }
  }
  if (power.key != a.key) erase(w, power);
  return res;
}

Polynomial minpol_monte_carlo(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family) {
  check_square(w, a, "minpol");
  const std::size_t n = a.rows;
  CliqueWorld::Scope scope(w, "minpol");
  w.run_local("sample", [&](NodeContext& ctx) {
    if (ctx.rel() != 0) return;
    auto g = ctx.rng("sample");
    std::vector<Word> v(n), u(n);
    for (auto& x : v) x = random_word(g, ctx.field(), false);
    for (auto& x : u) x = random_word(g, ctx.field(), false);
    ctx.store().put("mp/v", std::move(v));
    ctx.store().put("mp/w", std::move(u));
  });
  broadcast(w, "broadcast.w", 0, "mp/w");
  const auto seq = krylov_sequence(w, a, "mp/v", 2 * n, "mp/seq", family);
  w.run_local("project", [&](NodeContext& ctx) {
    const PrimeField& f = ctx.field();
    auto& st = ctx.store();
    const auto& u = st.get("mp/w");
    std::vector<Word> t;
    for (std::size_t c = 0; c < 2; ++c) {
      const auto& col = st.get(seq.chunk_key(c));
      Word s = 0;
      for (std::size_t i = 0; i < n; ++i) s = f.add(s, f.mul(u[i], col[i]));
      t.push_back(s);
    }
    st.put("mp/t", std::move(t));
  });
  gather_to(w, "gather", 0, "mp/t", "mp/all");
  w.run_local("berlekamp_massey", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    if (ctx.rel() == 0) {
      const auto& all = st.get("mp/all");
      std::vector<Word> s(2 * n);
      for (std::size_t j = 0; j < n; ++j) {
        s[j] = all[2 * j];
        s[j + n] = all[2 * j + 1];
      }
      st.put("mp/poly", generating_polynomial(ctx.field(), s).coeffs());
      st.erase("mp/all");
      st.erase("mp/v");
    }
    st.erase("mp/w");
    st.erase("mp/t");
    st.erase_prefix(seq.key + "/");
  });
  auto& root = w.store(w.active().first);
  Polynomial res(w.field(), root.get("mp/poly"));
  root.erase("mp/poly");
  return res;
}

FieldElement det_rand(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family) {
  check_square(w, a, "det_rand");
  const std::size_t n = a.rows;
  CliqueWorld::Scope scope(w, "det_rand");
  const DistributedMatrix full = complete_layout(w, a, Layout::rows_and_cols);
  w.run_local("sample", [&](NodeContext& ctx) {
    auto g = ctx.rng("sample");
    ctx.store().put("dr/D_own", {random_word(g, ctx.field(), true)});
  });
  all_gather(w, "broadcast.D", "dr/D_own", "dr/D");
  const DistributedMatrix da{"dr/DA", n, n};
  w.run_local("scale", [&](NodeContext& ctx) {
    const PrimeField& f = ctx.field();
    auto& st = ctx.store();
    const auto& d = st.get("dr/D");
    auto row = st.get(full.row_key());
    auto col = st.get(full.col_key());
    for (auto& x : row) x = f.mul(x, d[ctx.rel()]);
    for (std::size_t i = 0; i < n; ++i) col[i] = f.mul(col[i], d[i]);
    st.put(da.row_key(), std::move(row));
    st.put(da.col_key(), std::move(col));
  });
  const Polynomial mp = minpol_monte_carlo(w, da, family);
  w.run_local("evaluate", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    if (ctx.rel() == 0) {
      const PrimeField& f = ctx.field();
      Word v = 0;
      if (mp.degree() == static_cast<int>(n)) {
        Word prod = 1;
        for (Word x : st.get("dr/D")) prod = f.mul(prod, x);
        v = f.div(mp.coeff(0), prod);
        if (n % 2) v = f.neg(v);
      }
      st.put("dr/det", {v});
    }
    st.erase("dr/D_own");
    st.erase("dr/D");
    st.erase(da.row_key());
    st.erase(da.col_key());
  });
  const Word v = broadcast_word(w, "broadcast.det", "dr/det");
  w.run_local("cleanup", [&](NodeContext& ctx) { ctx.store().erase("dr/det"); });
  return {w.field(), v};
}

std::vector<Word> solve(CliqueWorld& w, const DistributedMatrix& a, const std::string& b_key, const std::string& out_key,
                        KernelFamily family) {
  check_square(w, a, "solve");
  const std::size_t n = a.rows;
  CliqueWorld::Scope scope(w, "solve");
  const DistributedMatrix full = complete_layout(w, a, Layout::rows_and_cols);
  for (int attempt = 0; attempt < 3; ++attempt) {
    CliqueWorld::Scope at(w, "attempt" + std::to_string(attempt));
    const Polynomial mp = minpol_monte_carlo(w, full, family);
    gather_to(w, "gather.b", 0, b_key, "sv/b");
    const auto seq = krylov_sequence(w, full, "sv/b", n, "sv/seq", family);
    // x = -(m_1 b + m_2 Ab + ... + m_d A^{d-1} b) / m_0
    w.exchange("coefficients", [&](NodeContext& ctx, Outbox& box) {
      if (ctx.rel() != 0) return;
      const PrimeField& f = ctx.field();
      const Word m0 = mp.coeff(0);
      const Word s = m0 == 0 ? 0 : f.neg(f.inv(m0));
      for (std::size_t j = 0; j < n; ++j) box.send(j, kCoef, {f.mul(s, mp.coeff(j + 1))});
    });
    w.exchange("scatter.terms", [&](NodeContext& ctx, Outbox& box) {
      const PrimeField& f = ctx.field();
      auto& st = ctx.store();
      const Word k = st.take(kCoef).front().payload[0];
      const auto& col = st.get(seq.chunk_key(0));
      for (std::size_t i = 0; i < n; ++i) box.send(i, kPart, {f.mul(k, col[i])});
    });
    w.run_local("sum", [&](NodeContext& ctx) {
      auto& st = ctx.store();
      Word x = 0;
      for (auto& e : st.take(kPart)) x = ctx.field().add(x, e.payload[0]);
      st.put(out_key, {x});
      st.erase_prefix(seq.key + "/");
      st.erase("sv/b");
    });
    all_gather(w, "verify.x", out_key, "sv/x");
    w.run_local("verify.row", [&](NodeContext& ctx) {
      const PrimeField& f = ctx.field();
      auto& st = ctx.store();
      const auto& row = st.get(full.row_key());
      const auto& x = st.get("sv/x");
      Word s = 0;
      for (std::size_t j = 0; j < n; ++j) s = f.add(s, f.mul(row[j], x[j]));
      st.put("sv/ok", {s == st.get(b_key)[0] ? Word{1} : Word{0}});
    });
    all_gather(w, "verify.flags", "sv/ok", "sv/flags");
    const auto flags = w.store(w.active().first).get("sv/flags");
    const auto x = w.store(w.active().first).get("sv/x");
    w.run_local("cleanup", [&](NodeContext& ctx) {
      for (const char* k : {"sv/x", "sv/ok", "sv/flags"}) ctx.store().erase(k);
    });
    if (std::all_of(flags.begin(), flags.end(), [](Word v) { return v == 1; })) return x;
  }
  throw singular_matrix_error("solve: singular system or repeated Monte Carlo failure", singular_matrix_error::npos);
}

std::array<DistributedMatrix, 2> toeplitz_pair(CliqueWorld& w, const std::string& key) {
  const std::size_t n = w.active().count;
  const std::string coef = key + "/uv";
  w.run_local("toeplitz.sample", [&](NodeContext& ctx) {
    if (ctx.rel() != 0) return;
    auto g = ctx.rng("toeplitz.sample");
    std::vector<Word> v(2 * (n - 1));
    for (auto& x : v) x = random_word(g, ctx.field(), false);
    ctx.store().put(coef, std::move(v));
  });
  if (n > 1) broadcast(w, "toeplitz.broadcast", 0, coef);
  const DistributedMatrix U{key + "/U", n, n}, V{key + "/V", n, n};
  w.run_local("toeplitz.build", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    const std::size_t l = ctx.rel();
    const std::vector<Word> uv = n > 1 ? st.get(coef) : std::vector<Word>{};
    auto u = [&](std::size_t d) { return uv[d - 1]; };          // U[i][i+d]
    auto v = [&](std::size_t d) { return uv[n - 1 + d - 1]; };  // V[i+d][i]
    std::vector<Word> ur(n, 0), uc(n, 0), vr(n, 0), vc(n, 0);
    ur[l] = uc[l] = vr[l] = vc[l] = 1;
    for (std::size_t j = l + 1; j < n; ++j) ur[j] = u(j - l);
    for (std::size_t i = 0; i < l; ++i) uc[i] = u(l - i);
    for (std::size_t j = 0; j < l; ++j) vr[j] = v(l - j);
    for (std::size_t i = l + 1; i < n; ++i) vc[i] = v(i - l);
    st.put(U.row_key(), std::move(ur));
    st.put(U.col_key(), std::move(uc));
    st.put(V.row_key(), std::move(vr));
    st.put(V.col_key(), std::move(vc));
    st.erase(coef);
  });
  return {U, V};
}

std::size_t rank_rand(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family) {
  check_square(w, a, "rank_rand");
  const std::size_t n = a.rows;
  CliqueWorld::Scope scope(w, "rank_rand");
  const DistributedMatrix full = complete_layout(w, a, Layout::rows_and_cols);
  if (det_rand(w, full, family).value() != 0) return n;
  const auto [U, V] = toeplitz_pair(w, "rk");
  const DistributedMatrix D{"rk/D", n, n};
  w.run_local("diagonal", [&](NodeContext& ctx) {
    auto g = ctx.rng("diagonal");
    std::vector<Word> e(n, 0);
    e[ctx.rel()] = random_word(g, ctx.field(), false);
    ctx.store().put(D.row_key(), e);
    ctx.store().put(D.col_key(), std::move(e));
  });
  const auto ua = mm(w, U, full, "rk/UA", {family, 1});
  const auto uav = mm(w, ua, V, "rk/UAV", {family, 1});
  const auto uavd = mm(w, uav, D, "rk/UAVD", {family, 1});
  const Polynomial mp = minpol_monte_carlo(w, uavd, family);
  w.run_local("rank", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    st.erase_prefix("rk/");
    if (ctx.rel() == 0) st.put("rk/rank", {static_cast<Word>(std::max(mp.degree() - 1, 0))});
  });
  const Word r = broadcast_word(w, "broadcast.rank", "rk/rank");
  w.run_local("cleanup", [&](NodeContext& ctx) { ctx.store().erase("rk/rank"); });
  return static_cast<std::size_t>(r);
}

}  // namespace ccq
