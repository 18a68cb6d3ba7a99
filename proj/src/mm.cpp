#include "ccq/mm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "ccq/planner.hpp"

namespace ccq {

namespace {

constexpr Tag kA1 = 101, kB1 = 102, kS = 103, kT = 104, kP = 105, kCR = 106, kCC = 107;
constexpr Tag kLA = 111, kLB = 112, kLCR = 113, kLCC = 114;
constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::uint64_t rounds_for(std::uint64_t load, std::uint64_t units, std::size_t n) {
  return routing_rounds(load * units, n);
}

std::string out_key(const std::string& out, std::size_t s) { return out + "/" + std::to_string(s); }

struct Shape {
  std::size_t n, m, k;
  bool a_rows, b_cols;
};

Shape check_operands(const CliqueWorld& w, std::span<const DistributedMatrix> a, std::span<const DistributedMatrix> b) {
  if (a.empty() || a.size() != b.size()) throw dimension_error("mm: need k >= 1 matching A and B operands");
  const std::size_t n = w.active().count;
  const std::size_t m = a[0].cols;
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s].rows != n || a[s].cols != m) throw dimension_error("mm: A_" + std::to_string(s) + " must be n x m");
    if (b[s].rows != m || b[s].cols != n) throw dimension_error("mm: B_" + std::to_string(s) + " must be m x n");
    if (a[s].layout != a[0].layout || b[s].layout != b[0].layout) throw dimension_error("mm: mixed operand layouts");
  }
  if (m == 0) throw dimension_error("mm: inner dimension must be positive");
  const bool a_rows = has_rows(a[0].layout);
  const bool b_cols = has_cols(b[0].layout);
  if (!a_rows && m > n) throw dimension_error("mm: column-held A needs m <= n");
  if (!b_cols && m > n) throw dimension_error("mm: row-held B needs m <= n");
  return {n, m, a.size(), a_rows, b_cols};
}

template <class Ring>
void check_ring(const Ring& ring, const BilinearAlgorithm& alg) {
  if (ring.supports_negative_coefficients()) return;
  auto unit = [](std::int64_t c) { return c == 0 || c == 1; };
  if (!std::all_of(alg.alpha.begin(), alg.alpha.end(), unit) || !std::all_of(alg.beta.begin(), alg.beta.end(), unit) ||
      !std::all_of(alg.lambda.begin(), alg.lambda.end(), unit))
    throw std::invalid_argument("kernel " + alg.name + " needs a ring with subtraction");
}

// Index arithmetic of a MediumPlan. "npos" marks padding.
struct Geometry {
  const MediumPlan& p;

  [[nodiscard]] std::size_t rho(std::size_t i, std::size_t u, std::size_t x) const {
    if (u * p.xu + x >= p.xd) return npos;
    const std::size_t r = i * p.xd + u * p.xu + x;
    return r < p.n ? r : npos;
  }
  [[nodiscard]] std::size_t col_a(std::size_t j, std::size_t v, std::size_t z) const {
    if (v * p.rs + z >= p.zd) return npos;
    const std::size_t c = j * p.zd + v * p.rs + z;
    return c < p.m ? c : npos;
  }
  [[nodiscard]] std::size_t row_b(std::size_t j, std::size_t u, std::size_t z) const {
    if (u * p.rt + z >= p.zd) return npos;
    const std::size_t r = j * p.zd + u * p.rt + z;
    return r < p.m ? r : npos;
  }
  [[nodiscard]] std::size_t col_b(std::size_t i, std::size_t v, std::size_t y) const {
    if (v * p.xv + y >= p.xd) return npos;
    const std::size_t c = i * p.xd + v * p.xv + y;
    return c < p.n ? c : npos;
  }
  [[nodiscard]] std::array<std::size_t, 3> split_row(std::size_t r) const {
    const std::size_t rem = r % p.xd;
    return {r / p.xd, rem / p.xu, rem % p.xu};
  }
  [[nodiscard]] std::array<std::size_t, 3> split_col_a(std::size_t c) const {
    const std::size_t rem = c % p.zd;
    return {c / p.zd, rem / p.rs, rem % p.rs};
  }
  [[nodiscard]] std::array<std::size_t, 3> split_row_b(std::size_t r) const {
    const std::size_t rem = r % p.zd;
    return {r / p.zd, rem / p.rt, rem % p.rt};
  }
  [[nodiscard]] std::array<std::size_t, 3> split_col_b(std::size_t c) const {
    const std::size_t rem = c % p.xd;
    return {c / p.xd, rem / p.xv, rem % p.xv};
  }
  [[nodiscard]] std::size_t grid() const { return p.qu * p.qv; }
  [[nodiscard]] std::size_t grid_node(std::size_t s, std::size_t u, std::size_t v) const {
    return s * grid() + u * p.qv + v;
  }
};

template <class Ring>
std::vector<DistributedMatrix> medium_impl(CliqueWorld& w, const Ring& ring, std::span<const DistributedMatrix> a,
                                           std::span<const DistributedMatrix> b, const std::string& out,
                                           const MediumPlan& plan, std::uint64_t units, std::size_t s_offset) {
  const Shape sh = check_operands(w, a, b);
  if (sh.n != plan.n || sh.m != plan.m || sh.k != plan.k) throw dimension_error("mm_medium: plan does not match operands");
  check_ring(ring, plan.alg);
  const Geometry g{plan};
  const BilinearAlgorithm& alg = plan.alg;
  const std::size_t d = alg.d, e = alg.e, t = alg.t, k = plan.k, n = plan.n;
  const std::size_t xu = plan.xu, xv = plan.xv, rs = plan.rs, rt = plan.rt, xd = plan.xd, zd = plan.zd;
  const std::size_t qu = plan.qu, qv = plan.qv;
  const Word zero = ring.zero();
  CliqueWorld::Scope scope(w, "mm.medium[" + plan.describe() + "]");

  // Step 1: owners send sub-blocks to grid nodes.
  w.exchange("step1", [&](NodeContext& ctx, Outbox& box) {
    const std::size_t l = ctx.rel();
    auto& st = ctx.store();
    for (std::size_t s = 0; s < k; ++s) {
      if (sh.a_rows) {
        const auto& row = st.get(a[s].row_key());
        const auto [i, u, x] = g.split_row(l);
        for (std::size_t v = 0; v < qv; ++v) {
          std::vector<Word> pay;
          for (std::size_t j = 0; j < e; ++j)
            for (std::size_t z = 0; z < rs; ++z)
              if (auto c = g.col_a(j, v, z); c != npos) pay.push_back(row[c]);
          if (!pay.empty()) box.send(g.grid_node(s, u, v), kA1, std::move(pay));
        }
      } else if (l < sh.m) {
        const auto& col = st.get(a[s].col_key());
        const auto [j, v, z] = g.split_col_a(l);
        for (std::size_t u = 0; u < qu; ++u) {
          std::vector<Word> pay;
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t x = 0; x < xu; ++x)
              if (auto r = g.rho(i, u, x); r != npos) pay.push_back(col[r]);
          if (!pay.empty()) box.send(g.grid_node(s, u, v), kA1, std::move(pay));
        }
      }
      if (sh.b_cols) {
        const auto& col = st.get(b[s].col_key());
        const auto [i, v, y] = g.split_col_b(l);
        for (std::size_t u = 0; u < qu; ++u) {
          std::vector<Word> pay;
          for (std::size_t j = 0; j < e; ++j)
            for (std::size_t z = 0; z < rt; ++z)
              if (auto r = g.row_b(j, u, z); r != npos) pay.push_back(col[r]);
          if (!pay.empty()) box.send(g.grid_node(s, u, v), kB1, std::move(pay));
        }
      } else if (l < sh.m) {
        const auto& row = st.get(b[s].row_key());
        const auto [j, u, z] = g.split_row_b(l);
        for (std::size_t v = 0; v < qv; ++v) {
          std::vector<Word> pay;
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t y = 0; y < xv; ++y)
              if (auto c = g.col_b(i, v, y); c != npos) pay.push_back(row[c]);
          if (!pay.empty()) box.send(g.grid_node(s, u, v), kB1, std::move(pay));
        }
      }
    }
  }, units);

  // Step 2: grid nodes form their slices of every S^mu, T^mu and ship them
  // to the product nodes.
  w.exchange("step2", [&](NodeContext& ctx, Outbox& box) {
    const std::size_t gn = ctx.rel();
    if (gn >= k * g.grid()) return;
    const std::size_t s = gn / g.grid(), u = (gn % g.grid()) / qv, v = gn % qv;
    std::vector<Word> ablk(d * e * xu * rs, zero), bblk(d * e * rt * xv, zero);
    auto aat = [&](std::size_t i, std::size_t j, std::size_t x, std::size_t z) -> Word& {
      return ablk[((i * e + j) * xu + x) * rs + z];
    };
    auto bat = [&](std::size_t i, std::size_t j, std::size_t z, std::size_t y) -> Word& {
      return bblk[((i * e + j) * rt + z) * xv + y];
    };
    for (auto& env : ctx.store().take(kA1)) {
      std::size_t idx = 0;
      if (sh.a_rows) {
        const auto [i, uu, x] = g.split_row(env.source);
        for (std::size_t j = 0; j < e; ++j)
          for (std::size_t z = 0; z < rs; ++z)
            if (g.col_a(j, v, z) != npos) aat(i, j, x, z) = env.payload[idx++];
      } else {
        const auto [j, vv, z] = g.split_col_a(env.source);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t x = 0; x < xu; ++x)
            if (g.rho(i, u, x) != npos) aat(i, j, x, z) = env.payload[idx++];
      }
    }
    for (auto& env : ctx.store().take(kB1)) {
      std::size_t idx = 0;
      if (sh.b_cols) {
        const auto [i, vv, y] = g.split_col_b(env.source);
        for (std::size_t j = 0; j < e; ++j)
          for (std::size_t z = 0; z < rt; ++z)
            if (g.row_b(j, u, z) != npos) bat(i, j, z, y) = env.payload[idx++];
      } else {
        const auto [j, uu, z] = g.split_row_b(env.source);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t y = 0; y < xv; ++y)
            if (g.col_b(i, v, y) != npos) bat(i, j, z, y) = env.payload[idx++];
      }
    }
    for (std::size_t mu = 0; mu < t; ++mu) {
      std::vector<Word> spay, tpay;
      for (std::size_t x = 0; x < xu && u * xu + x < xd; ++x)
        for (std::size_t z = 0; z < rs && v * rs + z < zd; ++z) {
          Word acc = zero;
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < e; ++j)
              if (auto c = alg.a(mu, i, j)) acc = ring.add(acc, ring.scale(c, aat(i, j, x, z)));
          spay.push_back(acc);
        }
      for (std::size_t z = 0; z < rt && u * rt + z < zd; ++z)
        for (std::size_t y = 0; y < xv && v * xv + y < xd; ++y) {
          Word acc = zero;
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < e; ++j)
              if (auto c = alg.b(mu, i, j)) acc = ring.add(acc, ring.scale(c, bat(i, j, z, y)));
          tpay.push_back(acc);
        }
      if (!spay.empty()) box.send(s * t + mu, kS, std::move(spay));
      if (!tpay.empty()) box.send(s * t + mu, kT, std::move(tpay));
    }
  }, units);

  // Step 3: product node (s, mu) multiplies locally and returns P slices.
  w.exchange("step3", [&](NodeContext& ctx, Outbox& box) {
    const std::size_t pn = ctx.rel();
    if (pn >= k * t) return;
    const std::size_t s = pn / t;
    Matrix<Word> S(xd, zd, zero), T(zd, xd, zero);
    for (auto& env : ctx.store().take(kS)) {
      const std::size_t u = (env.source % g.grid()) / qv, v = env.source % qv;
      std::size_t idx = 0;
      for (std::size_t x = 0; x < xu && u * xu + x < xd; ++x)
        for (std::size_t z = 0; z < rs && v * rs + z < zd; ++z) S(u * xu + x, v * rs + z) = env.payload[idx++];
    }
    for (auto& env : ctx.store().take(kT)) {
      const std::size_t u = (env.source % g.grid()) / qv, v = env.source % qv;
      std::size_t idx = 0;
      for (std::size_t z = 0; z < rt && u * rt + z < zd; ++z)
        for (std::size_t y = 0; y < xv && v * xv + y < xd; ++y) T(u * rt + z, v * xv + y) = env.payload[idx++];
    }
    const Matrix<Word> P = ring.product(S, T);
    for (std::size_t u = 0; u < qu; ++u)
      for (std::size_t v = 0; v < qv; ++v) {
        std::vector<Word> pay;
        for (std::size_t x = 0; x < xu && u * xu + x < xd; ++x)
          for (std::size_t y = 0; y < xv && v * xv + y < xd; ++y) pay.push_back(P(u * xu + x, v * xv + y));
        if (!pay.empty()) box.send(g.grid_node(s, u, v), kP, std::move(pay));
      }
  }, units);

  // Step 4: grid nodes combine the products and deliver rows and columns of C.
  w.exchange("step4", [&](NodeContext& ctx, Outbox& box) {
    const std::size_t gn = ctx.rel();
    if (gn >= k * g.grid()) return;
    const std::size_t s = gn / g.grid(), u = (gn % g.grid()) / qv, v = gn % qv;
    std::vector<Word> P(t * xu * xv, zero);
    for (auto& env : ctx.store().take(kP)) {
      const std::size_t mu = env.source - s * t;
      std::size_t idx = 0;
      for (std::size_t x = 0; x < xu && u * xu + x < xd; ++x)
        for (std::size_t y = 0; y < xv && v * xv + y < xd; ++y) P[(mu * xu + x) * xv + y] = env.payload[idx++];
    }
    // C block entries (i, x; i2, y) for the real positions of this grid cell.
    auto cval = [&](std::size_t i, std::size_t x, std::size_t i2, std::size_t y) {
      Word acc = zero;
      for (std::size_t mu = 0; mu < t; ++mu)
        if (auto c = alg.l(mu, i, i2)) acc = ring.add(acc, ring.scale(c, P[(mu * xu + x) * xv + y]));
      return acc;
    };
    Matrix<Word> C(d * xu, d * xv, zero);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t x = 0; x < xu; ++x) {
        if (g.rho(i, u, x) == npos) continue;
        for (std::size_t i2 = 0; i2 < d; ++i2)
          for (std::size_t y = 0; y < xv; ++y)
            if (g.col_b(i2, v, y) != npos) C(i * xu + x, i2 * xv + y) = cval(i, x, i2, y);
      }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t x = 0; x < xu; ++x) {
        const std::size_t r = g.rho(i, u, x);
        if (r == npos) continue;
        std::vector<Word> pay;
        for (std::size_t i2 = 0; i2 < d; ++i2)
          for (std::size_t y = 0; y < xv; ++y)
            if (g.col_b(i2, v, y) != npos) pay.push_back(C(i * xu + x, i2 * xv + y));
        if (!pay.empty()) box.send(r, kCR, std::move(pay));
      }
    for (std::size_t i2 = 0; i2 < d; ++i2)
      for (std::size_t y = 0; y < xv; ++y) {
        const std::size_t c = g.col_b(i2, v, y);
        if (c == npos) continue;
        std::vector<Word> pay;
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t x = 0; x < xu; ++x)
            if (g.rho(i, u, x) != npos) pay.push_back(C(i * xu + x, i2 * xv + y));
        if (!pay.empty()) box.send(c, kCC, std::move(pay));
      }
  }, units);

  w.run_local("assemble", [&](NodeContext& ctx) {
    std::vector<std::vector<Word>> rows(k, std::vector<Word>(n, zero)), cols(k, std::vector<Word>(n, zero));
    for (auto& env : ctx.store().take(kCR)) {
      const std::size_t s = env.source / g.grid(), v = env.source % qv;
      std::size_t idx = 0;
      for (std::size_t i2 = 0; i2 < d; ++i2)
        for (std::size_t y = 0; y < xv; ++y)
          if (auto c = g.col_b(i2, v, y); c != npos) rows[s][c] = env.payload[idx++];
    }
    for (auto& env : ctx.store().take(kCC)) {
      const std::size_t s = env.source / g.grid(), u = (env.source % g.grid()) / qv;
      std::size_t idx = 0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t x = 0; x < xu; ++x)
          if (auto r = g.rho(i, u, x); r != npos) cols[s][r] = env.payload[idx++];
    }
    for (std::size_t s = 0; s < k; ++s) {
      const std::string key = out_key(out, s_offset + s);
      ctx.store().put(key + "/row", std::move(rows[s]));
      ctx.store().put(key + "/col", std::move(cols[s]));
    }
  });

  std::vector<DistributedMatrix> res;
  for (std::size_t s = 0; s < k; ++s) res.push_back({out_key(out, s_offset + s), n, n, Layout::rows_and_cols});
  return res;
}

template <class Ring>
std::vector<DistributedMatrix> large_impl(CliqueWorld& w, const Ring& ring, std::span<const DistributedMatrix> a,
                                          std::span<const DistributedMatrix> b, const std::string& out,
                                          const LargePlan& plan, std::uint64_t units, std::size_t s_offset) {
  const Shape sh = check_operands(w, a, b);
  if (sh.n != plan.n || sh.m != plan.m || sh.k != plan.k) throw dimension_error("mm_large: plan does not match operands");
  const std::size_t n = plan.n, m = plan.m, k = plan.k, T = plan.T, bw = plan.w;
  const Word zero = ring.zero();
  CliqueWorld::Scope scope(w, "mm.large[T=" + std::to_string(T) + ",w=" + std::to_string(bw) + "]");

  w.exchange("step1", [&](NodeContext& ctx, Outbox& box) {
    const std::size_t l = ctx.rel();
    auto& st = ctx.store();
    for (std::size_t s = 0; s < k; ++s) {
      if (sh.a_rows) {
        const auto& row = st.get(a[s].row_key());
        for (std::size_t tt = 0; tt < T && tt * bw < m; ++tt) {
          const std::size_t lo = tt * bw, hi = std::min(m, lo + bw);
          box.send(s * T + tt, kLA, {row.begin() + static_cast<std::ptrdiff_t>(lo), row.begin() + static_cast<std::ptrdiff_t>(hi)});
        }
      } else if (l < m) {
        box.send(s * T + l / bw, kLA, st.get(a[s].col_key()));
      }
      if (sh.b_cols) {
        const auto& col = st.get(b[s].col_key());
        for (std::size_t tt = 0; tt < T && tt * bw < m; ++tt) {
          const std::size_t lo = tt * bw, hi = std::min(m, lo + bw);
          box.send(s * T + tt, kLB, {col.begin() + static_cast<std::ptrdiff_t>(lo), col.begin() + static_cast<std::ptrdiff_t>(hi)});
        }
      } else if (l < m) {
        box.send(s * T + l / bw, kLB, st.get(b[s].row_key()));
      }
    }
  }, units);

  w.exchange("step2", [&](NodeContext& ctx, Outbox& box) {
    const std::size_t cn = ctx.rel();
    auto ain = ctx.store().take(kLA);
    auto bin = ctx.store().take(kLB);
    if (cn >= k * T) return;
    const std::size_t tt = cn % T;
    const std::size_t lo = tt * bw;
    if (lo >= m) return;
    const std::size_t wid = std::min(m, lo + bw) - lo;
    Matrix<Word> A(n, wid, zero), B(wid, n, zero);
    for (auto& env : ain) {
      if (sh.a_rows) std::copy(env.payload.begin(), env.payload.end(), A.row(env.source).begin());
      else for (std::size_t i = 0; i < n; ++i) A(i, env.source - lo) = env.payload[i];
    }
    for (auto& env : bin) {
      if (sh.b_cols) for (std::size_t r = 0; r < wid; ++r) B(r, env.source) = env.payload[r];
      else std::copy(env.payload.begin(), env.payload.end(), B.row(env.source - lo).begin());
    }
    const Matrix<Word> C = ring.product(A, B);
    for (std::size_t i = 0; i < n; ++i) box.send(i, kLCR, {C.row(i).begin(), C.row(i).end()});
    for (std::size_t j = 0; j < n; ++j) box.send(j, kLCC, C.col(j));
  }, units);

  w.run_local("assemble", [&](NodeContext& ctx) {
    std::vector<std::vector<Word>> rows(k, std::vector<Word>(n, zero)), cols(k, std::vector<Word>(n, zero));
    for (auto& env : ctx.store().take(kLCR)) {
      auto& r = rows[env.source / T];
      for (std::size_t j = 0; j < n; ++j) r[j] = ring.add(r[j], env.payload[j]);
    }
    for (auto& env : ctx.store().take(kLCC)) {
      auto& c = cols[env.source / T];
      for (std::size_t i = 0; i < n; ++i) c[i] = ring.add(c[i], env.payload[i]);
    }
    for (std::size_t s = 0; s < k; ++s) {
      const std::string key = out_key(out, s_offset + s);
      ctx.store().put(key + "/row", std::move(rows[s]));
      ctx.store().put(key + "/col", std::move(cols[s]));
    }
  });

  std::vector<DistributedMatrix> res;
  for (std::size_t s = 0; s < k; ++s) res.push_back({out_key(out, s_offset + s), n, n, Layout::rows_and_cols});
  return res;
}

template <class Ring>
std::vector<DistributedMatrix> dispatch(CliqueWorld& w, const Ring& ring, std::span<const DistributedMatrix> a,
                                        std::span<const DistributedMatrix> b, const std::string& out,
                                        const MmOptions& opt, std::size_t s_offset) {
  const Shape sh = check_operands(w, a, b);
  if (!ring.supports_negative_coefficients() && opt.family != KernelFamily::trivial)
    throw std::invalid_argument("only the trivial kernel works over this semiring");
  if (sh.k > sh.n) {
    std::vector<DistributedMatrix> res;
    for (std::size_t c = 0; c * sh.n < sh.k; ++c) {
      const std::size_t lo = c * sh.n, len = std::min(sh.n, sh.k - lo);
      CliqueWorld::Scope scope(w, "batch" + std::to_string(c));
      auto part = dispatch(w, ring, a.subspan(lo, len), b.subspan(lo, len), out, opt, s_offset + lo);
      res.insert(res.end(), part.begin(), part.end());
    }
    return res;
  }
  switch (select_branch(sh.n, sh.m, sh.k)) {
    case MmBranch::large_m:
      return large_impl(w, ring, a, b, out, plan_large(sh.n, sh.m, sh.k, opt.units), opt.units, s_offset);
    case MmBranch::small_m:
      return medium_impl(w, ring, a, b, out, plan_medium(sh.n, sh.m, sh.k, opt.family, opt.units, true), opt.units,
                         s_offset);
    case MmBranch::medium_m:
      break;
  }
  return medium_impl(w, ring, a, b, out, plan_medium(sh.n, sh.m, sh.k, opt.family, opt.units, false), opt.units,
                     s_offset);
}

struct Candidate {
  KernelFamily kind;
  std::size_t d, e, t;
  unsigned power;  // Strassen tensor power; 0 means trivial(d, e)
};

BilinearAlgorithm build(const Candidate& c) {
  if (c.power == 0) return trivial_algorithm(c.d, c.e);
  return tensor_power(strassen(), c.power);
}

std::array<std::uint64_t, 4> medium_costs(std::size_t n, std::size_t m, std::size_t k, std::size_t d, std::size_t e,
                                          std::size_t t, std::size_t qu, std::size_t qv, std::uint64_t units) {
  const std::size_t xd = ceil_div(n, d), zd = ceil_div(m, e);
  const std::size_t xu = ceil_div(xd, qu), xv = ceil_div(xd, qv), rs = ceil_div(zd, qv), rt = ceil_div(zd, qu);
  const std::uint64_t s1 = std::max<std::uint64_t>(d * e * (xu * rs + rt * xv), 2 * k * m);
  const std::uint64_t s2 = std::max<std::uint64_t>(2 * xd * zd, t * (xu * rs + rt * xv));
  const std::uint64_t s3 = std::max<std::uint64_t>(t * xu * xv, qu * qv * xu * xv);
  const std::uint64_t s4 = std::max<std::uint64_t>(2 * k * n, 2 * d * d * xu * xv);
  return {rounds_for(s1, units, n), rounds_for(s2, units, n), rounds_for(s3, units, n), rounds_for(s4, units, n)};
}

}  // namespace

std::string to_string(MmBranch b) {
  switch (b) {
    case MmBranch::small_m: return "small-m";
    case MmBranch::medium_m: return "medium-m";
    case MmBranch::large_m: return "large-m";
  }
  return "?";
}

std::string MediumPlan::describe() const {
  return alg.name + ",q=" + std::to_string(qu) + "x" + std::to_string(qv);
}

MmBranch select_branch(std::size_t n, std::size_t m, std::size_t k) {
  if (k > n) throw std::invalid_argument("select_branch: k <= n");
  if (m * k >= n * n) return MmBranch::large_m;
  if (m * m <= k * n) return MmBranch::small_m;
  return MmBranch::medium_m;
}

MediumPlan make_medium_plan(std::size_t n, std::size_t m, std::size_t k, const BilinearAlgorithm& alg,
                            std::size_t qu, std::size_t qv, std::uint64_t units) {
  if (n == 0 || m == 0 || k == 0) throw dimension_error("medium plan: positive sizes required");
  if (k * qu * qv > n) throw std::invalid_argument("medium plan: grid labels (s,u,v) exceed the node count");
  if (k * alg.t > n) throw std::invalid_argument("medium plan: product labels (s,mu) exceed the node count");
  MediumPlan p;
  p.n = n;
  p.m = m;
  p.k = k;
  p.alg = alg;
  p.qu = qu;
  p.qv = qv;
  p.xd = ceil_div(n, alg.d);
  p.zd = ceil_div(m, alg.e);
  p.xu = ceil_div(p.xd, qu);
  p.xv = ceil_div(p.xd, qv);
  p.rs = ceil_div(p.zd, qv);
  p.rt = ceil_div(p.zd, qu);
  p.predicted = medium_costs(n, m, k, alg.d, alg.e, alg.t, qu, qv, units);
  return p;
}

MediumPlan plan_medium(std::size_t n, std::size_t m, std::size_t k, KernelFamily family, std::uint64_t units,
                       bool gamma_zero) {
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, int, std::uint64_t, bool>;
  static std::map<Key, MediumPlan> cache;
  static std::mutex mu;
  const Key key{n, m, k, static_cast<int>(family), units, gamma_zero};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  if (k == 0 || k > n) throw std::invalid_argument("plan_medium: 1 <= k <= n");
  const std::size_t budget = n / k;
  std::vector<Candidate> cands;
  if (gamma_zero) {
    for (std::size_t d = 1; d * d <= budget; ++d) cands.push_back({KernelFamily::trivial, d, 1, d * d, 0});
  } else if (family == KernelFamily::trivial) {
    for (std::size_t d = 1; d * d <= budget; ++d)
      for (std::size_t e = 1; d * d * e <= budget && e <= m; ++e) cands.push_back({family, d, e, d * d * e, 0});
  } else {
    cands.push_back({family, 1, 1, 1, 0});
    std::size_t d = 2, t = 7;
    for (unsigned pw = 1; t <= budget; ++pw, d *= 2, t *= 7) cands.push_back({family, d, d, t, pw});
  }
  const Candidate* best = nullptr;
  std::size_t bqu = 1, bqv = 1;
  std::uint64_t bcost = 0;
  for (const auto& c : cands) {
    for (std::size_t qu = 1; qu <= budget; ++qu)
      for (std::size_t qv = 1; qu * qv <= budget; ++qv) {
        const auto cs = medium_costs(n, m, k, c.d, c.e, c.t, qu, qv, units);
        const std::uint64_t cost = cs[0] + cs[1] + cs[2] + cs[3];
        bool better = best == nullptr || cost < bcost;
        if (!better && cost == bcost) {
          if (c.d != best->d) better = c.d > best->d;
          else if (qu * qv != bqu * bqv) better = qu * qv > bqu * bqv;
        }
        if (better) {
          best = &c;
          bqu = qu;
          bqv = qv;
          bcost = cost;
        }
      }
  }
  MediumPlan p = make_medium_plan(n, m, k, build(*best), bqu, bqv, units);
  if (!gamma_zero && select_branch(n, m, k) == MmBranch::medium_m) {
    const double a = std::log(static_cast<double>(k)) / std::log(static_cast<double>(n));
    const double b = std::log(static_cast<double>(m)) / std::log(static_cast<double>(n));
    const OmegaCurve curve = family == KernelFamily::trivial ? OmegaCurve::trivial() : OmegaCurve::from_square(std::log2(7.0));
    try {
      p.gamma_target = solve_maincond(a, b, curve);
    } catch (const regime_error&) {
      p.gamma_target = 0;
    }
  }
  std::lock_guard lock(mu);
  cache.emplace(key, p);
  return p;
}

LargePlan plan_large(std::size_t n, std::size_t m, std::size_t k, std::uint64_t units) {
  if (k == 0 || k > n) throw std::invalid_argument("plan_large: 1 <= k <= n");
  LargePlan p;
  p.n = n;
  p.m = m;
  p.k = k;
  p.T = n / k;
  p.w = ceil_div(m, p.T);
  const std::uint64_t s1 = std::max<std::uint64_t>(2 * k * m, 2 * n * p.w);
  const std::uint64_t s2 = std::max<std::uint64_t>(2 * n * n, 2 * k * p.T * n);
  p.predicted = {rounds_for(s1, units, n), rounds_for(s2, units, n)};
  return p;
}

std::uint64_t predict_mm_rounds(std::size_t n, std::size_t m, std::size_t k, KernelFamily family,
                                std::uint64_t units) {
  if (k > n) {
    std::uint64_t r = (k / n) * predict_mm_rounds(n, m, n, family, units);
    if (k % n) r += predict_mm_rounds(n, m, k % n, family, units);
    return r;
  }
  switch (select_branch(n, m, k)) {
    case MmBranch::large_m: return plan_large(n, m, k, units).predicted_rounds();
    case MmBranch::small_m: return plan_medium(n, m, k, family, units, true).predicted_rounds();
    case MmBranch::medium_m: break;
  }
  return plan_medium(n, m, k, family, units, false).predicted_rounds();
}

template <class Ring>
std::vector<DistributedMatrix> mm_multi(CliqueWorld& w, const Ring& ring, std::span<const DistributedMatrix> a,
                                        std::span<const DistributedMatrix> b, const std::string& out,
                                        const MmOptions& opt) {
  return dispatch(w, ring, a, b, out, opt, 0);
}

template <class Ring>
std::vector<DistributedMatrix> mm_medium(CliqueWorld& w, const Ring& ring, std::span<const DistributedMatrix> a,
                                         std::span<const DistributedMatrix> b, const std::string& out,
                                         const MediumPlan& plan, std::uint64_t units) {
  return medium_impl(w, ring, a, b, out, plan, units, 0);
}

template <class Ring>
std::vector<DistributedMatrix> mm_large(CliqueWorld& w, const Ring& ring, std::span<const DistributedMatrix> a,
                                        std::span<const DistributedMatrix> b, const std::string& out,
                                        const LargePlan& plan, std::uint64_t units) {
  if (plan.k > plan.n || plan.m * plan.k < plan.n * plan.n)
    throw std::logic_error("mm_large called outside its regime");
  return large_impl(w, ring, a, b, out, plan, units, 0);
}

#define CCQ_INSTANTIATE(R)                                                                                       \
  template std::vector<DistributedMatrix> mm_multi<R>(CliqueWorld&, const R&, std::span<const DistributedMatrix>, \
                                                      std::span<const DistributedMatrix>, const std::string&,     \
                                                      const MmOptions&);                                          \
  template std::vector<DistributedMatrix> mm_medium<R>(CliqueWorld&, const R&, std::span<const DistributedMatrix>, \
                                                       std::span<const DistributedMatrix>, const std::string&,     \
                                                       const MediumPlan&, std::uint64_t);                          \
  template std::vector<DistributedMatrix> mm_large<R>(CliqueWorld&, const R&, std::span<const DistributedMatrix>,  \
                                                      std::span<const DistributedMatrix>, const std::string&,      \
                                                      const LargePlan&, std::uint64_t);

CCQ_INSTANTIATE(FieldRing)
CCQ_INSTANTIATE(MinPlusRing)
#undef CCQ_INSTANTIATE

std::vector<DistributedMatrix> mm_multi(CliqueWorld& w, std::span<const DistributedMatrix> a,
                                        std::span<const DistributedMatrix> b, const std::string& out,
                                        const MmOptions& opt) {
  return mm_multi(w, FieldRing{w.field()}, a, b, out, opt);
}

DistributedMatrix mm(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b, const std::string& out,
                     const MmOptions& opt) {
  return mm_multi(w, std::span(&a, 1), std::span(&b, 1), out, opt).front();
}

}  // namespace ccq
