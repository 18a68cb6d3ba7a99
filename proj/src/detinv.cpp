#include "ccq/detinv.hpp"

#include "ccq/collective.hpp"
#include "ccq/mm.hpp"

namespace ccq {

namespace {

constexpr Tag kI22 = 401, kZRow = 402, kTrace = 403;

std::vector<Word> slice(const std::vector<Word>& v, std::size_t lo, std::size_t hi, std::size_t width) {
  std::vector<Word> r(v.begin() + static_cast<std::ptrdiff_t>(lo), v.begin() + static_cast<std::ptrdiff_t>(hi));
  r.resize(width, 0);
  return r;
}

void tri_rec(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& out, std::size_t offset,
             KernelFamily family) {
  const std::size_t n = a.rows;
  if (n == 1) {
    w.run_local("base", [&](NodeContext& ctx) {
      const Word x = ctx.store().get(a.row_key())[0];
      if (x == 0) throw singular_matrix_error("zero diagonal entry at index " + std::to_string(offset), offset);
      const Word y = ctx.field().inv(x);
      ctx.store().put(out.row_key(), {y});
      ctx.store().put(out.col_key(), {y});
    });
    return;
  }
  const std::size_t n1 = (n + 1) / 2, n2 = n - n1;
  const NodeRange whole = w.active();
  const std::string t = out.key + "/t";
  const DistributedMatrix a11{t + "/a11", n1, n1}, a22{t + "/a22", n2, n2};
  const DistributedMatrix i11{t + "/i11", n1, n1}, i22{t + "/i22", n2, n2};
  const DistributedMatrix a21{t + "/a21", n1, n1, Layout::cols}, i22p{t + "/i22p", n1, n1, Layout::cols};

  w.run_local("split", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    const std::size_t l = ctx.rel();
    const auto& row = st.get(a.row_key());
    const auto& col = st.get(a.col_key());
    if (l < n1) {
      st.put(a11.row_key(), slice(row, 0, n1, n1));
      st.put(a11.col_key(), slice(col, 0, n1, n1));
      st.put(a21.col_key(), slice(col, n1, n, n1));
    } else {
      st.put(a22.row_key(), slice(row, n1, n, n2));
      st.put(a22.col_key(), slice(col, n1, n, n2));
    }
  });

  w.parallel_phases("halves", {{{whole.first, n1}, [&](CliqueWorld& sub) { tri_rec(sub, a11, i11, offset, family); }},
                               {{whole.first + n1, n2},
                                [&](CliqueWorld& sub) { tri_rec(sub, a22, i22, offset + n1, family); }}});

  DistributedMatrix y;
  {
    CliqueWorld::SubClique g1(w, {whole.first, n1});
    y = mm(w, a21, i11, t + "/y", {family, 1});
  }
  w.exchange("route.inv22", [&](NodeContext& ctx, Outbox& box) {
    if (ctx.rel() >= n1) box.send(ctx.rel() - n1, kI22, ctx.store().get(i22.col_key()));
  });
  w.run_local("stage.inv22", [&](NodeContext& ctx) {
    auto in = ctx.store().take(kI22);
    if (ctx.rel() >= n1) return;
    std::vector<Word> c = in.empty() ? std::vector<Word>{} : std::move(in.front().payload);
    c.resize(n1, 0);
    ctx.store().put(i22p.col_key(), std::move(c));
  });
  DistributedMatrix z;
  {
    CliqueWorld::SubClique g1(w, {whole.first, n1});
    z = mm(w, i22p, y.with_layout(Layout::cols), t + "/z", {family, 1});
  }
  w.exchange("route.lower", [&](NodeContext& ctx, Outbox& box) {
    if (ctx.rel() < n2) box.send(n1 + ctx.rel(), kZRow, ctx.store().get(z.row_key()));
  });
  w.run_local("assemble", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    const PrimeField& f = ctx.field();
    const std::size_t l = ctx.rel();
    std::vector<Word> row(n, 0), col(n, 0);
    auto in = st.take(kZRow);
    if (l < n1) {
      const auto& r11 = st.get(i11.row_key());
      const auto& c11 = st.get(i11.col_key());
      const auto& zc = st.get(z.col_key());
      std::copy(r11.begin(), r11.end(), row.begin());
      std::copy(c11.begin(), c11.end(), col.begin());
      for (std::size_t i = 0; i < n2; ++i) col[n1 + i] = f.neg(zc[i]);
    } else {
      const auto& r22 = st.get(i22.row_key());
      const auto& c22 = st.get(i22.col_key());
      const auto& zr = in.front().payload;
      for (std::size_t j = 0; j < n1; ++j) row[j] = f.neg(zr[j]);
      std::copy(r22.begin(), r22.end(), row.begin() + static_cast<std::ptrdiff_t>(n1));
      std::copy(c22.begin(), c22.end(), col.begin() + static_cast<std::ptrdiff_t>(n1));
    }
    st.erase_prefix(t + "/");
    st.put(out.row_key(), std::move(row));
    st.put(out.col_key(), std::move(col));
  });
}

void check_square(const CliqueWorld& w, const DistributedMatrix& a, const char* who) {
  if (a.rows != a.cols || a.rows != w.active().count)
    throw dimension_error(std::string(who) + ": need an n x n matrix on n nodes");
}

void put_identity(CliqueWorld& w, const DistributedMatrix& id) {
  w.run_local("identity", [&](NodeContext& ctx) {
    std::vector<Word> e(id.rows, 0);
    e[ctx.rel()] = 1;
    ctx.store().put(id.row_key(), e);
    ctx.store().put(id.col_key(), std::move(e));
  });
}

/// Extends `pw` (pw[1] = base, pw[0] = I) to pw[0..count) by doubling.
void doubling(CliqueWorld& w, std::vector<DistributedMatrix>& pw, std::size_t count, const std::string& key,
              KernelFamily family) {
  for (std::size_t batch = 0; pw.size() < count; ++batch) {
    const std::size_t have = pw.size() - 1;
    const std::size_t take = std::min(have, count - pw.size());
    std::vector<DistributedMatrix> as(pw.begin() + 1, pw.begin() + 1 + static_cast<std::ptrdiff_t>(take));
    std::vector<DistributedMatrix> bs(take, pw[have]);
    auto res = mm_multi(w, std::span<const DistributedMatrix>(as), std::span<const DistributedMatrix>(bs),
                        key + "/b" + std::to_string(batch), {family, 1});
    pw.insert(pw.end(), res.begin(), res.end());
  }
}

std::vector<Word> char_poly_impl(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family, PowerTable* keep) {
  check_square(w, a, "char_poly");
  const std::size_t n = a.rows;
  if (w.field().p() <= n)
    throw unsupported_field_error("char_poly needs field characteristic above n = " + std::to_string(n));
  const DistributedMatrix full = complete_layout(w, a, Layout::rows_and_cols);
  const std::size_t p = power_split(n);
  PowerTable pt = power_batch(w, full, p, "cp/pow", family);

  w.exchange("traces", [&](NodeContext& ctx, Outbox& box) {
    const PrimeField& f = ctx.field();
    auto& st = ctx.store();
    for (std::size_t k = 1; k <= n; ++k) {
      const auto& r = st.get(pt.stride[k / p].row_key());
      const auto& c = st.get(pt.low[k % p].col_key());
      Word s = 0;
      for (std::size_t i = 0; i < n; ++i) s = f.add(s, f.mul(r[i], c[i]));
      box.send(k - 1, kTrace, {s});
    }
  });
  w.run_local("trace.sum", [&](NodeContext& ctx) {
    Word s = 0;
    for (auto& e : ctx.store().take(kTrace)) s = ctx.field().add(s, e.payload[0]);
    ctx.store().put("cp/s_own", {s});
  });
  all_gather(w, "traces.broadcast", "cp/s_own", "cp/s");

  // Newton identities: S c = -s with S[i][i] = i + 1 and S[i][j] = s_{i-j}.
  const DistributedMatrix S{"cp/S", n, n};
  w.run_local("newton", [&](NodeContext& ctx) {
    const auto& s = ctx.store().get("cp/s");
    const std::size_t l = ctx.rel();
    std::vector<Word> row(n, 0), col(n, 0);
    row[l] = col[l] = static_cast<Word>(l + 1);
    for (std::size_t j = 0; j < l; ++j) row[j] = s[l - j - 1];
    for (std::size_t i = l + 1; i < n; ++i) col[i] = s[i - l - 1];
    ctx.store().put(S.row_key(), std::move(row));
    ctx.store().put(S.col_key(), std::move(col));
  });
  const DistributedMatrix sinv = tri_inverse(w, S, "cp/Sinv", family);
  w.run_local("coefficients", [&](NodeContext& ctx) {
    const PrimeField& f = ctx.field();
    const auto& s = ctx.store().get("cp/s");
    const auto& r = ctx.store().get(sinv.row_key());
    Word acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc = f.add(acc, f.mul(r[i], s[i]));
    ctx.store().put("cp/c_own", {f.neg(acc)});
  });
  all_gather(w, "coefficients.broadcast", "cp/c_own", "cp/c");
  std::vector<Word> c = w.store(w.active().first).get("cp/c");
  w.run_local("cleanup", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    for (const char* k : {"cp/s_own", "cp/s", "cp/c_own"}) st.erase(k);
    st.erase_prefix("cp/S");
    if (!keep) st.erase_prefix("cp/pow/");
  });
  if (keep) *keep = std::move(pt);
  return c;
}

}  // namespace

std::size_t power_split(std::size_t n) {
  std::size_t p = 1;
  while (p * p <= n) ++p;
  return p;
}

DistributedMatrix tri_inverse(CliqueWorld& w, const DistributedMatrix& a, const std::string& out,
                              KernelFamily family) {
  check_square(w, a, "tri_inverse");
  const DistributedMatrix full = complete_layout(w, a, Layout::rows_and_cols);
  w.run_local("tri_inverse.check", [&](NodeContext& ctx) {
    const auto& row = ctx.store().get(full.row_key());
    for (std::size_t j = ctx.rel() + 1; j < row.size(); ++j)
      if (row[j] != 0) throw dimension_error("tri_inverse: matrix is not lower triangular");
  });
  const DistributedMatrix res{out, a.rows, a.rows, Layout::rows_and_cols};
  CliqueWorld::Scope scope(w, "tri_inverse");
  tri_rec(w, full, res, 0, family);
  return res;
}

PowerTable power_batch(CliqueWorld& w, const DistributedMatrix& a, std::size_t p, const std::string& key,
                       KernelFamily family) {
  check_square(w, a, "power_batch");
  if (p == 0) throw std::invalid_argument("power_batch: p >= 1");
  const DistributedMatrix full = complete_layout(w, a, Layout::rows_and_cols);
  CliqueWorld::Scope scope(w, "power_batch");
  const DistributedMatrix id{key + "/I", a.rows, a.rows};
  put_identity(w, id);
  PowerTable pt;
  pt.p = p;
  pt.low = {id, full};
  doubling(w, pt.low, p + 1, key + "/low", family);
  pt.stride = {id, pt.low[p]};
  pt.low.resize(p);
  doubling(w, pt.stride, p, key + "/stride", family);
  pt.stride.resize(p);
  return pt;
}

std::vector<Word> char_poly(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family) {
  return char_poly_impl(w, a, family, nullptr);
}

FieldElement det(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family) {
  const auto c = char_poly(w, a, family);
  const PrimeField& f = w.field();
  return {f, c.size() % 2 ? f.neg(c.back()) : c.back()};
}

DistributedMatrix inverse(CliqueWorld& w, const DistributedMatrix& a, const std::string& out, KernelFamily family) {
  CliqueWorld::Scope scope(w, "inverse");
  PowerTable pt;
  const auto c = char_poly_impl(w, a, family, &pt);
  const std::size_t n = a.rows, p = pt.p;
  const PrimeField& f = w.field();
  const Word cn = c[n - 1];
  if (cn == 0) {
    w.run_local("cleanup", [&](NodeContext& ctx) { ctx.store().erase_prefix("cp/pow/"); });
    throw singular_matrix_error("the matrix is not invertible", singular_matrix_error::npos);
  }
  // A^{-1} = -(sum_i coef(i) A^i) / c_n with coef(i) = c_{n-1-i}, c_0 = 1.
  auto coef = [&](std::size_t i) -> Word { return i == n - 1 ? 1 : c[n - 2 - i]; };
  std::vector<DistributedMatrix> es, lows;
  for (std::size_t a2 = 0; a2 < p; ++a2) {
    es.push_back({"inv/E" + std::to_string(a2), n, n, Layout::rows});
    lows.push_back(pt.low[a2].with_layout(Layout::cols));
  }
  w.run_local("combine", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    for (std::size_t a2 = 0; a2 < p; ++a2) {
      std::vector<Word> e(n, 0);
      for (std::size_t a1 = 0; a1 < p && a1 * p + a2 < n; ++a1) {
        const Word k = coef(a1 * p + a2);
        if (k == 0) continue;
        const auto& r = st.get(pt.stride[a1].row_key());
        for (std::size_t j = 0; j < n; ++j) e[j] = f.add(e[j], f.mul(k, r[j]));
      }
      st.put(es[a2].row_key(), std::move(e));
    }
  });
  const auto prods = mm_multi(w, std::span<const DistributedMatrix>(es), std::span<const DistributedMatrix>(lows),
                              "inv/P", {family, 1});
  const Word scale = f.neg(f.inv(cn));
  const DistributedMatrix res{out, n, n, Layout::rows_and_cols};
  w.run_local("sum", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    std::vector<Word> row(n, 0), col(n, 0);
    for (const auto& pr : prods) {
      const auto& r = st.get(pr.row_key());
      const auto& cc = st.get(pr.col_key());
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = f.add(row[j], r[j]);
        col[j] = f.add(col[j], cc[j]);
      }
    }
    for (auto& x : row) x = f.mul(x, scale);
    for (auto& x : col) x = f.mul(x, scale);
    st.erase_prefix("inv/");
    st.erase_prefix("cp/pow/");
    st.put(res.row_key(), std::move(row));
    st.put(res.col_key(), std::move(col));
  });
  return res;
}

}  // namespace ccq
