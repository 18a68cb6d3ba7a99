#include "ccq/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ccq/collective.hpp"
#include "ccq/detinv.hpp"
#include "ccq/distprod.hpp"
#include "ccq/krylov.hpp"
#include "ccq/mm.hpp"

namespace ccq {

namespace {

constexpr Tag kTutte = 601;
constexpr int kAttempts = 6;

std::int64_t clip(std::int64_t v, std::int64_t bound) { return v != kInf && (v > bound || v < -bound) ? kInf : v; }

void require_tutte_field(const CliqueWorld& w, std::size_t n) {
  if (w.field().p() < tutte_field_bound(n))
    throw unsupported_field_error("Tutte-matrix algorithms need p >= " + std::to_string(tutte_field_bound(n)));
}

void require_undirected(const WeightedGraph& g) {
  g.validate();
  if (g.directed) throw std::invalid_argument("matching algorithms need an undirected graph");
}

// Node i learns its own neighbour list; input placement, not charged.
void place_neighbors(CliqueWorld& w, const WeightedGraph& g, const std::string& key) {
  const auto nb = g.neighbors();
  for (std::size_t i = 0; i < g.n; ++i) w.store(w.active().first + i).put(key, {nb[i].begin(), nb[i].end()});
}

void check_size(const CliqueWorld& w, const WeightedGraph& g) {
  if (g.n != w.active().count) throw dimension_error("graph needs one node per vertex");
}

void entrywise_min(CliqueWorld& w, const DistributedMatrix& f, const DistributedMatrix& r) {
  w.run_local("min", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    for (auto [dst, src] : {std::pair{f.row_key(), r.row_key()}, std::pair{f.col_key(), r.col_key()}}) {
      auto& a = st.mut(dst);
      const auto& b = st.get(src);
      for (std::size_t i = 0; i < a.size(); ++i)
        if (mp_decode(b[i]) < mp_decode(a[i])) a[i] = b[i];
      st.erase(src);
    }
  });
}

}  // namespace

void WeightedGraph::validate() const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
    const auto key = directed ? std::pair{e.u, e.v} : std::pair{std::min(e.u, e.v), std::max(e.u, e.v)};
    if (!seen.insert(key).second)
      throw std::invalid_argument("repeated edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    if (e.w > M || e.w < (directed ? -M : 0)) throw std::invalid_argument("edge weight out of range");
  }
}

Matrix<Word> WeightedGraph::adjacency() const {
  Matrix<Word> a(n, n, kInfWord);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = mp_encode(0);
  for (const Edge& e : edges) {
    a(e.u, e.v) = mp_encode(e.w);
    if (!directed) a(e.v, e.u) = mp_encode(e.w);
  }
  return a;
}

std::vector<std::vector<std::size_t>> WeightedGraph::neighbors() const {
  std::vector<std::vector<std::size_t>> nb(n);
  for (const Edge& e : edges) {
    nb[e.u].push_back(e.v);
    if (!directed) nb[e.v].push_back(e.u);
  }
  for (auto& l : nb) std::sort(l.begin(), l.end());
  return nb;
}

DistributedMatrix apsp_minplus_squaring(CliqueWorld& w, const WeightedGraph& g, const std::string& out,
                                        KernelFamily family) {
  g.validate();
  check_size(w, g);
  CliqueWorld::Scope scope(w, "apsp.squaring");
  DistributedMatrix d = scatter(w, out + "/D0", g.adjacency(), Layout::rows_and_cols);
  const std::int64_t cap = static_cast<std::int64_t>(std::max<std::size_t>(g.n, 2) - 1) * g.M;
  std::int64_t bound = g.M;
  for (std::size_t it = 0, len = 1; len < g.n; ++it, len *= 2) {
    const auto next = dist_prod(w, d, d, bound, out + "/D" + std::to_string(it + 1), family);
    erase(w, d);
    d = next;
    bound = std::min(2 * bound, cap);
  }
  return rename(w, d, out);
}

DistributedMatrix apsp_zwick(CliqueWorld& w, const WeightedGraph& g, const std::string& out, double c,
                             KernelFamily family) {
  g.validate();
  check_size(w, g);
  if (!(c > 0)) throw std::invalid_argument("sampling constant must be positive");
  const std::size_t n = g.n;
  CliqueWorld::Scope scope(w, "apsp.zwick");
  const DistributedMatrix f = scatter(w, out, g.adjacency(), Layout::rows_and_cols);
  const double ln = std::log(static_cast<double>(n));
  const std::size_t iters = n <= 1 ? 0 : static_cast<std::size_t>(std::ceil(ln / std::log(1.5) - 1e-9));
  double s = 1;
  for (std::size_t it = 1; it <= iters; ++it) {
    s *= 1.5;
    CliqueWorld::Scope step(w, "iter" + std::to_string(it));
    const std::size_t m = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(c * n * ln / s)), 1, n);
    const auto bound = static_cast<std::int64_t>(std::ceil(s * static_cast<double>(g.M)));
    w.run_local("sample", [&](NodeContext& ctx) {
      if (ctx.rel() != 0) return;
      auto r = ctx.rng("sample");
      std::vector<Word> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      for (std::size_t i = 0; i < m; ++i) std::swap(perm[i], perm[i + uniform_below(r, n - i)]);
      perm.resize(m);
      std::sort(perm.begin(), perm.end());
      ctx.store().put("zw/S", std::move(perm));
    });
    broadcast(w, "broadcast.S", 0, "zw/S");
    const DistributedMatrix fs{"zw/FxS", n, m, Layout::rows}, sf{"zw/FSx", m, n, Layout::cols};
    w.run_local("restrict", [&](NodeContext& ctx) {
      auto& st = ctx.store();
      const auto& sel = st.get("zw/S");
      const auto& row = st.get(f.row_key());
      const auto& col = st.get(f.col_key());
      std::vector<Word> a(m), b(m);
      for (std::size_t t = 0; t < m; ++t) {
        a[t] = mp_encode(clip(mp_decode(row[sel[t]]), bound));
        b[t] = mp_encode(clip(mp_decode(col[sel[t]]), bound));
      }
      st.put(fs.row_key(), std::move(a));
      st.put(sf.col_key(), std::move(b));
      st.erase("zw/S");
    });
    const auto r = dist_prod(w, fs, sf, bound, "zw/F1", family);
    erase(w, fs);
    erase(w, sf);
    entrywise_min(w, f, r);
  }
  return f;
}

std::int64_t diameter(CliqueWorld& w, const WeightedGraph& g, KernelFamily family) {
  CliqueWorld::Scope scope(w, "diameter");
  const auto d = apsp_minplus_squaring(w, g, "dm/D", family);
  w.run_local("row_max", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    std::int64_t best = 0;
    for (Word x : st.get(d.row_key())) best = std::max(best, mp_decode(x));
    st.put("dm/max", {mp_encode(best)});
  });
  all_gather(w, "gather", "dm/max", "dm/all");
  const auto all = w.store(w.active().first).get("dm/all");
  w.run_local("cleanup", [&](NodeContext& ctx) { ctx.store().erase_prefix("dm/"); });
  std::int64_t best = 0;
  for (Word x : all) best = std::max(best, mp_decode(x));
  return best;
}

Word tutte_field_bound(std::size_t n) {
  const Word m = n;
  return std::max<Word>(4 * m * m * m * m, m + 1);
}

Word tutte_prime(std::size_t n) { return least_prime_at_least(tutte_field_bound(n)); }

DistributedMatrix tutte_matrix(CliqueWorld& w, const WeightedGraph& g, const std::string& key) {
  require_undirected(g);
  check_size(w, g);
  const std::size_t n = g.n;
  const std::string nbr = key + "/nbr";
  place_neighbors(w, g, nbr);
  const DistributedMatrix t{key, n, n};
  w.exchange("tutte.sample", [&](NodeContext& ctx, Outbox& box) {
    auto& st = ctx.store();
    const PrimeField& f = ctx.field();
    auto r = ctx.rng("tutte.sample");
    std::vector<Word> row(n, 0);
    for (Word j : st.get(nbr)) {
      if (j >= ctx.rel()) continue;
      row[j] = uniform_below(r, f.p());
      box.send(j, kTutte, {f.neg(row[j])});
    }
    st.put(t.row_key(), std::move(row));
  });
  w.run_local("tutte.assemble", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    auto& row = st.mut(t.row_key());
    for (auto& e : st.take(kTutte)) row[e.source] = e.payload[0];
    std::vector<Word> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = ctx.field().neg(row[i]);
    st.put(t.col_key(), std::move(col));
    st.erase(nbr);
  });
  return t;
}

std::size_t matching_size(CliqueWorld& w, const WeightedGraph& g, KernelFamily family) {
  require_undirected(g);
  check_size(w, g);
  require_tutte_field(w, g.n);
  CliqueWorld::Scope scope(w, "matching_size");
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    CliqueWorld::Scope at(w, "attempt" + std::to_string(attempt));
    const auto t = tutte_matrix(w, g, "ms/T");
    const std::size_t r = rank_rand(w, t, family);
    erase(w, t);
    if (r % 2 == 0) return r / 2;
  }
  throw monte_carlo_failure("matching_size: odd rank in every attempt");
}

std::vector<std::pair<std::size_t, std::size_t>> allowed_edges(CliqueWorld& w, const WeightedGraph& g,
                                                               KernelFamily family) {
  require_undirected(g);
  check_size(w, g);
  require_tutte_field(w, g.n);
  const std::size_t n = g.n;
  if (n % 2 || matching_size(w, g, family) != n / 2) throw no_perfect_matching_error("graph has no perfect matching");
  CliqueWorld::Scope scope(w, "allowed_edges");
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    CliqueWorld::Scope at(w, "attempt" + std::to_string(attempt));
    const auto t = tutte_matrix(w, g, "ae/T");
    DistributedMatrix inv;
    try {
      inv = inverse(w, t, "ae/Tinv", family);
    } catch (const singular_matrix_error&) {
      erase(w, t);
      continue;
    }
    place_neighbors(w, g, "ae/nbr");
    w.run_local("select", [&](NodeContext& ctx) {
      auto& st = ctx.store();
      const auto& row = st.get(inv.row_key());
      std::vector<Word> pairs;
      for (Word j : st.get("ae/nbr"))
        if (j > ctx.rel() && row[j] != 0) pairs.insert(pairs.end(), {ctx.rel(), j});
      st.put("ae/own", std::move(pairs));
    });
    all_gather(w, "gather", "ae/own", "ae/all");
    const auto all = w.store(w.active().first).get("ae/all");
    w.run_local("cleanup", [&](NodeContext& ctx) { ctx.store().erase_prefix("ae/"); });
    std::vector<std::pair<std::size_t, std::size_t>> res;
    for (std::size_t i = 0; i + 1 < all.size(); i += 2) res.emplace_back(all[i], all[i + 1]);
    return res;
  }
  throw monte_carlo_failure("allowed_edges: Tutte matrix singular in every attempt");
}

GEDecomposition gallai_edmonds(CliqueWorld& w, const WeightedGraph& g, KernelFamily family) {
  require_undirected(g);
  check_size(w, g);
  require_tutte_field(w, g.n);
  const std::size_t n = g.n;
  CliqueWorld::Scope scope(w, "gallai_edmonds");
  const NodeId base = w.active().first;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    CliqueWorld::Scope at(w, "attempt" + std::to_string(attempt));
    const auto t = tutte_matrix(w, g, "ge/T");
    const std::size_t r = rank_rand(w, t, family);
    if (r % 2) {
      erase(w, t);
      continue;
    }
    // The null space of T is spanned by the columns of M = V [-N11^-1 N12; I],
    // N = U T V. Vertex i is missed by some maximum matching iff row i of M
    // is nonzero.
    if (r == 0 || r == n) {
      w.run_local("trivial", [&](NodeContext& ctx) {
        ctx.store().erase_prefix("ge/");
        ctx.store().put("ge/bit", {r == 0 ? Word{1} : Word{0}});
      });
    } else {
      const auto [u, v] = toeplitz_pair(w, "ge/pre");
      const auto ut = mm(w, u, t, "ge/UT", {family, 1});
      const auto nmat = mm(w, ut, v, "ge/N", {family, 1});
      const std::size_t chunks = (n - r + r - 1) / r;
      const DistributedMatrix n11{"ge/N11", r, r};
      std::vector<DistributedMatrix> n12;
      for (std::size_t c = 0; c < chunks; ++c)
        n12.push_back({"ge/N12/" + std::to_string(c), r, r, Layout::rows});
      w.run_local("split", [&](NodeContext& ctx) {
        const std::size_t i = ctx.rel();
        if (i >= r) return;
        auto& st = ctx.store();
        const auto& row = st.get(nmat.row_key());
        const auto& col = st.get(nmat.col_key());
        st.put(n11.row_key(), {row.begin(), row.begin() + static_cast<std::ptrdiff_t>(r)});
        st.put(n11.col_key(), {col.begin(), col.begin() + static_cast<std::ptrdiff_t>(r)});
        for (std::size_t c = 0; c < chunks; ++c) {
          std::vector<Word> piece(r, 0);
          for (std::size_t j = 0; j < r && r + c * r + j < n; ++j) piece[j] = row[r + c * r + j];
          st.put(n12[c].row_key(), std::move(piece));
        }
      });
      bool singular = false;
      {
        CliqueWorld::SubClique sub(w, {base, r});
        try {
          const auto inv = inverse(w, n11, "ge/N11inv", family);
          const std::vector<DistributedMatrix> lhs(chunks, inv);
          mm_multi(w, lhs, n12, "ge/W", {family, 1});
        } catch (const singular_matrix_error&) {
          singular = true;
        }
      }
      if (singular) {
        w.run_local("cleanup", [&](NodeContext& ctx) { ctx.store().erase_prefix("ge/"); });
        continue;
      }
      const DistributedMatrix kmat{"ge/K", n, n, Layout::rows};
      w.run_local("kernel_basis", [&](NodeContext& ctx) {
        const std::size_t i = ctx.rel();
        auto& st = ctx.store();
        std::vector<Word> row(n, 0);
        if (i < r) {
          for (std::size_t c = 0; c < chunks; ++c) {
            const auto& wr = st.get("ge/W/" + std::to_string(c) + "/row");
            for (std::size_t j = 0; j < r && c * r + j < n - r; ++j) row[c * r + j] = ctx.field().neg(wr[j]);
          }
        } else {
          row[i - r] = 1;
        }
        st.put(kmat.row_key(), std::move(row));
      });
      const auto mmat = mm(w, v, kmat, "ge/M", {family, 1});
      w.run_local("row_test", [&](NodeContext& ctx) {
        auto& st = ctx.store();
        const auto& row = st.get(mmat.row_key());
        const bool nz = std::any_of(row.begin(), row.end(), [](Word x) { return x != 0; });
        st.erase_prefix("ge/");
        st.put("ge/bit", {nz ? Word{1} : Word{0}});
      });
    }
    all_gather(w, "gather.d", "ge/bit", "ge/dset");
    place_neighbors(w, g, "ge/nbr");
    w.run_local("label", [&](NodeContext& ctx) {
      auto& st = ctx.store();
      const auto& dset = st.get("ge/dset");
      Word label = 2;
      if (dset[ctx.rel()]) {
        label = 0;
      } else {
        for (Word j : st.get("ge/nbr"))
          if (dset[j]) label = 1;
      }
      st.put("ge/label", {label});
    });
    all_gather(w, "gather.labels", "ge/label", "ge/labels");
    const auto labels = w.store(base).get("ge/labels");
    w.run_local("cleanup", [&](NodeContext& ctx) { ctx.store().erase_prefix("ge/"); });
    GEDecomposition res;
    for (std::size_t i = 0; i < n; ++i) (labels[i] == 0 ? res.d : labels[i] == 1 ? res.k : res.c).push_back(i);
    return res;
  }
  throw monte_carlo_failure("gallai_edmonds: no usable preconditioner in every attempt");
}

}  // namespace ccq
