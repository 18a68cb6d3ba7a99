#include "oracle/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oracle {

u64 addm(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) + b) % p); }
u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : static_cast<u64>(static_cast<unsigned __int128>(a) + p - b); }
u64 mulm(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }

u64 powm(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  for (; e; e >>= 1, a = mulm(a, a, p))
    if (e & 1) r = mulm(r, a, p);
  return r;
}

u64 invm(u64 a, u64 p) {
  if (a % p == 0) throw std::domain_error("oracle: inverse of zero");
  return powm(a, p - 2, p);
}

u64 reduce(i64 v, u64 p) {
  const i64 r = v % static_cast<i64>(p);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(p) : r);
}

Mat identity(std::size_t n) {
  Mat m(n, std::vector<u64>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat matmul(const Mat& a, const Mat& b, u64 p) {
  const std::size_t n = a.size(), m = b.size(), q = b.empty() ? 0 : b[0].size();
  Mat c(n, std::vector<u64>(q, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      u64 s = 0;
      for (std::size_t t = 0; t < m; ++t) s = addm(s, mulm(a[i][t], b[t][j], p), p);
      c[i][j] = s;
    }
  return c;
}

Mat matpow(const Mat& a, u64 e, u64 p) {
  Mat r = identity(a.size());
  for (u64 i = 0; i < e; ++i) r = matmul(r, a, p);
  return r;
}

namespace {

// Row echelon form in place; returns pivot columns and the determinant factor.
std::vector<std::size_t> eliminate(Mat& a, u64 p, u64* det_out) {
  const std::size_t n = a.size(), m = n ? a[0].size() : 0;
  std::vector<std::size_t> piv;
  u64 det = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m && r < n; ++c) {
    std::size_t s = r;
    while (s < n && a[s][c] == 0) ++s;
    if (s == n) continue;
    if (s != r) {
      std::swap(a[s], a[r]);
      det = subm(0, det, p);
    }
    det = mulm(det, a[r][c], p);
    const u64 inv = invm(a[r][c], p);
    for (std::size_t i = r + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      const u64 f = mulm(a[i][c], inv, p);
      for (std::size_t j = c; j < m; ++j) a[i][j] = subm(a[i][j], mulm(f, a[r][j], p), p);
    }
    piv.push_back(c);
    ++r;
  }
  if (det_out) *det_out = r == n && n == m ? det : 0;
  return piv;
}

}  // namespace

u64 det(Mat a, u64 p) {
  u64 d = 0;
  eliminate(a, p, &d);
  return d;
}

std::size_t rank(Mat a, u64 p) { return eliminate(a, p, nullptr).size(); }

std::optional<Mat> inverse(Mat a, u64 p) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    a[i].resize(2 * n, 0);
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t s = c;
    while (s < n && a[s][c] == 0) ++s;
    if (s == n) return std::nullopt;
    std::swap(a[s], a[c]);
    const u64 inv = invm(a[c][c], p);
    for (auto& x : a[c]) x = mulm(x, inv, p);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const u64 f = a[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] = subm(a[i][j], mulm(f, a[c][j], p), p);
    }
  }
  Mat r(n);
  for (std::size_t i = 0; i < n; ++i) r[i].assign(a[i].begin() + static_cast<std::ptrdiff_t>(n), a[i].end());
  return r;
}

std::optional<std::vector<u64>> solve(Mat a, std::vector<u64> b, u64 p) {
  auto inv = inverse(std::move(a), p);
  if (!inv) return std::nullopt;
  std::vector<u64> x(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) x[i] = addm(x[i], mulm((*inv)[i][j], b[j], p), p);
  return x;
}

std::vector<u64> char_poly(const Mat& a, u64 p) {
  const std::size_t n = a.size();
  if (p <= n) throw std::invalid_argument("oracle char_poly needs p > n");
  // Values of det(xI - A) at x = 0..n, then Lagrange interpolation.
  std::vector<u64> ys(n + 1);
  for (std::size_t x = 0; x <= n; ++x) {
    Mat m(n, std::vector<u64>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = subm(i == j ? x % p : 0, a[i][j], p);
    ys[x] = det(m, p);
  }
  std::vector<u64> poly(n + 1, 0);  // ascending
  for (std::size_t i = 0; i <= n; ++i) {
    std::vector<u64> basis{1};
    u64 denom = 1;
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == i) continue;
      std::vector<u64> next(basis.size() + 1, 0);
      for (std::size_t t = 0; t < basis.size(); ++t) {
        next[t + 1] = addm(next[t + 1], basis[t], p);
        next[t] = subm(next[t], mulm(basis[t], j % p, p), p);
      }
      basis = std::move(next);
      denom = mulm(denom, subm(i % p, j % p, p), p);
    }
    const u64 scale = mulm(ys[i], invm(denom, p), p);
    for (std::size_t t = 0; t <= n; ++t) poly[t] = addm(poly[t], mulm(basis[t], scale, p), p);
  }
  std::vector<u64> c(n);
  for (std::size_t l = 1; l <= n; ++l) c[l - 1] = poly[n - l];
  return c;
}

std::vector<u64> minpol(const Mat& a, u64 p) {
  const std::size_t n = a.size();
  struct Reduced {
    std::vector<u64> v;
    std::size_t pivot;
    std::vector<u64> combo;  // v = sum combo[j] vec(A^j)
  };
  std::vector<Reduced> basis;
  Mat power = identity(n);
  for (std::size_t d = 0; d <= n; ++d) {
    std::vector<u64> v;
    for (const auto& row : power) v.insert(v.end(), row.begin(), row.end());
    std::vector<u64> combo(d + 1, 0);
    combo[d] = 1;
    for (const auto& b : basis) {
      if (v[b.pivot] == 0) continue;
      const u64 f = v[b.pivot];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = subm(v[i], mulm(f, b.v[i], p), p);
      for (std::size_t j = 0; j < b.combo.size(); ++j) combo[j] = subm(combo[j], mulm(f, b.combo[j], p), p);
    }
    auto nz = std::find_if(v.begin(), v.end(), [](u64 x) { return x != 0; });
    if (nz == v.end()) return combo;  // combo[d] = 1, so already monic
    const std::size_t piv = static_cast<std::size_t>(nz - v.begin());
    const u64 inv = invm(v[piv], p);
    for (auto& x : v) x = mulm(x, inv, p);
    for (auto& x : combo) x = mulm(x, inv, p);
    basis.push_back({std::move(v), piv, std::move(combo)});
    power = matmul(power, a, p);
  }
  throw std::logic_error("oracle minpol: no dependency found");
}

IMat minplus(const IMat& a, const IMat& b) {
  const std::size_t n = a.size(), m = b.size(), q = b.empty() ? 0 : b[0].size();
  IMat c(n, std::vector<i64>(q, INF));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t t = 0; t < m; ++t)
        if (a[i][t] != INF && b[t][j] != INF) c[i][j] = std::min(c[i][j], a[i][t] + b[t][j]);
  return c;
}

IMat floyd_warshall(IMat w) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) w[i][i] = std::min<i64>(w[i][i], 0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (w[i][k] != INF && w[k][j] != INF) w[i][j] = std::min(w[i][j], w[i][k] + w[k][j]);
  return w;
}

std::vector<std::uint32_t> Graph::adjacency_masks() const {
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : edges) {
    adj[u] |= 1U << v;
    adj[v] |= 1U << u;
  }
  return adj;
}

namespace {

std::size_t matching_rec(const std::vector<std::uint32_t>& adj, std::uint32_t mask, std::vector<int>& memo) {
  if (mask == 0) return 0;
  if (memo[mask] >= 0) return static_cast<std::size_t>(memo[mask]);
  const int v = __builtin_ctz(mask);
  const std::uint32_t rest = mask & ~(1U << v);
  std::size_t best = matching_rec(adj, rest, memo);
  for (std::uint32_t nb = adj[static_cast<std::size_t>(v)] & rest; nb; nb &= nb - 1) {
    const int u = __builtin_ctz(nb);
    best = std::max(best, 1 + matching_rec(adj, rest & ~(1U << u), memo));
  }
  memo[mask] = static_cast<int>(best);
  return best;
}

}  // namespace

std::size_t matching_number_without(const Graph& g, std::uint32_t removed) {
  if (g.n > 20) throw std::invalid_argument("oracle matching: n <= 20");
  std::vector<int> memo(std::size_t{1} << g.n, -1);
  const std::uint32_t all = g.n == 32 ? ~0U : (1U << g.n) - 1;
  return matching_rec(g.adjacency_masks(), all & ~removed, memo);
}

std::size_t matching_number(const Graph& g) { return matching_number_without(g, 0); }

GallaiEdmonds gallai_edmonds(const Graph& g) {
  const std::size_t nu = matching_number(g);
  GallaiEdmonds r{std::vector<bool>(g.n), std::vector<bool>(g.n), std::vector<bool>(g.n)};
  for (std::size_t v = 0; v < g.n; ++v) r.d[v] = matching_number_without(g, 1U << v) == nu;
  for (auto [u, v] : g.edges) {
    if (r.d[u] && !r.d[v]) r.a[v] = true;
    if (r.d[v] && !r.d[u]) r.a[u] = true;
  }
  for (std::size_t v = 0; v < g.n; ++v) r.c[v] = !r.d[v] && !r.a[v];
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> allowed_edges(const Graph& g) {
  const std::size_t nu = matching_number(g);
  if (2 * nu != g.n) throw std::invalid_argument("oracle allowed_edges: no perfect matching");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto [u, v] : g.edges)
    if (matching_number_without(g, (1U << u) | (1U << v)) == nu - 1) out.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Graph> connected_graphs(std::size_t n) {
  if (n == 0 || n > 7) throw std::invalid_argument("oracle connected_graphs: 1 <= n <= 7");
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::vector<std::size_t> perm(n);
  std::vector<std::vector<std::size_t>> perms;
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<std::vector<std::size_t>> slot_of(n, std::vector<std::size_t>(n));
  for (std::size_t s = 0; s < slots.size(); ++s) {
    slot_of[slots[s].first][slots[s].second] = s;
    slot_of[slots[s].second][slots[s].first] = s;
  }
  std::set<std::uint64_t> seen;
  std::vector<Graph> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << slots.size()); ++code) {
    Graph g{n, {}};
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (code >> s & 1) g.edges.push_back(slots[s]);
    // Connectivity by flood fill.
    const auto adj = g.adjacency_masks();
    std::uint32_t reach = 1, frontier = 1;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(__builtin_ctz(f))];
      frontier = next & ~reach;
      reach |= next;
    }
    if (reach != (1U << n) - 1) continue;
    std::uint64_t canon = ~std::uint64_t{0};
    for (const auto& p : perms) {
      std::uint64_t c = 0;
      for (auto [u, v] : g.edges) c |= std::uint64_t{1} << slot_of[p[u]][p[v]];
      canon = std::min(canon, c);
    }
    if (seen.insert(canon).second) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace oracle
