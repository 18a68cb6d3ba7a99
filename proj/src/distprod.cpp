#include "ccq/distprod.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>

#include "ccq/mm.hpp"

namespace ccq {

namespace {

using boost::multiprecision::cpp_int;

std::size_t bit_length(const cpp_int& v) { return v == 0 ? 0 : static_cast<std::size_t>(msb(v)) + 1; }

void check_inputs(const CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b, std::int64_t M) {
  if (M < 0) throw std::invalid_argument("dist_prod: M >= 0");
  if (a.rows != w.active().count || b.cols != a.rows || b.rows != a.cols)
    throw dimension_error("dist_prod: need A (n x m) and B (m x n) on an n-node range");
}

}  // namespace

std::string to_string(DistStrategy s) { return s == DistStrategy::dft ? "dft" : "semiring"; }

DftBatchPlan make_dft_plan(std::size_t m, std::int64_t M) {
  if (m == 0 || M < 0) throw std::invalid_argument("make_dft_plan: m >= 1, M >= 0");
  DftBatchPlan p;
  p.m = m;
  p.M = M;
  cpp_int top = 1;
  for (std::int64_t i = 0; i < 2 * M; ++i) top *= m + 1;
  // ceil(log2(top + 1)) is the bit length of top.
  p.N = std::max<std::size_t>(bit_length(top), 1);
  p.p = least_prime_congruent(p.N, static_cast<Word>(m) * p.N + 1);
  p.root = primitive_root_of_unity(PrimeField(p.p), 2 * p.N);
  return p;
}

std::uint64_t minplus_units(std::int64_t bound, std::size_t n) {
  if (bound < 0) throw std::invalid_argument("minplus_units: bound >= 0");
  // 2 * bound + 1 finite values and infinity.
  const auto values = static_cast<std::uint64_t>(2 * bound + 2);
  std::uint64_t bits = 1;
  while (bits < 64 && (std::uint64_t{1} << bits) < values) ++bits;
  return payload_units(bits, n);
}

std::uint64_t predict_dft_rounds(std::size_t n, std::size_t m, std::int64_t M, KernelFamily family) {
  if (m > n || M > static_cast<std::int64_t>(n)) return std::numeric_limits<std::uint64_t>::max();
  const DftBatchPlan p = make_dft_plan(m, M);
  return predict_mm_rounds(n, m, p.batch(), family, 1);
}

std::uint64_t predict_semiring_rounds(std::size_t n, std::size_t m, std::int64_t M) {
  return predict_mm_rounds(n, m, 1, KernelFamily::trivial, minplus_units(2 * M, n));
}

DistStrategy select_strategy(std::size_t n, std::size_t m, std::int64_t M, KernelFamily family) {
  return predict_dft_rounds(n, m, M, family) < predict_semiring_rounds(n, m, M) ? DistStrategy::dft
                                                                                : DistStrategy::semiring;
}

DistributedMatrix dist_prod_dft(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b,
                                std::int64_t M, const std::string& out, KernelFamily family) {
  check_inputs(w, a, b, M);
  const std::size_t n = a.rows, m = a.cols;
  if (M > static_cast<std::int64_t>(n)) throw std::invalid_argument("dist_prod_dft: M > n, use the semiring strategy");
  if (m > n) throw std::invalid_argument("dist_prod_dft: m > n");
  const DftBatchPlan plan = make_dft_plan(m, M);
  const PrimeField f(plan.p);
  const std::size_t L = plan.batch();
  CliqueWorld::Scope scope(w, "dist_prod.dft");

  // Transform of the bit string of (m+1)^e for every exponent e in [0, 2M].
  std::vector<std::vector<Word>> table(static_cast<std::size_t>(2 * M + 1));
  {
    cpp_int x = 1;
    for (auto& row : table) {
      std::vector<Word> bits(L, 0);
      for (std::size_t i = 0; i < plan.N; ++i) bits[i] = bit_test(x, static_cast<unsigned>(i)) ? 1 : 0;
      row = dft(f, bits, plan.root, L);
      x *= m + 1;
    }
  }
  const std::string tmp = out + "/dft";
  auto key = [&](const char* which, std::size_t s) { return tmp + "/" + which + "/" + std::to_string(s); };
  w.run_local("encode", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    auto encode = [&](const std::string& src, const char* which, const std::string& suffix) {
      if (!st.has(src)) return;
      const auto& v = st.get(src);
      std::vector<std::vector<Word>> per(L, std::vector<Word>(v.size(), 0));
      for (std::size_t t = 0; t < v.size(); ++t) {
        const std::int64_t x = mp_decode(v[t]);
        if (x == kInf) continue;
        if (x < -M || x > M) throw dimension_error("dist_prod_dft: entry outside [-M, M]");
        const auto& tr = table[static_cast<std::size_t>(M - x)];
        for (std::size_t s = 0; s < L; ++s) per[s][t] = tr[s];
      }
      for (std::size_t s = 0; s < L; ++s) st.put(key(which, s) + suffix, std::move(per[s]));
    };
    encode(a.row_key(), "A", "/row");
    encode(a.col_key(), "A", "/col");
    encode(b.row_key(), "B", "/row");
    encode(b.col_key(), "B", "/col");
  });
  std::vector<DistributedMatrix> as, bs;
  for (std::size_t s = 0; s < L; ++s) {
    as.push_back({key("A", s), n, m, a.layout});
    bs.push_back({key("B", s), m, n, b.layout});
  }
  const auto cs = mm_multi(w, FieldRing{f}, std::span<const DistributedMatrix>(as), std::span<const DistributedMatrix>(bs),
                           tmp + "/C", MmOptions{family, 1});

  const DistributedMatrix res{out, n, n, Layout::rows_and_cols};
  const Word bound = static_cast<Word>(m) * plan.N;
  w.run_local("decode", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    auto decode = [&](const std::string& suffix, const std::string& dst) {
      std::vector<const std::vector<Word>*> src(L);
      for (std::size_t s = 0; s < L; ++s) src[s] = &st.get(cs[s].key + suffix);
      std::vector<Word> res_v(n), spectrum(L);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < L; ++s) spectrum[s] = (*src[s])[j];
        const auto coef = idft(f, spectrum, plan.root, L);
        cpp_int v = 0;
        for (std::size_t i = L; i-- > 0;) {
          if (coef[i] > bound) throw std::logic_error("dist_prod_dft: convolution coefficient exceeds its bound");
          v = (v << 1) + coef[i];
        }
        if (v == 0) {
          res_v[j] = kInfWord;
          continue;
        }
        std::int64_t lg = 0;
        for (v /= m + 1; v > 0; v /= m + 1) ++lg;
        res_v[j] = mp_encode(2 * M - lg);
      }
      st.put(dst, std::move(res_v));
    };
    decode("/row", res.row_key());
    decode("/col", res.col_key());
    st.erase_prefix(tmp + "/");
  });
  return res;
}

DistributedMatrix dist_prod_semiring(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b,
                                     std::int64_t M, const std::string& out) {
  check_inputs(w, a, b, M);
  CliqueWorld::Scope scope(w, "dist_prod.semiring");
  const std::uint64_t units = minplus_units(2 * M, a.rows);
  const auto c = mm_multi(w, MinPlusRing{}, std::span(&a, 1), std::span(&b, 1), out + "/sr", MmOptions{KernelFamily::trivial, units});
  return rename(w, c.front(), out);
}

DistributedMatrix dist_prod(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b, std::int64_t M,
                            const std::string& out, KernelFamily family) {
  check_inputs(w, a, b, M);
  if (select_strategy(a.rows, a.cols, M, family) == DistStrategy::dft) return dist_prod_dft(w, a, b, M, out, family);
  return dist_prod_semiring(w, a, b, M, out);
}

}  // namespace ccq
