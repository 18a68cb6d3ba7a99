#include "ccq/bilinear.hpp"

#include <cmath>
#include <stdexcept>

namespace ccq {

KernelFamily parse_kernel_family(const std::string& s) {
  if (s == "trivial") return KernelFamily::trivial;
  if (s == "strassen") return KernelFamily::strassen;
  throw std::invalid_argument("unknown kernel '" + s + "'");
}

std::string to_string(KernelFamily f) { return f == KernelFamily::trivial ? "trivial" : "strassen"; }

BilinearAlgorithm trivial_algorithm(std::size_t d, std::size_t e) {
  if (d == 0 || e == 0) throw std::invalid_argument("trivial_algorithm: d, e >= 1");
  BilinearAlgorithm alg;
  alg.d = d;
  alg.e = e;
  alg.t = d * d * e;
  alg.alpha.assign(alg.t * d * e, 0);
  alg.beta.assign(alg.t * d * e, 0);
  alg.lambda.assign(alg.t * d * d, 0);
  alg.name = "trivial(" + std::to_string(d) + "," + std::to_string(e) + ")";
  // mu = (i', j', s') in [d] x [d] x [e]
  for (std::size_t ip = 0; ip < d; ++ip)
    for (std::size_t jp = 0; jp < d; ++jp)
      for (std::size_t sp = 0; sp < e; ++sp) {
        const std::size_t mu = (ip * d + jp) * e + sp;
        alg.lambda[(mu * d + ip) * d + jp] = 1;
        alg.alpha[(mu * d + ip) * e + sp] = 1;
        alg.beta[(mu * d + jp) * e + sp] = 1;
      }
  return alg;
}

BilinearAlgorithm strassen() {
  BilinearAlgorithm alg;
  alg.d = 2;
  alg.e = 2;
  alg.t = 7;
  alg.alpha.assign(28, 0);
  alg.beta.assign(28, 0);
  alg.lambda.assign(28, 0);
  alg.name = "strassen";
  auto A = [&](std::size_t mu, std::size_t r, std::size_t c, std::int64_t v) { alg.alpha[(mu * 2 + r) * 2 + c] = v; };
  // B[r][c] is addressed as beta(i = c, j = r).
  auto B = [&](std::size_t mu, std::size_t r, std::size_t c, std::int64_t v) { alg.beta[(mu * 2 + c) * 2 + r] = v; };
  auto C = [&](std::size_t mu, std::size_t r, std::size_t c, std::int64_t v) { alg.lambda[(mu * 2 + r) * 2 + c] = v; };
  // M1 = (A11 + A22)(B11 + B22)
  A(0, 0, 0, 1), A(0, 1, 1, 1), B(0, 0, 0, 1), B(0, 1, 1, 1);
  // M2 = (A21 + A22) B11
  A(1, 1, 0, 1), A(1, 1, 1, 1), B(1, 0, 0, 1);
  // M3 = A11 (B12 - B22)
  A(2, 0, 0, 1), B(2, 0, 1, 1), B(2, 1, 1, -1);
  // M4 = A22 (B21 - B11)
  A(3, 1, 1, 1), B(3, 1, 0, 1), B(3, 0, 0, -1);
  // M5 = (A11 + A12) B22
  A(4, 0, 0, 1), A(4, 0, 1, 1), B(4, 1, 1, 1);
  // M6 = (A21 - A11)(B11 + B12)
  A(5, 1, 0, 1), A(5, 0, 0, -1), B(5, 0, 0, 1), B(5, 0, 1, 1);
  // M7 = (A12 - A22)(B21 + B22)
  A(6, 0, 1, 1), A(6, 1, 1, -1), B(6, 1, 0, 1), B(6, 1, 1, 1);
  // C11 = M1 + M4 - M5 + M7, C12 = M3 + M5, C21 = M2 + M4, C22 = M1 - M2 + M3 + M6
  C(0, 0, 0, 1), C(3, 0, 0, 1), C(4, 0, 0, -1), C(6, 0, 0, 1);
  C(2, 0, 1, 1), C(4, 0, 1, 1);
  C(1, 1, 0, 1), C(3, 1, 0, 1);
  C(0, 1, 1, 1), C(1, 1, 1, -1), C(2, 1, 1, 1), C(5, 1, 1, 1);
  return alg;
}

BilinearAlgorithm tensor_product(const BilinearAlgorithm& x, const BilinearAlgorithm& y) {
  BilinearAlgorithm r;
  r.d = x.d * y.d;
  r.e = x.e * y.e;
  r.t = x.t * y.t;
  r.alpha.assign(r.t * r.d * r.e, 0);
  r.beta.assign(r.t * r.d * r.e, 0);
  r.lambda.assign(r.t * r.d * r.d, 0);
  r.name = x.name + "*" + y.name;
  for (std::size_t m1 = 0; m1 < x.t; ++m1)
    for (std::size_t m2 = 0; m2 < y.t; ++m2) {
      const std::size_t mu = m1 * y.t + m2;
      for (std::size_t i1 = 0; i1 < x.d; ++i1)
        for (std::size_t i2 = 0; i2 < y.d; ++i2) {
          const std::size_t i = i1 * y.d + i2;
          for (std::size_t j1 = 0; j1 < x.e; ++j1)
            for (std::size_t j2 = 0; j2 < y.e; ++j2) {
              const std::size_t j = j1 * y.e + j2;
              r.alpha[(mu * r.d + i) * r.e + j] = x.a(m1, i1, j1) * y.a(m2, i2, j2);
              r.beta[(mu * r.d + i) * r.e + j] = x.b(m1, i1, j1) * y.b(m2, i2, j2);
            }
          for (std::size_t k1 = 0; k1 < x.d; ++k1)
            for (std::size_t k2 = 0; k2 < y.d; ++k2) {
              const std::size_t k = k1 * y.d + k2;
              r.lambda[(mu * r.d + i) * r.d + k] = x.l(m1, i1, k1) * y.l(m2, i2, k2);
            }
        }
    }
  return r;
}

BilinearAlgorithm tensor_power(const BilinearAlgorithm& alg, unsigned k) {
  if (k == 0) throw std::invalid_argument("tensor_power: k >= 1");
  BilinearAlgorithm r = alg;
  for (unsigned i = 1; i < k; ++i) r = tensor_product(r, alg);
  if (k > 1) r.name = alg.name + "^" + std::to_string(k);
  return r;
}

std::size_t max_d_for_budget(KernelFamily family, std::size_t t_max, double gamma) {
  if (t_max == 0) throw std::invalid_argument("max_d_for_budget: t_max >= 1");
  if (gamma < 0) throw std::invalid_argument("max_d_for_budget: gamma >= 0");
  if (family == KernelFamily::strassen) {
    if (gamma != 1.0) throw std::invalid_argument("Strassen powers realize only gamma = 1");
    std::size_t d = 1, t = 1;
    while (t * 7 <= t_max) {
      t *= 7;
      d *= 2;
    }
    return d;
  }
  auto rank = [&](std::size_t d) {
    const auto e = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(d), gamma) - 1e-9));
    return d * d * std::max<std::size_t>(e, 1);
  };
  std::size_t d = 1;
  while (rank(d + 1) <= t_max) ++d;
  return d;
}

FieldMatrix apply(const BilinearAlgorithm& alg, const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b) {
  if (a.rows() != alg.d || a.cols() != alg.e || b.rows() != alg.e || b.cols() != alg.d)
    throw dimension_error("apply: block shapes do not match the algorithm");
  FieldMatrix c(alg.d, alg.d, 0);
  for (std::size_t mu = 0; mu < alg.t; ++mu) {
    Word s = 0, t = 0;
    for (std::size_t i = 0; i < alg.d; ++i)
      for (std::size_t j = 0; j < alg.e; ++j) {
        if (auto co = alg.a(mu, i, j)) s = f.add(s, f.mul(f.from_int(co), a(i, j)));
        if (auto co = alg.b(mu, i, j)) t = f.add(t, f.mul(f.from_int(co), b(j, i)));
      }
    const Word st = f.mul(s, t);
    for (std::size_t i = 0; i < alg.d; ++i)
      for (std::size_t k = 0; k < alg.d; ++k)
        if (auto co = alg.l(mu, i, k)) c(i, k) = f.add(c(i, k), f.mul(f.from_int(co), st));
  }
  return c;
}

}  // namespace ccq
