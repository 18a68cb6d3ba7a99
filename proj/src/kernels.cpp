#include "ccq/kernels.hpp"

#include <omp.h>

#include <algorithm>

namespace ccq {

namespace {

void check_shapes(const Matrix<Word>& a, const Matrix<Word>& b) {
  if (a.cols() != b.rows())
    throw dimension_error("product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " by " +
                          std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

using u128 = unsigned __int128;

// One output row of a*b mod p. Small primes accumulate unreduced in 128 bits.
void matmul_row(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b, std::size_t i, std::span<Word> out,
                std::vector<u128>& acc) {
  const std::size_t q = b.cols();
  const Word p = f.p();
  std::fill(acc.begin(), acc.end(), 0);
  const bool lazy = p < (Word{1} << 32);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const Word aik = a(i, k);
    if (aik == 0) continue;
    const auto brow = b.row(k);
    if (lazy) {
      for (std::size_t j = 0; j < q; ++j) acc[j] += static_cast<u128>(aik) * brow[j];
    } else {
      for (std::size_t j = 0; j < q; ++j) acc[j] = (acc[j] + static_cast<u128>(aik) * brow[j]) % p;
    }
  }
  for (std::size_t j = 0; j < q; ++j) out[j] = static_cast<Word>(acc[j] % p);
}

void minplus_row(const Matrix<Word>& a, const Matrix<Word>& b, std::size_t i, std::span<Word> out) {
  std::fill(out.begin(), out.end(), kInfWord);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const std::int64_t aik = mp_decode(a(i, k));
    if (aik == kInf) continue;
    const auto brow = b.row(k);
    for (std::size_t j = 0; j < out.size(); ++j) {
      const std::int64_t bkj = mp_decode(brow[j]);
      if (bkj == kInf) continue;
      const std::int64_t s = aik + bkj;
      if (s < mp_decode(out[j])) out[j] = mp_encode(s);
    }
  }
}

}  // namespace

FieldMatrix matmul_mod(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b) {
  check_shapes(a, b);
  FieldMatrix c(a.rows(), b.cols(), 0);
  const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel
  {
    std::vector<u128> acc(b.cols());
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) matmul_row(f, a, b, static_cast<std::size_t>(i), c.row(static_cast<std::size_t>(i)), acc);
  }
  return c;
}

Matrix<Word> minplus(const Matrix<Word>& a, const Matrix<Word>& b) {
  check_shapes(a, b);
  Matrix<Word> c(a.rows(), b.cols(), kInfWord);
  const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) minplus_row(a, b, static_cast<std::size_t>(i), c.row(static_cast<std::size_t>(i)));
  return c;
}

namespace serial {

FieldMatrix matmul_mod(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b) {
  check_shapes(a, b);
  FieldMatrix c(a.rows(), b.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Word s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s = f.add(s, f.mul(a(i, k), b(k, j)));
      c(i, j) = s;
    }
  return c;
}

Matrix<Word> minplus(const Matrix<Word>& a, const Matrix<Word>& b) {
  check_shapes(a, b);
  Matrix<Word> c(a.rows(), b.cols(), kInfWord);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::int64_t best = kInf;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const auto x = mp_decode(a(i, k)), y = mp_decode(b(k, j));
        if (x != kInf && y != kInf) best = std::min(best, x + y);
      }
      c(i, j) = mp_encode(best);
    }
  return c;
}

}  // namespace serial

}  // namespace ccq
