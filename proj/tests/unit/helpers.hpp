#pragma once

#include <random>

#include "ccq/dmatrix.hpp"
#include "ccq/kernels.hpp"
#include "oracle/oracle.hpp"

namespace th {

inline oracle::Mat to_oracle(const ccq::Matrix<ccq::Word>& m) {
  oracle::Mat r(m.rows(), std::vector<oracle::u64>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  return r;
}

inline std::vector<ccq::Word> to_oracle_vec(const std::vector<oracle::u64>& v) { return {v.begin(), v.end()}; }

inline ccq::Matrix<ccq::Word> from_oracle(const oracle::Mat& m) {
  ccq::Matrix<ccq::Word> r(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = m[i][j];
  return r;
}

inline oracle::IMat decode(const ccq::Matrix<ccq::Word>& m) {
  oracle::IMat r(m.rows(), std::vector<oracle::i64>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = ccq::mp_decode(m(i, j));
  return r;
}

inline ccq::Matrix<ccq::Word> encode(const oracle::IMat& m) {
  ccq::Matrix<ccq::Word> r(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = ccq::mp_encode(m[i][j]);
  return r;
}

inline oracle::Mat random_mat(std::mt19937_64& g, std::size_t r, std::size_t c, oracle::u64 p) {
  oracle::Mat m(r, std::vector<oracle::u64>(c));
  for (auto& row : m)
    for (auto& x : row) x = g() % p;
  return m;
}

/// Entries in [-M, M], infinity with probability inf_pct/100.
inline oracle::IMat random_minplus(std::mt19937_64& g, std::size_t r, std::size_t c, oracle::i64 M, int inf_pct) {
  oracle::IMat m(r, std::vector<oracle::i64>(c));
  for (auto& row : m)
    for (auto& x : row)
      x = static_cast<int>(g() % 100) < inf_pct ? oracle::INF
                                                : static_cast<oracle::i64>(g() % static_cast<oracle::u64>(2 * M + 1)) - M;
  return m;
}

}  // namespace th
