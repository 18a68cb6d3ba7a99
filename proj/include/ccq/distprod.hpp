#pragma once

#include <cstdint>
#include <string>

#include "ccq/bilinear.hpp"
#include "ccq/dmatrix.hpp"
#include "ccq/kernels.hpp"

namespace ccq {

/// Transform parameters for the polynomial encoding of (m+1)^e values.
struct DftBatchPlan {
  std::size_t m = 0;
  std::int64_t M = 0;
  std::size_t N = 0;  // bits of (m+1)^{2M}
  Word p = 0;         // p = 1 mod 2N, p > m N
  Word root = 0;      // primitive 2N-th root of unity mod p
  [[nodiscard]] std::size_t batch() const noexcept { return 2 * N; }
};

DftBatchPlan make_dft_plan(std::size_t m, std::int64_t M);

enum class DistStrategy { dft, semiring };
std::string to_string(DistStrategy s);

/// Message units per min-plus entry whose finite values lie in [-bound, bound].
std::uint64_t minplus_units(std::int64_t bound, std::size_t n);

/// Predicted rounds of both strategies for A (n x m) * B (m x n), entries in
/// [-M, M] or infinity. The transform strategy needs m <= n and M <= n;
/// otherwise its prediction is the maximum value.
std::uint64_t predict_dft_rounds(std::size_t n, std::size_t m, std::int64_t M, KernelFamily family = KernelFamily::trivial);
std::uint64_t predict_semiring_rounds(std::size_t n, std::size_t m, std::int64_t M);
DistStrategy select_strategy(std::size_t n, std::size_t m, std::int64_t M, KernelFamily family = KernelFamily::trivial);

// Inputs hold mp_encode'd values; A as rows, B as columns. The output is
// n x n under `out`, held as rows and columns.

DistributedMatrix dist_prod_dft(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b,
                                std::int64_t M, const std::string& out,
                                KernelFamily family = KernelFamily::trivial);
DistributedMatrix dist_prod_semiring(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b,
                                     std::int64_t M, const std::string& out);
/// Runs the strategy with fewer predicted rounds; structural ties go to the
/// semiring strategy. The choice appears in the ledger scope name.
DistributedMatrix dist_prod(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b, std::int64_t M,
                            const std::string& out, KernelFamily family = KernelFamily::trivial);

}  // namespace ccq
