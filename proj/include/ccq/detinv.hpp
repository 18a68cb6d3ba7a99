#pragma once

#include <string>
#include <vector>

#include "ccq/bilinear.hpp"
#include "ccq/dmatrix.hpp"

namespace ccq {

/// Inverse of a lower triangular matrix held as rows and columns on the
/// active range (one node per row). The range splits into halves of sizes
/// ceil(n/2) and floor(n/2) that recurse in parallel. Throws
/// singular_matrix_error naming the first zero diagonal entry.
DistributedMatrix tri_inverse(CliqueWorld& w, const DistributedMatrix& a, const std::string& out,
                              KernelFamily family = KernelFamily::trivial);

/// low[i] = A^i and stride[i] = A^{i p} for i in [0, p), computed by batched
/// doubling: from A^1..A^j one mm_multi call gives A^{j+1}..A^{2j}.
struct PowerTable {
  std::size_t p = 0;
  std::vector<DistributedMatrix> low, stride;
};
PowerTable power_batch(CliqueWorld& w, const DistributedMatrix& a, std::size_t p, const std::string& key,
                       KernelFamily family = KernelFamily::trivial);

/// Smallest p with p * p > n, so every exponent in [0, n] splits as a1 p + a2.
std::size_t power_split(std::size_t n);

/// c_1..c_n with det(xI - A) = x^n + c_1 x^{n-1} + ... + c_n; every node
/// ends holding the vector. Requires char(F) > n.
std::vector<Word> char_poly(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family = KernelFamily::trivial);

FieldElement det(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family = KernelFamily::trivial);

/// Throws singular_matrix_error when c_n = 0.
DistributedMatrix inverse(CliqueWorld& w, const DistributedMatrix& a, const std::string& out,
                          KernelFamily family = KernelFamily::trivial);

}  // namespace ccq
