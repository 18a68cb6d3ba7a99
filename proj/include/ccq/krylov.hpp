#pragma once

#include <array>
#include <string>

#include "ccq/bilinear.hpp"
#include "ccq/dmatrix.hpp"

namespace ccq {

/// Columns A^j u, j in [0, count), count <= 2n. Column j lives at node
/// j mod n under `chunk_key(j / n)`.
struct KrylovColumns {
  std::string key;
  std::size_t count = 0;
  [[nodiscard]] std::string chunk_key(std::size_t c) const { return key + "/" + std::to_string(c); }
};

/// u is the vector under `u_key` at node 0. Doubling: ceil(log2 count)
/// products with A^{2^i} and one fewer squarings.
KrylovColumns krylov_sequence(CliqueWorld& w, const DistributedMatrix& a, const std::string& u_key, std::size_t count,
                              const std::string& key, KernelFamily family = KernelFamily::trivial);

/// Field size at which the Monte Carlo bounds below hold: 4 n^2 ceil(log2 n).
Word monte_carlo_field_bound(std::size_t n);
bool monte_carlo_field_ok(Word p, std::size_t n);

/// Generator of w^T A^j v for random v, w, from 2n terms. Equals minpol(A)
/// with probability at least 1 - 2n/|F|. Held by node 0.
Polynomial minpol_monte_carlo(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family = KernelFamily::trivial);

/// det via the minimal polynomial of DA, D random in F*.
FieldElement det_rand(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family = KernelFamily::trivial);

/// x with Ax = b; b[l] and x[l] are one-word vectors at node l under b_key
/// and out_key. Every returned x is checked distributively; after three
/// failed attempts throws singular_matrix_error.
std::vector<Word> solve(CliqueWorld& w, const DistributedMatrix& a, const std::string& b_key, const std::string& out_key,
                        KernelFamily family = KernelFamily::trivial);

/// Unit upper (U) and unit lower (V) triangular Toeplitz matrices from 2(n-1)
/// random values drawn at node 0 and broadcast.
std::array<DistributedMatrix, 2> toeplitz_pair(CliqueWorld& w, const std::string& key);

/// n if det_rand is nonzero, otherwise deg minpol(UAVD) - 1.
std::size_t rank_rand(CliqueWorld& w, const DistributedMatrix& a, KernelFamily family = KernelFamily::trivial);

}  // namespace ccq
