#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccq/matrix.hpp"

namespace ccq {

/// Rank-t bilinear algorithm for a (d x e) by (e x d) product:
///   S_mu = sum alpha[mu](i,j) A[i,j],  T_mu = sum beta[mu](i,j) B[j,i],
///   C[i,i'] = sum lambda[mu](i,i') S_mu T_mu.
/// Coefficients are small integers so one description serves every field.
struct BilinearAlgorithm {
  std::size_t d = 1, e = 1, t = 1;
  std::vector<std::int64_t> alpha;   // t*d*e
  std::vector<std::int64_t> beta;    // t*d*e
  std::vector<std::int64_t> lambda;  // t*d*d
  std::string name;

  [[nodiscard]] std::int64_t a(std::size_t mu, std::size_t i, std::size_t j) const { return alpha[(mu * d + i) * e + j]; }
  [[nodiscard]] std::int64_t b(std::size_t mu, std::size_t i, std::size_t j) const { return beta[(mu * d + i) * e + j]; }
  [[nodiscard]] std::int64_t l(std::size_t mu, std::size_t i, std::size_t j) const { return lambda[(mu * d + i) * d + j]; }

  friend bool operator==(const BilinearAlgorithm& x, const BilinearAlgorithm& y) {
    return x.d == y.d && x.e == y.e && x.t == y.t && x.alpha == y.alpha && x.beta == y.beta && x.lambda == y.lambda;
  }
};

enum class KernelFamily { trivial, strassen };

KernelFamily parse_kernel_family(const std::string& s);
std::string to_string(KernelFamily f);

BilinearAlgorithm trivial_algorithm(std::size_t d, std::size_t e);
BilinearAlgorithm strassen();
/// k-fold tensor power; index i = i1 * d2 + i2 at each level.
BilinearAlgorithm tensor_power(const BilinearAlgorithm& alg, unsigned k);
BilinearAlgorithm tensor_product(const BilinearAlgorithm& x, const BilinearAlgorithm& y);

/// Largest d with rank(family at (d, ceil(d^gamma))) <= t_max. Strassen
/// powers exist only for gamma = 1.
std::size_t max_d_for_budget(KernelFamily family, std::size_t t_max, double gamma);

/// Evaluate the algorithm on concrete blocks over a field.
FieldMatrix apply(const BilinearAlgorithm& alg, const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b);

}  // namespace ccq
