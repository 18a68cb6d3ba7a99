#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ccq/bilinear.hpp"
#include "ccq/dmatrix.hpp"

namespace ccq {

struct Edge {
  std::size_t u = 0, v = 0;
  std::int64_t w = 1;
};

/// Simple graph with integer weights in [-M, M] ([0, M] when undirected).
struct WeightedGraph {
  std::size_t n = 0;
  bool directed = false;
  std::int64_t M = 1;
  std::vector<Edge> edges;

  /// Throws std::invalid_argument on loops, repeated edges or weights out of range.
  void validate() const;
  /// Min-plus adjacency: weight, 0 on the diagonal, infinity elsewhere.
  [[nodiscard]] Matrix<Word> adjacency() const;
  [[nodiscard]] std::vector<std::vector<std::size_t>> neighbors() const;
};

/// Distances by ceil(log2 n) distance-product squarings. Rows and columns of
/// the result hold mp_encode'd values.
DistributedMatrix apsp_minplus_squaring(CliqueWorld& w, const WeightedGraph& g, const std::string& out,
                                        KernelFamily family = KernelFamily::trivial);

/// Sampling iterations with s = (3/2)^k: |S| = min(n, ceil(c n ln n / s)),
/// entries beyond s M clipped to infinity. Correct with high probability.
DistributedMatrix apsp_zwick(CliqueWorld& w, const WeightedGraph& g, const std::string& out, double c = 3.0,
                             KernelFamily family = KernelFamily::trivial);

/// Largest distance, or kInf when some pair is unreachable.
std::int64_t diameter(CliqueWorld& w, const WeightedGraph& g, KernelFamily family = KernelFamily::trivial);

/// Field size for the Tutte-matrix algorithms: max(4 n^4, n + 1).
Word tutte_field_bound(std::size_t n);
/// Least prime at or above tutte_field_bound(n).
Word tutte_prime(std::size_t n);

/// Random skew-symmetric matrix supported on the edges: node i draws x_ij
/// for its neighbours j < i and sends them on. Rows and columns are held.
DistributedMatrix tutte_matrix(CliqueWorld& w, const WeightedGraph& g, const std::string& key);

/// Maximum matching size from rank(Tutte) / 2; odd ranks are retried.
std::size_t matching_size(CliqueWorld& w, const WeightedGraph& g, KernelFamily family = KernelFamily::trivial);

/// Edges in some perfect matching: nonzero entries of the inverse Tutte
/// matrix. Throws no_perfect_matching_error when none exists.
std::vector<std::pair<std::size_t, std::size_t>> allowed_edges(CliqueWorld& w, const WeightedGraph& g,
                                                               KernelFamily family = KernelFamily::trivial);

/// d: vertices missed by some maximum matching; k: neighbours of d outside
/// it; c: the rest. Sorted vertex lists.
struct GEDecomposition {
  std::vector<std::size_t> d, k, c;
};
GEDecomposition gallai_edmonds(CliqueWorld& w, const WeightedGraph& g, KernelFamily family = KernelFamily::trivial);

}  // namespace ccq
