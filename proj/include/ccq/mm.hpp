#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ccq/bilinear.hpp"
#include "ccq/cliquesim.hpp"
#include "ccq/dmatrix.hpp"
#include "ccq/kernels.hpp"

namespace ccq {

struct MmOptions {
  KernelFamily family = KernelFamily::trivial;
  /// Message units charged per routed element (wide min-plus payloads).
  std::uint64_t units = 1;
};

/// Block decomposition for the four-step algorithm. Rows and columns of the
/// n x n output split into d blocks of xd; the inner dimension into e blocks
/// of zd. Each block is cut by a qu x qv grid: S slices are xu x rs, T slices
/// rt x xv, P slices xu x xv. Grid label (s,u,v) is node s*qu*qv + u*qv + v,
/// product label (s,mu) is node s*t + mu. Positions past n or m are padding:
/// implicit zeros that are never transmitted.
struct MediumPlan {
  std::size_t n = 0, m = 0, k = 0;
  BilinearAlgorithm alg;
  std::size_t qu = 1, qv = 1;
  std::size_t xd = 0, zd = 0, xu = 0, xv = 0, rs = 0, rt = 0;
  double gamma_target = 0;
  std::array<std::uint64_t, 4> predicted{};

  [[nodiscard]] std::uint64_t predicted_rounds() const { return predicted[0] + predicted[1] + predicted[2] + predicted[3]; }
  [[nodiscard]] std::string describe() const;
};

/// Node (s,t) owns inner columns [t*w, (t+1)*w) of product s; node s*T + t.
struct LargePlan {
  std::size_t n = 0, m = 0, k = 0, T = 1, w = 1;
  std::array<std::uint64_t, 2> predicted{};
  [[nodiscard]] std::uint64_t predicted_rounds() const { return predicted[0] + predicted[1]; }
};

enum class MmBranch { small_m, medium_m, large_m };
std::string to_string(MmBranch b);

/// Case split for k <= n.
MmBranch select_branch(std::size_t n, std::size_t m, std::size_t k);

/// Validates the label maps (k*qu*qv <= n, k*t <= n) and predicts per-step
/// rounds from upper bounds on per-node loads.
MediumPlan make_medium_plan(std::size_t n, std::size_t m, std::size_t k, const BilinearAlgorithm& alg,
                            std::size_t qu, std::size_t qv, std::uint64_t units = 1);
/// Cheapest predicted plan over the family's kernels within the rank budget
/// n/k and over all grids; gamma_zero restricts to e = 1.
MediumPlan plan_medium(std::size_t n, std::size_t m, std::size_t k, KernelFamily family, std::uint64_t units = 1,
                       bool gamma_zero = false);
LargePlan plan_large(std::size_t n, std::size_t m, std::size_t k, std::uint64_t units = 1);

/// Predicted rounds of mm_multi for the given shape, including batching.
std::uint64_t predict_mm_rounds(std::size_t n, std::size_t m, std::size_t k, KernelFamily family,
                                std::uint64_t units = 1);

/// k products A_s (n x m) times B_s (m x n) on the active range, n = range
/// size. A_s must be held as rows (or columns when m <= n); B_s as columns
/// (or rows when m <= n). Outputs are `out/<s>`, held as rows and columns.
template <class Ring>
std::vector<DistributedMatrix> mm_multi(CliqueWorld& w, const Ring& ring, std::span<const DistributedMatrix> a,
                                        std::span<const DistributedMatrix> b, const std::string& out,
                                        const MmOptions& opt = {});

template <class Ring>
std::vector<DistributedMatrix> mm_medium(CliqueWorld& w, const Ring& ring, std::span<const DistributedMatrix> a,
                                         std::span<const DistributedMatrix> b, const std::string& out,
                                         const MediumPlan& plan, std::uint64_t units = 1);

template <class Ring>
std::vector<DistributedMatrix> mm_large(CliqueWorld& w, const Ring& ring, std::span<const DistributedMatrix> a,
                                        std::span<const DistributedMatrix> b, const std::string& out,
                                        const LargePlan& plan, std::uint64_t units = 1);

/// Field convenience wrappers.
std::vector<DistributedMatrix> mm_multi(CliqueWorld& w, std::span<const DistributedMatrix> a,
                                        std::span<const DistributedMatrix> b, const std::string& out,
                                        const MmOptions& opt = {});
DistributedMatrix mm(CliqueWorld& w, const DistributedMatrix& a, const DistributedMatrix& b, const std::string& out,
                     const MmOptions& opt = {});

}  // namespace ccq
