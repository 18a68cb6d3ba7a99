#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ccq {

/// Piecewise-linear function through sorted sample points, clamped at the ends.
class SampledFunction {
 public:
  SampledFunction() = default;
  /// Points are sorted by x; duplicates in x are rejected.
  explicit SampledFunction(std::vector<std::pair<double, double>> pts);
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] const std::vector<std::pair<double, double>>& points() const noexcept { return pts_; }
  [[nodiscard]] bool empty() const noexcept { return pts_.empty(); }

 private:
  std::vector<std::pair<double, double>> pts_;
};

/// Parses "x y" lines; '#' starts a comment. Throws std::runtime_error with
/// the offending line number on malformed input.
SampledFunction load_sampled(const std::string& path);
SampledFunction parse_sampled(const std::string& text, const std::string& origin = "<string>");

/// gamma -> omega(gamma), the exponent of n x n^gamma by n^gamma x n products.
class OmegaCurve {
 public:
  /// omega(gamma) = 2 + gamma.
  static OmegaCurve trivial();
  /// omega(gamma) = max(2, w) for gamma <= 1 and w + gamma - 1 beyond.
  static OmegaCurve constant(double w);
  /// Square algorithm of exponent w applied blockwise:
  /// 2 + gamma (w - 2) for gamma <= 1, w + gamma - 1 beyond.
  static OmegaCurve from_square(double w);
  /// Sampled values, linearly interpolated; beyond the last sample the curve
  /// continues with slope 1. Must be nondecreasing.
  static OmegaCurve sampled(SampledFunction f);

  [[nodiscard]] double operator()(double gamma) const { return fn_(gamma); }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

 private:
  OmegaCurve(std::function<double(double)> fn, std::string name) : fn_(std::move(fn)), name_(std::move(name)) {}
  std::function<double(double)> fn_;
  std::string name_;
};

enum class Regime { small_m, medium_m, large_m };
std::string to_string(Regime r);

struct CostEstimate {
  double exponent = 0;
  Regime regime = Regime::small_m;
  double gamma = 0;  // meaningful in the medium regime
};

/// Root of (1 - a) gamma = 1 - a + (b - 1) omega(gamma), by bisection.
/// Requires 0 <= a <= 1 and (1 + a)/2 <= b < 2 - a; throws regime_error
/// otherwise.
double solve_maincond(double a, double b, const OmegaCurve& curve);

/// f and g from the medium-m analysis; the root above equalizes them.
double maincond_f(double a, double b, double gamma, const OmegaCurve& curve);
double maincond_g(double a, double gamma, const OmegaCurve& curve);

/// Round exponent of MM(n, n^b, n^a): a yields O(n^exponent).
CostEstimate theorem1_exponent(double a, double b, const OmegaCurve& curve);

/// Distance product of n x m by m x n matrices with entries in [-M, M]:
/// the reduction to k = M log2 m products over a small field, i.e.
/// theorem1_exponent at a = log(M log2 m) / log n. Needs n >= 2, m >= 2, M >= 1.
CostEstimate dis_exponent(double n, double m, double M, const OmegaCurve& curve);
/// Semiring strategy: 0 for m <= sqrt(n), else (2 log m - log n) / (3 log n);
/// the log M factor is not part of the exponent.
double dis_semiring_exponent(double n, double m);

struct ZwickOptimum {
  double sigma = 0;
  double exponent = 0;
};

/// max over sigma in [0, 1] of min(left(sigma), right(sigma)).
ZwickOptimum zwick_exponent(const std::function<double(double)>& left, const std::function<double(double)>& right);
/// Left = semiring branch, right = max(sigma, medium MM exponent at a = sigma, b = 1 - sigma).
ZwickOptimum zwick_exponent(const OmegaCurve& curve);
double zwick_left(double sigma);
double zwick_right(double sigma, const OmegaCurve& curve);

}  // namespace ccq
