#include "ccq/planner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ccq/errors.hpp"

namespace ccq {

SampledFunction::SampledFunction(std::vector<std::pair<double, double>> pts) : pts_(std::move(pts)) {
  std::sort(pts_.begin(), pts_.end());
  for (std::size_t i = 1; i < pts_.size(); ++i)
    if (pts_[i].first == pts_[i - 1].first) throw std::invalid_argument("sampled function: duplicate abscissa");
}

double SampledFunction::operator()(double x) const {
  if (pts_.empty()) throw std::logic_error("sampled function has no points");
  if (x <= pts_.front().first) return pts_.front().second;
  if (x >= pts_.back().first) return pts_.back().second;
  auto hi = std::upper_bound(pts_.begin(), pts_.end(), x, [](double v, const auto& p) { return v < p.first; });
  auto lo = hi - 1;
  const double t = (x - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

SampledFunction parse_sampled(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<double, double>> pts;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    double x = 0, y = 0;
    if (!(ls >> x)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    std::string rest;
    if (!(ls >> y) || (ls >> rest)) throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected two numbers");
    pts.emplace_back(x, y);
  }
  if (pts.empty()) throw std::runtime_error(origin + ": no data points");
  return SampledFunction(std::move(pts));
}

SampledFunction load_sampled(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sampled(ss.str(), path);
}

OmegaCurve OmegaCurve::trivial() {
  return {[](double g) { return 2.0 + g; }, "trivial"};
}

OmegaCurve OmegaCurve::constant(double w) {
  return {[w](double g) { return g <= 1.0 ? std::max(2.0, w) : std::max(2.0, w) + g - 1.0; },
          "constant(" + std::to_string(w) + ")"};
}

OmegaCurve OmegaCurve::from_square(double w) {
  return {[w](double g) { return g <= 1.0 ? 2.0 + g * (w - 2.0) : w + g - 1.0; }, "square(" + std::to_string(w) + ")"};
}

OmegaCurve OmegaCurve::sampled(SampledFunction f) {
  const auto& p = f.points();
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i].second < p[i - 1].second) throw std::invalid_argument("omega curve must be nondecreasing");
  const double gl = p.back().first, wl = p.back().second;
  return {[f = std::move(f), gl, wl](double g) { return g <= gl ? f(g) : wl + (g - gl); }, "sampled"};
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::small_m: return "small-m";
    case Regime::medium_m: return "medium-m";
    case Regime::large_m: return "large-m";
  }
  return "?";
}

double maincond_f(double a, double b, double gamma, const OmegaCurve& curve) {
  const double w = curve(gamma);
  return a * (1 + gamma) / w + b + 1 - (1 + gamma) / w;
}

double maincond_g(double a, double gamma, const OmegaCurve& curve) {
  const double w = curve(gamma);
  return 2 * a / w + 2 - 2 / w;
}

double solve_maincond(double a, double b, const OmegaCurve& curve) {
  if (a < 0 || a > 1 || b < (1 + a) / 2 - 1e-12 || b >= 2 - a)
    throw regime_error("(a, b) = (" + std::to_string(a) + ", " + std::to_string(b) +
                       ") is outside the medium regime; use the closed-form cases");
  auto h = [&](double g) { return maincond_f(a, b, g, curve) - maincond_g(a, g, curve); };
  double lo = 0, hi = 40;
  if (h(lo) <= 0) return 0;
  // Close to b = 2 - a the crossing moves past the initial bracket.
  while (h(hi) > 0) {
    lo = hi;
    hi *= 2;
    if (hi > 1e12) throw regime_error("no crossing found for the medium regime");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

CostEstimate theorem1_exponent(double a, double b, const OmegaCurve& curve) {
  if (a < 0 || b < 0) throw std::invalid_argument("theorem1_exponent: a, b >= 0");
  if (a > 1) {
    // ceil(k/n) rounds of MM(n, m, n).
    CostEstimate inner = theorem1_exponent(1, b, curve);
    inner.exponent += a - 1;
    return inner;
  }
  if (b <= (1 + a) / 2) return {a, Regime::small_m, 0};
  if (b >= 2 - a) return {a + b - 1, Regime::large_m, 0};
  const double gamma = solve_maincond(a, b, curve);
  const double w = curve(gamma);
  return {2 * a / w + 1 - 2 / w, Regime::medium_m, gamma};
}

CostEstimate dis_exponent(double n, double m, double M, const OmegaCurve& curve) {
  if (n < 2 || m < 2 || M < 1) throw std::invalid_argument("dis_exponent: n, m >= 2 and M >= 1");
  const double ln = std::log(n);
  return theorem1_exponent(std::max(0.0, std::log(M * std::log2(m)) / ln), std::log(m) / ln, curve);
}

double dis_semiring_exponent(double n, double m) {
  if (n < 2 || m < 1) throw std::invalid_argument("dis_semiring_exponent: n >= 2, m >= 1");
  const double b = std::log(m) / std::log(n);
  return b <= 0.5 ? 0.0 : (2 * b - 1) / 3;
}

double zwick_left(double sigma) { return std::max(0.0, 2.0 * (1.0 - sigma) / 3.0 - 1.0 / 3.0); }

double zwick_right(double sigma, const OmegaCurve& curve) {
  return std::max(sigma, theorem1_exponent(sigma, 1.0 - sigma, curve).exponent);
}

ZwickOptimum zwick_exponent(const std::function<double(double)>& left, const std::function<double(double)>& right) {
  auto obj = [&](double s) { return std::min(left(s), right(s)); };
  constexpr int grid = 20000;
  int best = 0;
  double best_v = obj(0);
  for (int i = 1; i <= grid; ++i) {
    const double v = obj(static_cast<double>(i) / grid);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  // Golden-section refinement around the best grid point.
  double lo = std::max(0.0, (best - 1.0) / grid), hi = std::min(1.0, (best + 1.0) / grid);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 100; ++it) {
    const double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    (obj(x1) < obj(x2) ? lo : hi) = (obj(x1) < obj(x2) ? x1 : x2);
  }
  double sigma = 0.5 * (lo + hi);
  double v = obj(sigma);
  if (best_v > v) {
    sigma = static_cast<double>(best) / grid;
    v = best_v;
  }
  return {sigma, v};
}

ZwickOptimum zwick_exponent(const OmegaCurve& curve) {
  return zwick_exponent(zwick_left, [&](double s) { return zwick_right(s, curve); });
}

}  // namespace ccq
