#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccq/cliquesim.hpp"
#include "json.hpp"

namespace ccq::app {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Bad flags, unknown algorithms, malformed input, exceeded oracle limits.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

const std::vector<std::string>& algorithms();
bool is_monte_carlo(const std::string& algorithm);
bool is_graph_algorithm(const std::string& algorithm);

/// One execution. Inputs come from files, inline text, or the generator
/// (n, m, k, bound, density, seed). m = 0 means m = n.
struct RunRequest {
  std::string algorithm;
  std::string input, input2;
  std::string input_text, input2_text;
  std::size_t n = 8, m = 0, k = 1;
  std::int64_t bound = 4;
  double density = 0.5;
  std::uint64_t seed = 1;
  Word field_prime = 0;  // 0: per-algorithm default
  std::string kernel = "trivial";
  double zwick_c = 3.0;
  bool verify = true;
  bool parallel = false;  // node-local threads; never changes the report

  [[nodiscard]] Json to_json() const;
  static RunRequest from_json(const Json& j);
};

enum class Verdict { pass, fail, skipped };
std::string to_string(Verdict v);

struct RunResult {
  Json report;
  std::string output;  // the computed object in its text format
  Verdict verdict = Verdict::skipped;
  CostLedger ledger;
  std::vector<std::string> warnings;

  /// Pretty-printed report with a trailing newline; the byte-stable form.
  [[nodiscard]] std::string report_text() const { return report.dump(2) + "\n"; }
};

RunResult run(const RunRequest& req);

struct VerifyOptions {
  std::string algorithm;
  std::size_t trials = 100;
  std::size_t n = 8;
  std::uint64_t seed = 1;
  std::string kernel = "trivial";
  Word field_prime = 0;
  double density = 0.5;
  std::int64_t bound = 4;
  /// Graph algorithms: every connected graph with up to this many vertices
  /// instead of random trials, `seeds` runs each, majority vote per graph.
  std::size_t exhaustive = 0;
  std::size_t seeds = 9;
};

struct VerifySummary {
  std::string algorithm;
  std::size_t runs = 0, passed = 0;
  double required = 1.0;
  std::vector<Verdict> verdicts;  // per run
  std::size_t graphs = 0, graphs_passed = 0;  // exhaustive mode only

  [[nodiscard]] double rate() const { return runs == 0 ? 0.0 : static_cast<double>(passed) / static_cast<double>(runs); }
  [[nodiscard]] bool ok() const;
  [[nodiscard]] Json to_json() const;
};

VerifySummary verify(const VerifyOptions& opt);

struct BenchOptions {
  std::string algorithm;
  std::vector<std::size_t> sizes;  // n sweep, or the fixed n when ks is set
  std::vector<std::size_t> ks;     // k sweep (mm only)
  std::string kernel = "trivial";
  std::uint64_t seed = 1;
  bool per_log = false;  // fit rounds / log2 n
};

struct BenchPoint {
  std::size_t n = 0, k = 1, m = 0;
  CostLedger ledger;
};

struct BenchResult {
  std::vector<BenchPoint> points;
  double slope = 0;
  std::string csv;
};

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Refuses fewer than four points, or sizes that are not ascending.
BenchResult bench(const BenchOptions& opt);

struct PlanOptions {
  std::string query;  // theorem1 | dis | zwick | mm
  double a = 0, b = 1;
  std::optional<double> omega;
  std::string curve = "trivial";  // trivial | strassen | path to "gamma omega" samples
  std::string left, right;        // zwick: sampled "sigma value" files for both parts
  std::size_t n = 0, m = 0, k = 1;
  std::int64_t M = 1;
  std::string kernel = "trivial";
};

Json plan(const PlanOptions& opt);

/// FNV-1a, 64 bit, as 16 hex digits.
std::string digest(std::string_view text);

}  // namespace ccq::app
