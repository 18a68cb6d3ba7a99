#include <iostream>

#include "CLI11.hpp"
#include "app.hpp"
#include "ccq/io.hpp"

namespace {

using namespace ccq::app;

void add_common(CLI::App* c, std::uint64_t& seed, std::string& kernel, ccq::Word& prime) {
  c->add_option("--seed", seed, "Random seed")->capture_default_str();
  c->add_option("--kernel", kernel, "Bilinear kernel family")
      ->check(CLI::IsMember({"trivial", "strassen"}))
      ->capture_default_str();
  c->add_option("--field-prime", prime, "Field size (default depends on the algorithm)");
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    ccq::write_file(path, text);
}

int cmd_run(RunRequest req, const std::string& out, const std::string& emit, const std::string& replay) {
  std::string previous;
  if (!replay.empty()) {
    try {
      previous = ccq::read_file(replay);
      req = RunRequest::from_json(Json::parse(previous).at("request"));
    } catch (const nlohmann::json::exception& e) {
      throw usage_error(replay + ": not a report: " + e.what());
    } catch (const std::runtime_error& e) {
      throw usage_error(e.what());
    }
  } else if (req.algorithm.empty()) {
    throw usage_error("run needs an algorithm or --replay");
  }
  const RunResult r = run(req);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  write_or_print(out, r.report_text());
  if (!emit.empty()) ccq::write_file(emit, r.output);
  if (!replay.empty()) {
    const bool same = previous == r.report_text();
    std::cerr << "replay: " << (same ? "identical" : "report differs") << "\n";
    if (!same) return kExitFail;
  }
  return r.verdict == Verdict::fail ? kExitFail : kExitPass;
}

int cmd_verify(const VerifyOptions& opt, bool quiet, const std::string& out) {
  const VerifySummary s = verify(opt);
  if (!quiet && opt.exhaustive == 0)
    for (std::size_t i = 0; i < s.verdicts.size(); ++i)
      std::cout << "trial " << i << " seed " << opt.seed + i << ": " << to_string(s.verdicts[i]) << "\n";
  std::cout << "verify " << s.algorithm << ": " << s.passed << "/" << s.runs << " runs";
  if (s.graphs > 0) std::cout << ", " << s.graphs_passed << "/" << s.graphs << " graphs by majority";
  std::cout << ", required " << s.required * 100 << "%: " << (s.ok() ? "PASS" : "FAIL") << "\n";
  if (!out.empty()) ccq::write_file(out, s.to_json().dump(2) + "\n");
  return s.ok() ? kExitPass : kExitFail;
}

int cmd_bench(const BenchOptions& opt, const std::string& out) {
  const BenchResult r = bench(opt);
  write_or_print(out, r.csv);
  (out.empty() ? std::cerr : std::cout) << "slope " << r.slope << (opt.per_log ? " (rounds / log2 n)" : "") << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Congested clique algebra simulator"};
  app.set_version_flag("--version", std::string(CCQ_VERSION));
  app.require_subcommand(1);

  RunRequest req;
  std::string run_out, emit, replay;
  auto* run_cmd = app.add_subcommand("run", "Run one algorithm on a file or a generated instance");
  run_cmd->add_option("algorithm", req.algorithm, "Algorithm name");
  run_cmd->add_option("--input", req.input, "Input file (matrix or graph)");
  run_cmd->add_option("--input2", req.input2, "Second input file (mm, distprod, solve)");
  run_cmd->add_option("--n", req.n, "Generated size")->capture_default_str();
  run_cmd->add_option("--m", req.m, "Inner dimension (0 = n)")->capture_default_str();
  run_cmd->add_option("--k", req.k, "Number of products (mm)")->capture_default_str();
  run_cmd->add_option("--bound", req.bound, "Generated min-plus or weight bound M")->capture_default_str();
  run_cmd->add_option("--density", req.density, "Generated edge probability")->capture_default_str();
  run_cmd->add_option("--zwick-c", req.zwick_c, "Sampling constant for apsp-zwick")->capture_default_str();
  add_common(run_cmd, req.seed, req.kernel, req.field_prime);
  bool no_verify = false;
  run_cmd->add_flag("--no-verify", no_verify, "Skip the oracle check");
  run_cmd->add_flag("--parallel", req.parallel, "Node-local threads; the report is unchanged");
  run_cmd->add_option("--out", run_out, "Report path (default stdout)");
  run_cmd->add_option("--emit", emit, "Write the computed object in its text format");
  run_cmd->add_option("--replay", replay, "Re-run the request stored in a report and compare");

  VerifyOptions vopt;
  bool quiet = false;
  std::string verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "Check an algorithm against its oracle on many instances");
  verify_cmd->add_option("algorithm", vopt.algorithm, "Algorithm name")->required();
  verify_cmd->add_option("--trials", vopt.trials, "Random trials")->capture_default_str();
  verify_cmd->add_option("--n", vopt.n, "Instance size")->capture_default_str();
  verify_cmd->add_option("--density", vopt.density, "Generated edge probability")->capture_default_str();
  verify_cmd->add_option("--bound", vopt.bound, "Generated bound M")->capture_default_str();
  verify_cmd->add_option("--exhaustive", vopt.exhaustive, "All connected graphs up to this many vertices");
  verify_cmd->add_option("--seeds", vopt.seeds, "Runs per graph in exhaustive mode")->capture_default_str();
  add_common(verify_cmd, vopt.seed, vopt.kernel, vopt.field_prime);
  verify_cmd->add_flag("--quiet", quiet, "Summary only");
  verify_cmd->add_option("--out", verify_out, "Summary JSON path");

  BenchOptions bopt;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Ledger sweep with a log-log slope fit");
  bench_cmd->add_option("algorithm", bopt.algorithm, "Algorithm name")->required();
  bench_cmd->add_option("--sizes", bopt.sizes, "Sizes n, ascending")->delimiter(',')->required();
  bench_cmd->add_option("--ks", bopt.ks, "k sweep at a single size (mm)")->delimiter(',');
  bench_cmd->add_flag("--per-log", bopt.per_log, "Fit rounds / log2 n");
  ccq::Word unused_prime = 0;
  add_common(bench_cmd, bopt.seed, bopt.kernel, unused_prime);
  bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");

  PlanOptions popt;
  double omega = 0;
  auto* plan_cmd = app.add_subcommand("plan", "Round-complexity exponents and concrete mm plans");
  plan_cmd->add_option("query", popt.query, "theorem1 | dis | zwick | mm")
      ->check(CLI::IsMember({"theorem1", "dis", "zwick", "mm"}))
      ->required();
  plan_cmd->add_option("--a", popt.a, "log k / log n")->capture_default_str();
  plan_cmd->add_option("--b", popt.b, "log m / log n")->capture_default_str();
  auto* omega_opt = plan_cmd->add_option("--omega", omega, "Constant omega curve");
  plan_cmd->add_option("--curve", popt.curve, "trivial | strassen | FILE of 'gamma omega' lines")->capture_default_str();
  plan_cmd->add_option("--left", popt.left, "zwick: sampled left part");
  plan_cmd->add_option("--right", popt.right, "zwick: sampled right part");
  plan_cmd->add_option("--n", popt.n, "Clique size (dis, mm)");
  plan_cmd->add_option("--m", popt.m, "Inner dimension (0 = n)");
  plan_cmd->add_option("--k", popt.k, "Number of products (mm)");
  plan_cmd->add_option("--M", popt.M, "Entry bound (dis)");
  plan_cmd->add_option("--kernel", popt.kernel, "Kernel family (mm)")->check(CLI::IsMember({"trivial", "strassen"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*run_cmd) {
      req.verify = !no_verify;
      return cmd_run(req, run_out, emit, replay);
    }
    if (*verify_cmd) return cmd_verify(vopt, quiet, verify_out);
    if (*bench_cmd) return cmd_bench(bopt, bench_out);
    if (*omega_opt) popt.omega = omega;
    std::cout << plan(popt).dump(2) << "\n";
    return kExitPass;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
