// aaakey: scenario runner and verification front end.
//
// Exit codes: 0 success, 1 validation or configuration error, 2 a verify check failed.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aaa/kernels.hpp"
#include "aaa/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kCheckFailed = 2;

int cmd_run(const std::vector<std::string>& paths, const aaa::RunOptions& opts) {
  std::vector<aaa::Scenario> scenarios;
  for (const auto& p : paths) scenarios.push_back(aaa::load_scenario(p));

  // Scenarios are independent; each writes only its own directory.
  std::vector<std::string> errors(scenarios.size());
  auto run_one = [&](std::size_t k) {
    try {
      aaa::RunOptions o = opts;
      if (scenarios.size() > 1) o.jobs = 1;
      const auto report = aaa::run_scenario(scenarios[k], o);
      std::string line = scenarios[k].name + ": closed_form=";
      line += report.closed_form ? aaa::format_number(*report.closed_form) : "n/a";
      if (report.oracle) line += " oracle=" + aaa::format_number(*report.oracle);
      if (report.mc_estimate)
        line += " mc=" + aaa::format_number(report.mc_estimate->value) + "+-" +
                aaa::format_number(report.mc_estimate->std_error);
      line += " capacity=" + aaa::format_number(report.capacity);
      errors[k] = "";
      std::printf("%s\n", line.c_str());
    } catch (const std::exception& e) {
      errors[k] = scenarios[k].name + ": " + e.what();
    }
  };
  if (opts.jobs > 1 && scenarios.size() > 1) {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < scenarios.size(); ++k) pool.emplace_back(run_one, k);
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t k = 0; k < scenarios.size(); ++k) run_one(k);
  }
  int status = kOk;
  for (const auto& e : errors)
    if (!e.empty()) {
      std::cerr << "error: " << e << "\n";
      status = kInvalid;
    }
  return status;
}

int cmd_verify(const aaa::VerifyOptions& opts, const std::filesystem::path& out) {
  const auto summary = aaa::verify_all(opts);
  for (const auto& c : summary.checks)
    std::printf("[%s] %-30s max_dev=%-14s tol=%-8s points=%zu\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                aaa::format_number(c.max_deviation).c_str(), aaa::format_number(c.tolerance).c_str(), c.points);
  aaa::write_file_atomic(out / "verify_summary.json", summary.to_json());
  return summary.all_passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "aaakey - XOR-accumulation secret-key generation laboratory.\n"
      "Computes the equivocation of an accumulated key against an erasure eavesdropper, checks every closed\n"
      "form against exact enumeration and Monte Carlo, and compares with capacity-achieving baselines."};
  app.require_subcommand(1);

  aaa::RunOptions run_opts;
  std::vector<std::string> scenario_paths;
  std::uint64_t seed = 1;
  std::size_t trials = 0;
  unsigned jobs = 1;
  std::string out_dir = "out";

  auto* run = app.add_subcommand(
      "run",
      "Run scenario files. Per scenario writes <out>/<name>/summary.json (closed form, exact oracle, Monte Carlo\n"
      "estimate with standard error, capacity sum(mu), gap, secret-key bounds, accumulated key) and by_j.csv with\n"
      "the per-epoch trajectory; extractor.csv and markov_sweep.csv when requested.");
  run->add_option("--scenario", scenario_paths, "Scenario JSON file (repeatable)")->required()->check(CLI::ExistingFile);
  auto* run_seed = run->add_option("--seed", seed, "Override the scenario seed");
  auto* run_trials = run->add_option("--trials", trials, "Override the Monte Carlo trial count");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));

  auto* verify = app.add_subcommand(
      "verify",
      "Check closed forms against exact enumeration: per-bit equivocation 1 - prod(1 - mu), the one-step recursion,\n"
      "file-coupled L (1 - prod(1 - mu)), monotonicity / absorption / zero-iff-all-zero, capacity gap and the\n"
      "(0,1,0,...,0) estimate example, secret-key bounds and one-time-pad rate = sum(mu), two- and three-step\n"
      "Markov formulas, the mu_hat threshold, Monte Carlo agreement and the hash-extractor rank rate.\n"
      "Writes <out>/verify_summary.json; exit status 2 if any check fails.");
  verify->add_option("--seed", seed, "Seed for the randomized checks")->capture_default_str();
  verify->add_option("--out", out_dir, "Output directory")->capture_default_str();
  verify->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));

  double step = 0.01;
  double sweep_mu = 0.5;
  auto* sweep = app.add_subcommand(
      "sweep-markov",
      "Tabulate the symmetric three-step Markov model over alpha: h(alpha), mu_hat(alpha), mu_hat(1 - alpha),\n"
      "eps2, eps3 at the given mu and whether eps3 > eps2. Writes <out>/markov_sweep.csv.");
  sweep->add_option("--step", step, "Alpha step")->capture_default_str()->check(CLI::Range(1e-6, 0.5));
  sweep->add_option("--mu", sweep_mu, "Miss probability")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--out", out_dir, "Output directory")->capture_default_str();

  std::size_t n = 0;
  double ext_mu = 0.0;
  std::size_t draws = 1000;
  auto* ext = app.add_subcommand(
      "extractor-demo",
      "Multi-realization random linear hash: per draw, compress n realizations into floor(mu n) bits and record the\n"
      "rank of the hash restricted to the coordinates Eve missed. Compares the full-rank rate with the analytic\n"
      "binomial mixture of prod_{t=1}^{r} (1 - 2^{t-1-k}). Writes <out>/extractor_demo.csv and .json.");
  ext->add_option("--n", n, "Realizations per draw")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 16));
  ext->add_option("--mu", ext_mu, "Miss probability")->required()->check(CLI::Range(0.0, 1.0));
  ext->add_option("--draws", draws, "Independent draws")->capture_default_str();
  ext->add_option("--seed", seed, "Seed")->capture_default_str();
  ext->add_option("--out", out_dir, "Output directory")->capture_default_str();

  app.add_flag_callback(
      "--kernel-info",
      [] {
        std::printf("kernels: %s\n", aaa::kernels::isa_name(aaa::kernels::active_isa()));
        std::exit(0);
      },
      "Print the active bit-kernel variant and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*run) {
      run_opts.out_dir = out_dir;
      if (*run_seed) run_opts.seed = seed;
      if (*run_trials) run_opts.trials = trials;
      run_opts.jobs = jobs;
      return cmd_run(scenario_paths, run_opts);
    }
    if (*verify) return cmd_verify({seed, jobs}, out_dir);
    if (*sweep) {
      aaa::write_file_atomic(std::filesystem::path(out_dir) / "markov_sweep.csv", aaa::markov_sweep_csv(step, sweep_mu));
      return kOk;
    }
    if (*ext) {
      const auto demo = aaa::extractor_demo(n, ext_mu, draws, seed);
      const std::filesystem::path dir = out_dir;
      aaa::write_file_atomic(dir / "extractor_demo.csv", demo.csv);
      nlohmann::ordered_json j;
      j["n"] = demo.n;
      j["mu"] = demo.mu;
      j["rows"] = static_cast<std::size_t>(std::floor(demo.mu * static_cast<double>(demo.n)));
      j["draws"] = demo.draws;
      j["seed"] = seed;
      j["full_rank_draws"] = demo.full_rank;
      j["empirical_full_rank_rate"] = std::stod(aaa::format_number(demo.empirical_rate));
      j["analytic_full_rank_rate"] = std::stod(aaa::format_number(demo.analytic_rate));
      j["std_error"] = std::stod(aaa::format_number(demo.std_error));
      j["mean_secret_bits_per_realization"] = std::stod(aaa::format_number(demo.mean_secret_fraction));
      aaa::write_file_atomic(dir / "extractor_demo.json", j.dump(2) + "\n");
      std::printf("full-rank rate %s (analytic %s, stderr %s), secret bits per realization %s\n",
                  aaa::format_number(demo.empirical_rate).c_str(), aaa::format_number(demo.analytic_rate).c_str(),
                  aaa::format_number(demo.std_error).c_str(), aaa::format_number(demo.mean_secret_fraction).c_str());
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
