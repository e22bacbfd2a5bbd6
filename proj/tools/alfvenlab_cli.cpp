// Command-line front end. Talks to the solver only through alfvenlab.h.
//
//   alfvenlab run    [--config PATH] [--out DIR] [--seed N] [--threads N]
//   alfvenlab sweep  interaction|ball|nu|uniformity [same flags]
//   alfvenlab report [INPUT_DIR] [--out DIR]
//   alfvenlab verify [--config PATH] [--out DIR] [--seed N] [--threads N] [--only ID...]
//
// Exit status: 0 success, 1 criterion failure, 2 configuration or usage error.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alfvenlab/alfvenlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

void print_line(const char* line, void*) {
  std::puts(line);
  std::fflush(stdout);
}

int exit_code(alf_status st) {
  switch (st) {
    case ALF_OK: return kExitOk;
    case ALF_ERR_CRITERION:
    case ALF_ERR_BLOWUP:
    case ALF_ERR_INTERNAL: return kExitFailure;
    default: return kExitConfig;
  }
}

int fail(alf_status st) {
  std::fprintf(stderr, "alfvenlab: %s: %s\n", alf_status_name(st), alf_last_error());
  return exit_code(st);
}

struct Common {
  std::string config = "default";
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "configuration file, or 'default' for the built-in one")
      ->capture_default_str();
  cmd->add_option("--out", c.out, "output directory (defaults to the config's output_dir)");
  cmd->add_option("--seed", c.seed, "seed for the initial-data centre jitter");
  cmd->add_option("--threads", c.threads, "parallel sweep points")->check(CLI::PositiveNumber)->capture_default_str();
}

class ConfigHandle {
 public:
  ~ConfigHandle() { alf_config_free(cfg_); }
  alf_status load(const Common& c) {
    alf_status st = alf_config_load(c.config.c_str(), &cfg_);
    if (st == ALF_OK && c.seed) st = alf_config_set_seed(cfg_, *c.seed);
    return st;
  }
  const alf_config* get() const { return cfg_; }

 private:
  alf_config* cfg_ = nullptr;
};

const char* out_or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elsasser-system solver and experiment harness"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts, verify_opts;
  auto* run = app.add_subcommand("run", "run every (eps, nu) pair of the configuration");
  add_common(run, run_opts);

  std::string sweep_name;
  auto* sweep = app.add_subcommand("sweep", "run a named sweep and fit its scaling law");
  sweep->add_option("name", sweep_name, "interaction | ball | nu | uniformity")
      ->required()
      ->check(CLI::IsMember({"interaction", "ball", "nu", "uniformity"}));
  add_common(sweep, sweep_opts);

  std::string report_in = "out", report_out;
  auto* report = app.add_subcommand("report", "aggregate sweep records into tables and plot-ready data");
  report->add_option("input", report_in, "directory holding sweep_*.json")->capture_default_str();
  report->add_option("--out", report_out, "output directory (defaults to the input directory)");

  std::vector<int> only;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite, one line per criterion");
  add_common(verify, verify_opts);
  verify->add_option("--only", only, "criterion ids to run (default: all)")->check(CLI::Range(1, 10));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::fprintf(stderr, "%s", app.help().c_str());
    return kExitConfig;
  }

  if (*report) {
    const auto st = alf_report(report_in.c_str(), out_or_null(report_out), print_line, nullptr);
    return st == ALF_OK ? kExitOk : fail(st);
  }

  const Common& c = *run ? run_opts : *sweep ? sweep_opts : verify_opts;
  ConfigHandle cfg;
  if (auto st = cfg.load(c); st != ALF_OK) return fail(st);
  if (auto st = alf_config_validate(cfg.get()); st != ALF_OK) return fail(st);

  alf_status st = ALF_OK;
  if (*run) {
    st = alf_run(cfg.get(), c.threads, out_or_null(c.out), print_line, nullptr);
  } else if (*sweep) {
    st = alf_sweep(cfg.get(), sweep_name.c_str(), c.threads, out_or_null(c.out), print_line, nullptr);
  } else {
    int failed = 0;
    st = alf_verify(cfg.get(), c.threads, out_or_null(c.out), only.data(), only.size(), print_line, nullptr, &failed);
    std::printf("%s: %d criteria failed\n", failed ? "FAIL" : "PASS", failed);
    if (st == ALF_ERR_CRITERION) return kExitFailure;
  }
  return st == ALF_OK ? kExitOk : fail(st);
}
