// lpacrl command-line front end. Talks to the shared library exclusively
// through the C API in lpacrl.h; exit codes are the library status codes
// (0 ok, 2 config error, 3 NaN divergence, 4 I/O error).

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpacrl.h"

namespace {

struct ConfigDeleter {
  void operator()(lpacrl_config* c) const { lpacrl_config_free(c); }
};
using ConfigPtr = std::unique_ptr<lpacrl_config, ConfigDeleter>;

int fail(int status) {
  std::fprintf(stderr, "lpacrl: %s: %s\n", lpacrl_status_name(status), lpacrl_last_error());
  return status;
}

struct Overrides {
  std::string seeds;
  std::string out;
  int workers = -1;
  int iterations = -1;

  int apply(lpacrl_config* cfg) const {
    int rc = LPACRL_OK;
    if (!seeds.empty()) rc = lpacrl_config_set(cfg, "run.seeds", seeds.c_str());
    if (rc == LPACRL_OK && !out.empty()) rc = lpacrl_config_set(cfg, "run.output_dir", out.c_str());
    if (rc == LPACRL_OK && workers >= 0)
      rc = lpacrl_config_set(cfg, "run.workers", std::to_string(workers).c_str());
    if (rc == LPACRL_OK && iterations >= 0)
      rc = lpacrl_config_set(cfg, "run.iterations", std::to_string(iterations).c_str());
    return rc;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--seeds", seeds, "override run.seeds (comma-separated)");
    cmd->add_option("--out", out, "override run.output_dir");
    cmd->add_option("--workers", workers, "override run.workers");
    cmd->add_option("--iterations", iterations, "override run.iterations");
  }
};

ConfigPtr load(const std::string& path, const Overrides& ov, int& rc) {
  lpacrl_config* raw = nullptr;
  rc = lpacrl_config_load(path.c_str(), &raw);
  ConfigPtr cfg(raw);
  if (rc == LPACRL_OK) rc = ov.apply(cfg.get());
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP-ACRL curriculum laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lpacrl_version()));
  app.footer(
      "Config files are flat 'key = value' text; unknown keys are errors.\n"
      "Defaults for every key are listed by: lpacrl run --keys");

  std::string run_config_path;
  Overrides run_ov;
  bool list_keys = false;
  CLI::App* run_cmd = app.add_subcommand("run", "train with a config file");
  run_cmd->add_option("config", run_config_path, "config file");
  run_cmd->add_flag("--keys", list_keys, "list every config key with default and meaning");
  run_ov.attach(run_cmd);

  std::vector<std::string> cmp_config_paths;
  std::string cmp_out = "compare_out";
  Overrides cmp_ov;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "run several configs on one budget");
  cmp_cmd->add_option("configs", cmp_config_paths, "config files")->required()->expected(-1);
  cmp_ov.attach(cmp_cmd);

  std::string eval_ckpt, eval_config_path;
  Overrides eval_ov;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a config's preset");
  eval_cmd->add_option("checkpoint", eval_ckpt, "policy checkpoint")->required();
  eval_cmd->add_option("config", eval_config_path, "config file")->required();
  eval_ov.attach(eval_cmd);

  std::string plot_dir;
  CLI::App* plot_cmd = app.add_subcommand("plot", "emit figure data from a run directory");
  plot_cmd->add_option("logdir", plot_dir, "run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : LPACRL_ERR_CONFIG;
  }

  if (run_cmd->parsed()) {
    if (list_keys) {
      char* docs = nullptr;
      if (lpacrl_config_docs(&docs) != LPACRL_OK) return fail(LPACRL_ERR_INTERNAL);
      std::printf("%s", docs);
      lpacrl_string_free(docs);
      return 0;
    }
    if (run_config_path.empty()) {
      std::fprintf(stderr, "lpacrl: run needs a config file\n");
      return LPACRL_ERR_CONFIG;
    }
    int rc = LPACRL_OK;
    ConfigPtr cfg = load(run_config_path, run_ov, rc);
    if (rc != LPACRL_OK) return fail(rc);
    rc = lpacrl_run(cfg.get());
    if (rc != LPACRL_OK) return fail(rc);
    char* out = nullptr;
    if (lpacrl_config_get(cfg.get(), "run.output_dir", &out) == LPACRL_OK) {
      std::printf("run complete: logs under %s\n", out);
      lpacrl_string_free(out);
    }
    return 0;
  }

  if (cmp_cmd->parsed()) {
    // --out names the comparison directory itself.
    if (!cmp_ov.out.empty()) {
      cmp_out = cmp_ov.out;
      cmp_ov.out.clear();
    }
    int rc = LPACRL_OK;
    std::vector<ConfigPtr> owned;
    std::vector<const lpacrl_config*> raw;
    for (const std::string& path : cmp_config_paths) {
      ConfigPtr cfg = load(path, cmp_ov, rc);
      if (rc != LPACRL_OK) return fail(rc);
      raw.push_back(cfg.get());
      owned.push_back(std::move(cfg));
    }
    rc = lpacrl_compare(raw.data(), raw.size(), cmp_out.c_str());
    if (rc != LPACRL_OK) return fail(rc);
    std::printf("comparison complete: tables under %s\n", cmp_out.c_str());
    return 0;
  }

  if (eval_cmd->parsed()) {
    int rc = LPACRL_OK;
    ConfigPtr cfg = load(eval_config_path, eval_ov, rc);
    if (rc != LPACRL_OK) return fail(rc);
    rc = lpacrl_eval_checkpoint(eval_ckpt.c_str(), cfg.get());
    if (rc != LPACRL_OK) return fail(rc);
    std::printf("evaluation complete\n");
    return 0;
  }

  if (plot_cmd->parsed()) {
    const int rc = lpacrl_plot(plot_dir.c_str());
    if (rc != LPACRL_OK) return fail(rc);
    std::printf("plot data written under %s/plot\n", plot_dir.c_str());
    return 0;
  }

  return LPACRL_ERR_CONFIG;
}
