// hslab: config-driven experiment runner over the hartreescatter C API.
#include <hartreescatter.h>

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  int threads = 0;
  long long seed = -1;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", args.out, "override the configured output directory");
  sub->add_option("--threads", args.threads,
                  "sweep worker pool size (default: HS_THREADS or 1)");
  sub->add_option("--seed", args.seed, "override the initial-data seed");
}

int run(const std::string& kind, const CommonArgs& args) {
  int passed = 0;
  const hs_status status =
      hs_run_config(args.config.c_str(), args.out.empty() ? nullptr : args.out.c_str(),
                    args.threads, args.seed, kind.c_str(), &passed);
  if (status != HS_OK) {
    std::fprintf(stderr, "hslab: %s: %s\n", hs_status_name(status), hs_last_error());
    return 2;
  }
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hslab: pseudospectral scattering experiments for the nonlocal "
               "Schroedinger equation"};
  app.set_version_flag("--version", hs_version());
  app.require_subcommand(1);

  const char* kinds[] = {"evolve", "scatter", "roundtrip", "morawetz", "sweep",
                         "check-potential"};
  const char* descriptions[] = {
      "evolve initial data and record conservation diagnostics",
      "extract the asymptotic state at increasing checkpoints",
      "round-trip completeness test through the wave operator",
      "monitor the dilation functional and its inequality chain",
      "run a parameter sweep of a base experiment",
      "check the integrability and repulsivity hypotheses of a potential",
  };

  CommonArgs args[6];
  for (int i = 0; i < 6; ++i) add_common(app.add_subcommand(kinds[i], descriptions[i]), args[i]);

  CLI11_PARSE(app, argc, argv);

  for (int i = 0; i < 6; ++i)
    if (app.get_subcommand(kinds[i])->parsed()) return run(kinds[i], args[i]);
  return 2;
}
