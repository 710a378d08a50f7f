// Command-line front door.  Every subcommand reads one JSON configuration,
// runs the matching pipeline, and prints the artifact paths it wrote, one
// per line.  Exit codes: 0 on success, 2 when the configuration or command
// line is invalid, 3 when a numerically valid setup fails to converge.
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jlab/errors.hpp"
#include "jlab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"junction laboratory: mixed-boundary solves, frequency analysis, "
               "junction-order extraction, and the logarithmic boundary study"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int refine = 0;
  CLI::Option* config_opt =
      app.add_option("-c,--config", config_path, "path to the JSON run configuration");
  CLI::Option* out_opt =
      app.add_option("-o,--out", out_dir, "output directory (overrides output.dir)");
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "sampling seed (overrides analysis.seed)");
  CLI::Option* refine_opt =
      app.add_option("--refine", refine, "grid-doubling levels (overrides geometry.refine)")
          ->check(CLI::Range(0, 8));

  app.add_subcommand("solve", "solve the mixed boundary problem and store the field");
  app.add_subcommand("frequency", "tabulate H, D, N and the derivative split");
  app.add_subcommand("extract", "extract the junction order and leading coefficient");
  app.add_subcommand("hardy", "check both Hardy inequalities on random mode mixtures");
  app.add_subcommand("pohozaev", "tabulate Pohozaev residuals in radius and resolution");
  app.add_subcommand("counterexample", "run the logarithmic boundary-curve study");
  app.add_subcommand("sweep", "run every configured case concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    jlab::RunConfig config = config_opt->count() > 0
                                 ? jlab::RunConfig::from_json_file(config_path)
                                 : jlab::RunConfig::from_json_text("{}");
    if (out_opt->count() > 0) config.out_dir = out_dir;
    if (seed_opt->count() > 0) config.seed = seed;
    if (refine_opt->count() > 0) config.refine = refine;

    const std::string operation = app.get_subcommands().front()->get_name();
    const std::vector<std::filesystem::path> artifacts =
        jlab::run_operation(operation, config);
    for (const std::filesystem::path& path : artifacts)
      std::printf("%s\n", path.string().c_str());
    return 0;
  } catch (const jlab::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const jlab::NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
