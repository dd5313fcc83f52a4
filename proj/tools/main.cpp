#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "czlab/error.hpp"
#include "czlab/parallel.hpp"
#include "runner.hpp"

using czlab::Error;
using czlab::ErrorKind;

int main(int argc, char** argv) {
  CLI::App app{"Dyadic weighted-norm experiments"};
  app.set_version_flag("--version", czlab::cli::kVersion);
  std::string verb;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("verb", verb, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(czlab::cli::kVerbs));
  app.add_option("--config", config_path, "JSON experiment config")->required();
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides output.path)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed (overrides the config's seed)");
  app.add_option("--threads", threads, "OpenMP threads (default: CZLAB_THREADS, then the runtime default)")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threads == 0) {
      if (const char* env = std::getenv("CZLAB_THREADS")) {
        threads = std::atoi(env);
        if (threads <= 0) throw Error(ErrorKind::kConfig, "CZLAB_THREADS: expected a positive integer");
      }
    }
    if (threads > 0) czlab::set_thread_count(threads);

    auto config = czlab::cli::load_config(config_path);
    if (config.verb != verb) {
      throw Error(ErrorKind::kConfig, "verb: config says '" + config.verb + "' but the command line says '" + verb + "'");
    }
    if (*seed_opt) config.seed = seed;
    if (*out_opt) config.output_path = out_dir;
    const auto result = czlab::cli::run(config, config.output_path);
    for (const auto& f : result.files) std::cout << config.output_path << "/" << f << "\n";
    if (!result.passed) {
      std::cerr << "czlab: invariant check failed\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "czlab: " << e.what() << "\n";
    if (e.kind() == ErrorKind::kConfig) return 2;
    if (e.kind() == ErrorKind::kNonConvergence) return 3;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "czlab: " << e.what() << "\n";
    return 1;
  }
}
