#include <cstdio>
#include <thread>

#include <CLI11.hpp>

#include "dd/experiment.hpp"
#include "dd/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"delay-Doppler communication simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  uint64_t seed = 1;
  int threads = 0;
  std::string format;

  app.add_option("--config", config_path, "configuration file (key/value or JSON)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_option("--format", format, "metric output format: csv|json");

  const std::vector<std::string> subs = {"ambiguity", "basis",    "channel-matrix",
                                         "ber",       "capacity", "psd",
                                         "selftest"};
  for (const auto& s : subs) app.add_subcommand(s, s + " experiment");

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    dd::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = dd::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) {
      if (format != "csv" && format != "json") throw dd::ConfigError("--format must be csv|json");
      cfg.format = format;
    }
    if (threads > 0) cfg.threads = threads;

    dd::RunContext ctx;
    ctx.out_dir = cfg.out_dir;
    ctx.seed = seed;
    ctx.format = cfg.format;
    ctx.threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (ctx.threads < 1) ctx.threads = 1;

    return dd::run_subcommand(sub, cfg, ctx);
  } catch (const dd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return dd::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return dd::kExitConfig;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return dd::kExitIo;
  }
}
