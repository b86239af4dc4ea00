#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>

#include "ptfric/config.hpp"
#include "ptfric/run.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

struct CommonFlags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
  bool seed_set = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "key=value configuration file");
  sub->add_option("--out", f.out, "output directory (overrides output.dir)");
  sub->add_option("--seed", f.seed, "RNG seed (overrides numerics.seed)");
  sub->add_option("--threads", f.threads, "worker threads (overrides numerics.threads)")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prandtl-Tomlinson stick-slip simulator: quantum, open-quantum and classical dynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PTFRIC_CLI_VERSION);

  CommonFlags flags;
  std::string qmode;
  auto* quantum = app.add_subcommand("quantum", "density-matrix propagation (closed or open)");
  quantum->add_option("--mode", qmode, "closed|open (overrides quantum.mode)")
      ->check(CLI::IsMember({"closed", "open"}));
  auto* classical = app.add_subcommand("classical", "Langevin ensemble or deterministic run");
  auto* sweep = app.add_subcommand("sweep", "first-period summary over a velocity grid");
  auto* spectrum = app.add_subcommand("spectrum", "instantaneous spectrum, anticrossings and slip times");
  auto* rates = app.add_subcommand("bath-rates", "gamma(E) and sigma(E) tables");
  for (auto* s : {quantum, classical, sweep, spectrum, rates}) add_common(s, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_config;
  }

  ptf::RunConfig cfg;
  try {
    cfg = flags.config.empty() ? ptf::parse_config("") : ptf::load_config(flags.config);
  } catch (const ptf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  }

  auto* sub = app.get_subcommands().front();
  if (sub->count("--out")) cfg.output_dir = flags.out;
  if (sub->count("--seed")) cfg.numerics.seed = flags.seed;
  if (sub->count("--threads")) cfg.threads = flags.threads;

  if (sub == quantum) {
    if (qmode == "open") cfg.mode = ptf::RunMode::quantum_open;
    else if (qmode == "closed") cfg.mode = ptf::RunMode::quantum_closed;
    else if (cfg.mode != ptf::RunMode::quantum_open) cfg.mode = ptf::RunMode::quantum_closed;
  } else if (sub == classical) {
    cfg.mode = ptf::RunMode::classical;
  } else if (sub == sweep) {
    cfg.mode = ptf::RunMode::sweep;
  } else if (sub == spectrum) {
    cfg.mode = ptf::RunMode::spectrum;
  } else {
    cfg.mode = ptf::RunMode::bath_rates;
  }

  try {
    const auto st = ptf::run(cfg);
    for (const auto& f : st.files) std::cout << cfg.output_dir << '/' << f << '\n';
    if (st.exit_code != 0) {
      std::cerr << "numeric abort: " << st.message << '\n';
      return exit_numeric;
    }
  } catch (const ptf::NumericAbort& e) {
    std::cerr << "numeric abort: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
