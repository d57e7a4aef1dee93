// galerkin: solve / check / converge / exponents
#include <CLI11.hpp>

#include <iostream>

#include "galerkin/cli.hpp"
#include "galerkin/config.hpp"
#include "galerkin/io.hpp"

namespace cli = galerkin::cli;

namespace {

galerkin::RunConfig load(const std::string& path) {
  // "builtin:heat" selects a built-in problem
  if (path.rfind("builtin:", 0) == 0) return galerkin::builtin_config(path.substr(8));
  return galerkin::parse_config_file(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Galerkin solver and hypothesis checker for du/dt + A(t)u = f"};
  app.require_subcommand(1);
  app.set_version_flag("--version", galerkin::kToolVersion);

  std::string config, out, levels = "2,4,8,16", p;
  int level = 0, d = 0;
  std::uint64_t seed = 0;

  auto* solve = app.add_subcommand("solve", "integrate a problem and audit the trajectory");
  solve->add_option("--config", config, "config file (or builtin:NAME)")->required();
  solve->add_option("--level", level, "Galerkin level n (default 8)");
  solve->add_option("--out", out, "output directory")->required();

  auto* check = app.add_subcommand("check", "sample the structural hypotheses");
  check->add_option("--config", config, "config file (or builtin:NAME)")->required();
  check->add_option("--seed", seed, "RNG seed");
  check->add_option("--level", level, "level of the sampled space (default from config)");
  check->add_option("--out", out, "report path (default stdout)");

  auto* converge = app.add_subcommand("converge", "multi-level Cauchy study");
  converge->add_option("--config", config, "config file (or builtin:NAME)")->required();
  converge->add_option("--levels", levels, "comma separated, strictly increasing");
  converge->add_option("--out", out, "CSV path (default stdout)");

  auto* exponents = app.add_subcommand("exponents", "exponent arithmetic for (d, p)");
  exponents->add_option("--d", d, "space dimension")->required();
  exponents->add_option("--p", p, "exponent, e.g. 11/5")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::Exit::usage;
  }

  try {
    if (*exponents) return cli::cmd_exponents(d, p, std::cout, std::cerr);
    auto rc = load(config);
    if (*solve) return cli::cmd_solve(rc, level > 0 ? level : 8, out, std::cerr);
    if (*check) {
      if (level > 0) rc.check.level = level;
      return cli::cmd_check(rc, seed, out, std::cerr);
    }
    if (*converge) return cli::cmd_converge(rc, cli::parse_levels(levels), out, std::cerr);
  } catch (const galerkin::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::Exit::usage;
  } catch (const galerkin::LevelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::Exit::usage;
  } catch (const galerkin::KindError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::Exit::usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::Exit::failed;
  }
  return cli::Exit::usage;
}
