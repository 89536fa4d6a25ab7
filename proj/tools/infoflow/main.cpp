#include <exception>
#include <iostream>

#include "commands.hpp"
#include "infoflow/error.hpp"
#include "manifest.hpp"

using namespace infoflow::cli;

int main(int argc, char** argv) {
  CLI::App app{"infoflow: information-flow causality between time series"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  AnalyzeOptions analyze;
  analyze.seed = default_seed(0);
  SimulateOptions simulate;
  simulate.seed = default_seed(0);
  TheoryOptions theory;
  MapOptions map;
  ValidateOptions validate;
  validate.seed = default_seed(1);

  add_analyze(app, analyze);
  add_simulate(app, simulate);
  add_theory(app, theory);
  add_map(app, map);
  add_validate(app, validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (app.got_subcommand("analyze")) return run_analyze(analyze);
    if (app.got_subcommand("simulate")) {
      return run_simulate(simulate, *app.get_subcommand("simulate"));
    }
    if (app.got_subcommand("theory")) return run_theory(theory);
    if (app.got_subcommand("map")) return run_map(map);
    if (app.got_subcommand("validate")) return run_validate(validate);
  } catch (const infoflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return infoflow::is_numerical(e.code()) ? kExitNumerical : kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
