// rt: evaluate tensor expressions or run scripts of them.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rt/dsl.hpp"

namespace dsl = rt::dsl;

int main(int argc, char** argv) {
  CLI::App app{"Ricci-notation tensor expressions"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::vector<std::string> defines;
  std::string expr;
  bool json = false;
  auto* eval = app.add_subcommand("eval", "Evaluate one expression or statement");
  eval->add_option("expr", expr, "Expression, e.g. \"a(i)*b(~i)\"")->required();
  eval->add_option("--seed", seed, "Random seed");
  eval->add_option("--define", defines, "name=expr definitions evaluated first");
  eval->add_flag("--json", json, "Print a JSON record");

  std::string script;
  std::uint64_t run_seed = 0;
  auto* run = app.add_subcommand("run", "Run a script file");
  run->add_option("script", script, "Script path")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", run_seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  if (*eval) {
    dsl::Environment env(seed);
    try {
      for (const auto& d : defines) {
        const auto prog = dsl::parse_program(d);
        for (const auto& s : prog) dsl::execute(s, env);
      }
      const auto prog = dsl::parse_program(expr);
      dsl::Value last = false;
      for (const auto& s : prog) last = dsl::execute(s, env);
      if (json)
        std::cout << dsl::to_json(last, env) << "\n";
      else
        std::cout << dsl::describe(last, env, 32) << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    return 0;
  }

  std::ifstream in(script);
  std::stringstream text;
  text << in.rdbuf();
  dsl::Environment env(run_seed);
  const auto report = dsl::run_script(text.str(), env, std::cout);
  if (!report.ok) {
    std::cerr << script << ":" << report.error << "\n";
    return 1;
  }
  return 0;
}
