#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conceptual/compiler.hpp"

using conceptual::driver::CompileOptions;
using conceptual::driver::DumpKind;
using conceptual::driver::Phase;

int main(int argc, char** argv) {
  CLI::App cli{"Conceptual compiler: validates .con specifications and translates "
               "them into Alloy 6 modules"};

  CompileOptions opts;
  std::string out_dir;
  std::string stop_after = "full";
  std::vector<std::string> dumps;

  cli.add_option("files", opts.inputs, "input .con files")->required();
  cli.add_option("-o,--out", out_dir, "output directory (default: alongside each input)");
  cli.add_option("--stop-after", stop_after, "stop after a phase")
      ->check(CLI::IsMember({"lex", "parse", "semant", "full"}));
  cli.add_option("--dump", dumps, "dump a phase result to stdout")
      ->check(CLI::IsMember({"tokens", "ast", "typed-ast"}));
  cli.add_option("--scope", opts.check_scope,
                 "scope text for generated check commands (default: \"for 4 but 20 steps\")");

  CLI11_PARSE(cli, argc, argv);

  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (stop_after == "lex") opts.stop_after = Phase::Lex;
  else if (stop_after == "parse") opts.stop_after = Phase::Parse;
  else if (stop_after == "semant") opts.stop_after = Phase::Semant;
  else opts.stop_after = Phase::Full;
  for (const std::string& d : dumps) {
    if (d == "tokens") opts.dumps.insert(DumpKind::Tokens);
    if (d == "ast") opts.dumps.insert(DumpKind::Ast);
    if (d == "typed-ast") opts.dumps.insert(DumpKind::TypedAst);
  }

  // Include search fallback, after file-relative resolution.
  if (const char* path = std::getenv("CONCEPTUAL_PATH")) {
    std::stringstream ss(path);
    std::string entry;
    while (std::getline(ss, entry, ':'))
      if (!entry.empty()) opts.include_path.push_back(entry);
  }

  return conceptual::driver::compile(opts, std::cout, std::cerr);
}
