#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace conceptual::driver {

enum class Phase { Lex, Parse, Semant, Full };
enum class DumpKind { Tokens, Ast, TypedAst };

struct CompileOptions {
  std::vector<std::string> inputs;
  std::optional<std::string> out_dir;  // default: alongside each input
  Phase stop_after = Phase::Full;
  std::set<DumpKind> dumps;
  std::string check_scope = "for 4 but 20 steps";
  std::vector<std::string> include_path;  // CONCEPTUAL_PATH fallback
};

// Exit status: 0 success, 1 lex/parse error, 2 semantic errors, 3 I/O failure.
constexpr int kExitOk = 0;
constexpr int kExitSyntax = 1;
constexpr int kExitSemantic = 2;
constexpr int kExitIo = 3;

/// Run the pipeline: lex, parse, analyze, generate. Dumps go to `out`;
/// diagnostics go to `err`. Output files are written only when every input
/// compiles without errors.
int compile(const CompileOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace conceptual::driver
