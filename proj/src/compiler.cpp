#include "conceptual/compiler.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "conceptual/alloy_gen.hpp"
#include "conceptual/ast_dump.hpp"
#include "conceptual/diagnostics.hpp"
#include "conceptual/include_loader.hpp"
#include "conceptual/parser.hpp"
#include "conceptual/semant.hpp"

namespace fs = std::filesystem;

namespace conceptual::driver {

namespace {

struct Artifact {
  std::string out_dir;
  std::string name;
  std::string text;
};

std::string render_exception(const char* severity, const std::string& what,
                             const SourceLocation& loc) {
  return std::string(severity) + ": " + loc.file + ":" + std::to_string(loc.start_line) +
         ":" + std::to_string(loc.start_col) + ": " + what + "\n";
}

}  // namespace

int compile(const CompileOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.inputs.empty()) {
    err << "error: no input files\n";
    return kExitIo;
  }

  bool syntax_failed = false;
  bool semantic_failed = false;
  std::vector<Artifact> artifacts;
  IncludeLoader loader(opts.include_path);

  for (const std::string& input : opts.inputs) {
    std::string text, io_error;
    if (!read_text_file(input, text, io_error)) {
      err << "error: " << io_error << "\n";
      return kExitIo;
    }

    if (opts.dumps.count(DumpKind::Tokens)) {
      try {
        out << dump::dump_tokens(lex::tokenize(text, input));
      } catch (const lex::LexError& e) {
        err << render_exception("error", e.what(), e.loc);
        syntax_failed = true;
        continue;
      }
    }
    if (opts.stop_after == Phase::Lex) {
      if (!opts.dumps.count(DumpKind::Tokens)) {
        try {
          lex::tokenize(text, input);
        } catch (const lex::LexError& e) {
          err << render_exception("error", e.what(), e.loc);
          syntax_failed = true;
        }
      }
      continue;
    }

    ast::Model model;
    try {
      model = parser::parse_source(text, input);
    } catch (const lex::LexError& e) {
      err << render_exception("error", e.what(), e.loc);
      syntax_failed = true;
      continue;
    } catch (const parser::SyntaxError& e) {
      err << render_exception("error", e.what(), e.loc);
      syntax_failed = true;
      continue;
    }

    if (opts.dumps.count(DumpKind::Ast)) out << dump::dump_model(model);
    if (opts.stop_after == Phase::Parse) continue;

    std::string base_dir = fs::path(input).parent_path().string();
    if (base_dir.empty()) base_dir = ".";

    diag::Sink sink;
    sem::TypedModel typed = sem::analyze(model, loader, base_dir, sink);

    if (opts.dumps.count(DumpKind::TypedAst)) out << sem::dump_typed_model(typed);
    err << sink.render();
    if (sink.error_count() > 0) {
      semantic_failed = true;
      continue;
    }
    if (opts.stop_after == Phase::Semant) continue;

    std::string out_dir = opts.out_dir ? *opts.out_dir : base_dir;
    alloy::Options gen_opts;
    gen_opts.check_scope = opts.check_scope;
    try {
      for (const sem::TConcept& c : typed.concepts) {
        alloy::Document doc = alloy::gen_concept(c, gen_opts);
        artifacts.push_back(Artifact{out_dir, c.name + ".als", alloy::serialize(doc)});
      }
      for (const sem::TApp& a : typed.apps) {
        alloy::Document doc = alloy::gen_app(a, typed, gen_opts);
        artifacts.push_back(Artifact{out_dir, a.name + ".als", alloy::serialize(doc)});
      }
    } catch (const alloy::CodegenFault& e) {
      err << "error: internal code generation fault: " << e.what() << "\n";
      semantic_failed = true;
    }
  }

  if (syntax_failed) return kExitSyntax;
  if (semantic_failed) return kExitSemantic;

  // No partial artifacts: everything compiled cleanly, so write it all now.
  for (const Artifact& artifact : artifacts) {
    std::error_code ec;
    fs::create_directories(artifact.out_dir, ec);
    fs::path path = fs::path(artifact.out_dir) / artifact.name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write " << path.string() << "\n";
      return kExitIo;
    }
    file << artifact.text;
  }
  return kExitOk;
}

}  // namespace conceptual::driver
