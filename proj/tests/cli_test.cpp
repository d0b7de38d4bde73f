#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "test_util.hpp"

#ifndef _WIN32
#include <sys/wait.h>
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

int decode_exit(int status) {
#ifdef _WIN32
  return status;
#else
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
#endif
}

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "conceptual_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  fs::path out_path = dir / "stdout.txt";
  fs::path err_path = dir / "stderr.txt";
  std::string command = std::string(CONCEPTUAL_BIN) + " " + args + " > " +
                        out_path.string() + " 2> " + err_path.string();
  RunResult r;
  r.exit_code = decode_exit(std::system(command.c_str()));
  r.out = test_util::read_file(out_path.string());
  r.err = test_util::read_file(err_path.string());
  return r;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

}  // namespace

TEST_CASE("a valid concept compiles to its module with exit 0") {
  fs::path dir = scratch_dir("valid");
  fs::copy_file(test_util::corpus_path("reservation.con"), dir / "reservation.con");
  RunResult r = run_cli((dir / "reservation.con").string(), dir);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "reservation.als"));
  std::string text = test_util::read_file((dir / "reservation.als").string());
  CHECK(text.find("module reservation") != std::string::npos);
}

TEST_CASE("semantic errors report and exit 2 without artifacts") {
  fs::path dir = scratch_dir("semantic");
  write_file(dir / "broken.con",
             "concept broken\npurpose \"p\"\nstate\n  s : set T\nactions\n"
             "  f(x : T)\n    s += undeclared\nprinciple\n");
  RunResult r = run_cli((dir / "broken.con").string(), dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("undeclared") != std::string::npos);
  CHECK(r.err.find("broken.con:7:") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "broken.als"));
}

TEST_CASE("syntax errors exit 1") {
  fs::path dir = scratch_dir("syntax");
  write_file(dir / "bad.con", "concept bad\nactions purpose\n");
  RunResult r = run_cli((dir / "bad.con").string(), dir);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("lex errors exit 1") {
  fs::path dir = scratch_dir("lex");
  write_file(dir / "bad.con", "concept @@@\n");
  RunResult r = run_cli((dir / "bad.con").string(), dir);
  CHECK(r.exit_code == 1);
}

TEST_CASE("missing inputs exit 3") {
  fs::path dir = scratch_dir("io");
  RunResult r = run_cli((dir / "missing.con").string(), dir);
  CHECK(r.exit_code == 3);
  // A directory is not an input either.
  RunResult r2 = run_cli(dir.string(), dir);
  CHECK(r2.exit_code == 3);
}

TEST_CASE("compiling an app emits modules for every included concept") {
  fs::path dir = scratch_dir("app");
  for (const char* name : {"todo.con", "label.con", "todo_label.con"})
    fs::copy_file(test_util::corpus_path(name), dir / name);
  RunResult r = run_cli((dir / "todo_label.con").string(), dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "todo.als"));
  CHECK(fs::exists(dir / "label.als"));
  CHECK(fs::exists(dir / "todo_label.als"));
}

TEST_CASE("--out redirects artifacts") {
  fs::path dir = scratch_dir("outdir");
  fs::path out = dir / "generated";
  fs::copy_file(test_util::corpus_path("todo.con"), dir / "todo.con");
  RunResult r = run_cli((dir / "todo.con").string() + " --out " + out.string(), dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(out / "todo.als"));
  CHECK_FALSE(fs::exists(dir / "todo.als"));
}

TEST_CASE("recompiling unchanged inputs rewrites byte-identical outputs") {
  fs::path dir = scratch_dir("idempotent");
  fs::copy_file(test_util::corpus_path("upvote.con"), dir / "upvote.con");
  REQUIRE(run_cli((dir / "upvote.con").string(), dir).exit_code == 0);
  std::string first = test_util::read_file((dir / "upvote.als").string());
  REQUIRE(run_cli((dir / "upvote.con").string(), dir).exit_code == 0);
  std::string second = test_util::read_file((dir / "upvote.als").string());
  CHECK(first == second);
}

TEST_CASE("an error in one file suppresses all outputs of the invocation") {
  fs::path dir = scratch_dir("partial");
  fs::copy_file(test_util::corpus_path("todo.con"), dir / "todo.con");
  write_file(dir / "broken.con",
             "concept broken\npurpose \"p\"\nstate\nactions\n  f(x : Nope)\nprinciple\n");
  RunResult r =
      run_cli((dir / "todo.con").string() + " " + (dir / "broken.con").string(), dir);
  CHECK(r.exit_code == 2);
  CHECK_FALSE(fs::exists(dir / "todo.als"));
  CHECK_FALSE(fs::exists(dir / "broken.als"));
}

TEST_CASE("--dump tokens prints the token stream") {
  fs::path dir = scratch_dir("dump_tokens");
  write_file(dir / "t.con", "concept t\n");
  RunResult r =
      run_cli((dir / "t.con").string() + " --stop-after lex --dump tokens", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("CONCEPT @ 1:1") != std::string::npos);
  CHECK(r.out.find("IDENT(t)") != std::string::npos);
  CHECK(r.out.find("EOF") != std::string::npos);
}

TEST_CASE("--dump ast prints the location-annotated tree") {
  fs::path dir = scratch_dir("dump_ast");
  fs::copy_file(test_util::corpus_path("todo.con"), dir / "todo.con");
  RunResult r =
      run_cli((dir / "todo.con").string() + " --stop-after parse --dump ast", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("Concept@1:1 todo") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "todo.als"));
}

TEST_CASE("--dump typed-ast prints inferred types") {
  fs::path dir = scratch_dir("dump_typed");
  fs::copy_file(test_util::corpus_path("todo.con"), dir / "todo.con");
  RunResult r =
      run_cli((dir / "todo.con").string() + " --stop-after semant --dump typed-ast", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find(": set Task") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "todo.als"));
}

TEST_CASE("--scope overrides check commands") {
  fs::path dir = scratch_dir("scope");
  fs::copy_file(test_util::corpus_path("todo.con"), dir / "todo.con");
  RunResult r = run_cli((dir / "todo.con").string() + " --scope \"for 3 but 10 steps\"", dir);
  REQUIRE(r.exit_code == 0);
  std::string text = test_util::read_file((dir / "todo.als").string());
  CHECK(text.find("check principle1 for 3 but 10 steps") != std::string::npos);
}

TEST_CASE("CONCEPTUAL_PATH provides an include fallback") {
  fs::path dir = scratch_dir("envpath");
  fs::path libdir = dir / "lib";
  fs::create_directories(libdir);
  fs::copy_file(test_util::corpus_path("todo.con"), libdir / "todo.con");
  fs::copy_file(test_util::corpus_path("label.con"), libdir / "label.con");
  fs::copy_file(test_util::corpus_path("todo_label.con"), dir / "todo_label.con");

  fs::path out_path = dir / "stdout.txt";
  fs::path err_path = dir / "stderr.txt";
  std::string command = "CONCEPTUAL_PATH=" + libdir.string() + " " + CONCEPTUAL_BIN +
                        " " + (dir / "todo_label.con").string() + " > " +
                        out_path.string() + " 2> " + err_path.string();
  int code = decode_exit(std::system(command.c_str()));
  CHECK(code == 0);
  CHECK(fs::exists(dir / "todo_label.als"));
  CHECK(fs::exists(dir / "todo.als"));
}
