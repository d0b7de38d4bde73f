#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "conceptual/ast.hpp"

namespace conceptual::driver {

/// Resolves `include` paths to parsed files. Relative paths resolve against
/// the directory of the file naming them, then against the search path
/// (CONCEPTUAL_PATH). The `.con` extension is added when the path has none.
/// Parsed files are cached per invocation.
class IncludeLoader {
 public:
  explicit IncludeLoader(std::vector<std::string> search_path = {})
      : search_path_(std::move(search_path)) {}

  struct Result {
    const ast::Model* model = nullptr;  // null on failure
    std::string resolved_path;
    std::string error;  // set on failure
  };

  Result load(const std::string& base_dir, const std::string& dep_path);

 private:
  std::vector<std::string> search_path_;
  std::map<std::string, std::unique_ptr<ast::Model>> cache_;
};

/// Read a file as text with newlines normalized to '\n'.
/// Returns false and sets `error` on failure.
bool read_text_file(const std::string& path, std::string& out, std::string& error);

}  // namespace conceptual::driver
