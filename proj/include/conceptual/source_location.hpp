#pragma once

#include <cstdint>
#include <string>

namespace conceptual {

/// Half-open span in a source file. Lines and columns are 1-based and
/// columns count decoded characters, not bytes.
struct SourceLocation {
  std::string file;
  uint32_t start_line = 1;
  uint32_t start_col = 1;
  uint32_t end_line = 1;
  uint32_t end_col = 1;

  static SourceLocation point(std::string file, uint32_t line, uint32_t col) {
    return SourceLocation{std::move(file), line, col, line, col};
  }

  /// Smallest span covering both locations.
  static SourceLocation merge(const SourceLocation& a, const SourceLocation& b) {
    SourceLocation out = a;
    if (b.end_line > out.end_line ||
        (b.end_line == out.end_line && b.end_col > out.end_col)) {
      out.end_line = b.end_line;
      out.end_col = b.end_col;
    }
    return out;
  }

  std::string to_string() const {
    return file + ":" + std::to_string(start_line) + ":" + std::to_string(start_col);
  }
};

}  // namespace conceptual
