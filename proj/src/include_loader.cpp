#include "conceptual/include_loader.hpp"

#include <filesystem>
#include <fstream>

#include "conceptual/parser.hpp"

namespace fs = std::filesystem;

namespace conceptual::driver {

bool read_text_file(const std::string& path, std::string& out, std::string& error) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    error = path + " is a directory";
    return false;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    error = "cannot open " + path;
    return false;
  }
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  out.clear();
  out.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r') {
      out += '\n';
      if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
    } else {
      out += raw[i];
    }
  }
  return true;
}

IncludeLoader::Result IncludeLoader::load(const std::string& base_dir,
                                          const std::string& dep_path) {
  std::string rel = dep_path;
  // The `.con` extension is added automatically when omitted.
  std::string base = fs::path(rel).filename().string();
  if (base.find('.') == std::string::npos) rel += ".con";

  std::vector<std::string> candidates;
  candidates.push_back((fs::path(base_dir) / rel).string());
  for (const std::string& dir : search_path_)
    candidates.push_back((fs::path(dir) / rel).string());

  std::string found;
  for (const std::string& c : candidates) {
    std::error_code ec;
    if (fs::exists(c, ec) && !fs::is_directory(c, ec)) {
      found = c;
      break;
    }
  }
  if (found.empty())
    return {nullptr, {}, "file not found: " + rel};

  std::string key = fs::weakly_canonical(found).string();
  auto it = cache_.find(key);
  if (it != cache_.end()) return {it->second.get(), found, {}};

  std::string text, io_error;
  if (!read_text_file(found, text, io_error)) return {nullptr, found, io_error};

  try {
    auto model = std::make_unique<ast::Model>(parser::parse_source(text, found));
    const ast::Model* ptr = model.get();
    cache_.emplace(key, std::move(model));
    return {ptr, found, {}};
  } catch (const lex::LexError& e) {
    return {nullptr, found, "included file fails to lex: " + std::string(e.what())};
  } catch (const parser::SyntaxError& e) {
    return {nullptr, found, "included file fails to parse: " + std::string(e.what())};
  }
}

}  // namespace conceptual::driver
