#pragma once

// In-process replay of the golden cases under tests/golden.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wlens/cli.hpp"

namespace wlens::golden {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::string> case_args(const std::filesystem::path& dir,
                                          const std::string& name) {
  std::ifstream in(dir / (name + ".args"));
  std::vector<std::string> args;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) args.push_back(line);
  return args;
}

inline std::vector<std::string> case_names(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".args") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

/// Runs with `dir` as the working directory, since the args use relative paths.
inline Result replay(const std::filesystem::path& dir, const std::vector<std::string>& args) {
  const auto here = std::filesystem::current_path();
  std::filesystem::current_path(dir);
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  std::filesystem::current_path(here);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace wlens::golden
