#pragma once

// File-driven command line front end. The library form lets tests run the
// tool in-process and compare its output byte for byte.

#include <iosfwd>
#include <string>
#include <vector>

namespace wlens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

struct VerbInfo {
  std::string name;
  std::string summary;
  /// Library law checks this verb runs; every check belongs to one verb.
  std::vector<std::string> checks;
};

const std::vector<VerbInfo>& verb_table();

/// args excludes the program name. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace wlens::cli
