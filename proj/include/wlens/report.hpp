#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace wlens {

struct Violation {
  std::string law;
  std::vector<std::string> witness;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Outcome of a law check. Passed exactly when no violation was recorded.
class LawReport {
 public:
  LawReport() = default;

  bool passed() const { return violations_.empty(); }
  explicit operator bool() const { return passed(); }

  const std::vector<Violation>& violations() const { return violations_; }
  std::size_t count(const std::string& law) const;

  void add(Violation v) { violations_.push_back(std::move(v)); }
  void add(std::string law, std::vector<std::string> witness, double lhs,
           double rhs) {
    violations_.push_back({std::move(law), std::move(witness), lhs, rhs});
  }
  void merge(const LawReport& other);
  /// Prefixes every law name of `other` with `scope` + "/" before merging.
  void merge(const LawReport& other, const std::string& scope);

 private:
  std::vector<Violation> violations_;
};

std::ostream& operator<<(std::ostream& os, const LawReport& report);

/// Decimal rendering used by reports and the CLI: 12 significant digits,
/// always with a decimal point or exponent, and "inf" for infinity.
std::string format_number(double value);

}  // namespace wlens
