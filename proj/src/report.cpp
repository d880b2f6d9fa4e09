#include "wlens/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wlens {

std::size_t LawReport::count(const std::string& law) const {
  return static_cast<std::size_t>(
      std::count_if(violations_.begin(), violations_.end(),
                    [&](const Violation& v) { return v.law == law; }));
}

void LawReport::merge(const LawReport& other) {
  violations_.insert(violations_.end(), other.violations_.begin(),
                     other.violations_.end());
}

void LawReport::merge(const LawReport& other, const std::string& scope) {
  for (Violation v : other.violations_) {
    v.law = scope + "/" + v.law;
    violations_.push_back(std::move(v));
  }
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0.0";  // folds -0.0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::ostream& operator<<(std::ostream& os, const LawReport& report) {
  if (report.passed()) return os << "passed";
  os << "failed (" << report.violations().size() << " violations)";
  for (const auto& v : report.violations()) {
    os << "\n  " << v.law << " at (";
    for (std::size_t i = 0; i < v.witness.size(); ++i)
      os << (i ? ", " : "") << v.witness[i];
    os << "): " << format_number(v.lhs) << " vs " << format_number(v.rhs);
  }
  return os;
}

}  // namespace wlens
