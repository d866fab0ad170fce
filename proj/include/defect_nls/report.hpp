#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "defect_nls/error.hpp"
#include "json.hpp"

namespace defect_nls {

enum class CheckStatus { pass, fail, skipped };

constexpr std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

struct CheckRecord {
  std::string check;
  CheckStatus status = CheckStatus::skipped;
  std::optional<double> measured;
  std::optional<double> tolerance;
  double seconds = 0.0;
  /// Free-form context, kept out of the JSON output.
  std::string note;
};

using Report = std::vector<CheckRecord>;

inline bool any_failed(const Report& r) {
  for (const auto& c : r) {
    if (c.status == CheckStatus::fail) return true;
  }
  return false;
}

inline nlohmann::ordered_json report_to_json(const Report& report) {
  auto number_or_null = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
  };
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : report) {
    arr.push_back(nlohmann::ordered_json{{"check", c.check},
                   {"status", std::string(to_string(c.status))},
                   {"measured", number_or_null(c.measured)},
                   {"tolerance", number_or_null(c.tolerance)},
                   {"seconds", c.seconds}});
  }
  return arr;
}

inline void emit_report(const Report& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, path + ": cannot open for writing");
  out << report_to_json(report).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::IoError, path + ": write failed");
}

}  // namespace defect_nls
