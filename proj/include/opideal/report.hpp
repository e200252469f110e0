// Machine-readable run reports.  A report is a named list of checks plus a
// structured data payload; identical configurations produce byte-identical
// JSON (insertion-ordered keys, integers as decimal strings, no clocks).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opideal/serialize.hpp"

namespace opideal::report {

using serialize::Json;

struct Check {
  std::string id;
  bool passed = false;
  std::string detail;
};

struct Report {
  std::string tool;
  Json config = Json::object();
  std::vector<Check> checks;
  Json data = Json::object();

  void add(const std::string& id, bool passed, const std::string& detail) {
    checks.push_back(Check{id, passed, detail});
  }

  long failed_count() const {
    long n = 0;
    for (const Check& c : checks)
      if (!c.passed) ++n;
    return n;
  }
  bool all_passed() const { return failed_count() == 0; }

  Json to_json() const;
  std::string render_table() const;
};

}  // namespace opideal::report
