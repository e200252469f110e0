#include "opideal/report.hpp"

#include <algorithm>

namespace opideal::report {

Json Report::to_json() const {
  Json j;
  j["tool"] = tool;
  j["config"] = config;
  Json cs = Json::array();
  for (const Check& c : checks)
    cs.push_back(Json{{"id", c.id},
                      {"status", c.passed ? "pass" : "fail"},
                      {"detail", c.detail}});
  j["checks"] = cs;
  j["data"] = data;
  j["summary"] = Json{{"passed", static_cast<long>(checks.size()) - failed_count()},
                      {"failed", failed_count()}};
  return j;
}

std::string Report::render_table() const {
  size_t idw = 5, stw = 6;
  for (const Check& c : checks) idw = std::max(idw, c.id.size());
  std::string out = "tool: " + tool + "\n";
  auto pad = [](const std::string& s, size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  out += pad("check", idw) + "  " + pad("status", stw) + "  detail\n";
  out += std::string(idw, '-') + "  " + std::string(stw, '-') + "  " +
         std::string(6, '-') + "\n";
  for (const Check& c : checks) {
    out += pad(c.id, idw) + "  " + pad(c.passed ? "PASS" : "FAIL", stw) + "  " +
           c.detail + "\n";
  }
  out += "summary: " +
         std::to_string(static_cast<long>(checks.size()) - failed_count()) +
         " passed, " + std::to_string(failed_count()) + " failed\n";
  return out;
}

}  // namespace opideal::report
