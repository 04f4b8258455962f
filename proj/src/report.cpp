#include "kpp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace kpp {

namespace {

std::string num6(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void VerificationReport::add(std::string id, double measured, double threshold, bool pass,
                             std::string note, bool mandatory) {
  rows_.push_back({std::move(id), measured, threshold, pass, mandatory, std::move(note)});
}

void VerificationReport::add_le(std::string id, double measured, double threshold,
                                std::string note, bool mandatory) {
  const bool ok = std::isfinite(measured) && measured <= threshold;
  add(std::move(id), measured, threshold, ok, std::move(note), mandatory);
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (const CheckRow& row : other.rows_) {
    CheckRow copy = row;
    copy.id = prefix + "/" + row.id;
    rows_.push_back(std::move(copy));
  }
}

bool VerificationReport::pass() const {
  return std::all_of(rows_.begin(), rows_.end(),
                     [](const CheckRow& r) { return r.pass || !r.mandatory; });
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const CheckRow& r : rows_) {
    nlohmann::ordered_json row;
    row["id"] = r.id;
    row["measured"] = r.measured;
    row["threshold"] = r.threshold;
    row["pass"] = r.pass;
    row["mandatory"] = r.mandatory;
    row["note"] = r.note;
    checks.push_back(std::move(row));
  }
  nlohmann::ordered_json out;
  out["suite"] = suite_;
  out["pass"] = pass();
  out["checks"] = std::move(checks);
  return out;
}

std::string VerificationReport::to_text() const {
  std::size_t idw = 4;
  for (const CheckRow& r : rows_) idw = std::max(idw, r.id.size());
  std::ostringstream os;
  os << "suite: " << suite_ << "\n";
  char line[512];
  std::snprintf(line, sizeof(line), "%-*s  %12s  %12s  %-6s  %s\n", static_cast<int>(idw),
                "id", "measured", "threshold", "status", "note");
  os << line;
  for (const CheckRow& r : rows_) {
    const char* status = r.pass ? "PASS" : (r.mandatory ? "FAIL" : "WARN");
    std::snprintf(line, sizeof(line), "%-*s  %12s  %12s  %-6s  %s\n", static_cast<int>(idw),
                  r.id.c_str(), num6(r.measured).c_str(), num6(r.threshold).c_str(), status,
                  r.note.c_str());
    os << line;
  }
  os << "overall: " << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace kpp
