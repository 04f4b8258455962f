#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace kpp {

/// One named check: a measured quantity compared against a threshold.
/// Non-mandatory rows are advisory (warnings) and never fail the report.
struct CheckRow {
  std::string id;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool mandatory = true;
  std::string note;  // free-form context (location of worst violation, units, ...)
};

/// Result of a verification suite: ordered check rows plus an overall verdict.
/// Overall pass holds exactly when every mandatory row passes.
class VerificationReport {
 public:
  explicit VerificationReport(std::string suite) : suite_(std::move(suite)) {}

  void add(std::string id, double measured, double threshold, bool pass, std::string note = "",
           bool mandatory = true);
  /// Convenience for "measured <= threshold" checks.
  void add_le(std::string id, double measured, double threshold, std::string note = "",
              bool mandatory = true);
  /// Merge another report's rows under an id prefix ("prefix/<row-id>").
  void merge(const VerificationReport& other, const std::string& prefix);

  bool pass() const;
  const std::string& suite() const { return suite_; }
  const std::vector<CheckRow>& rows() const { return rows_; }

  /// Stable-key-order JSON object (suite, pass, checks[]).
  nlohmann::ordered_json to_json() const;
  /// Fixed-width text table, one row per check plus a verdict line.
  std::string to_text() const;

 private:
  std::string suite_;
  std::vector<CheckRow> rows_;
};

}  // namespace kpp
