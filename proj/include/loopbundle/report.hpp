#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace loopbundle {

struct CaseResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  long samples = 0;
};

class VerificationReport {
 public:
  explicit VerificationReport(std::string suite = {}) : suite(std::move(suite)) {}

  std::string suite;
  std::vector<CaseResult> cases;
  std::vector<std::string> notes;  // rejected draws, failure details
  double wall_time = 0.0;

  /// Record a case; pass is derived from the residual so the invariant holds.
  CaseResult& add(std::string name, double max_residual, double tolerance, long samples);
  void merge(const VerificationReport& other);
  bool all_pass() const;
  const CaseResult* find(const std::string& name) const;

  /// JSON document; residuals as 15-significant-digit strings.
  nlohmann::ordered_json to_json(bool include_wall_time = true) const;
};

/// Formats a double with 15 significant digits ("inf"/"nan" spelled out).
std::string format_residual(double x);

/// Running maximum that treats NaN as a failure (it propagates as +inf).
struct MaxTracker {
  double value = 0.0;
  long count = 0;
  void add(double r) {
    ++count;
    if (!(r <= value)) value = (r == r) ? r : INFINITY;
  }
};

}  // namespace loopbundle
