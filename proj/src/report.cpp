#include "loopbundle/report.hpp"

#include <cmath>
#include <cstdio>

namespace loopbundle {

std::string format_residual(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

CaseResult& VerificationReport::add(std::string name, double max_residual, double tolerance, long samples) {
  CaseResult c;
  c.name = std::move(name);
  c.max_residual = max_residual;
  c.tolerance = tolerance;
  c.pass = max_residual <= tolerance;  // NaN fails
  c.samples = samples;
  cases.push_back(std::move(c));
  return cases.back();
}

void VerificationReport::merge(const VerificationReport& other) {
  for (const auto& c : other.cases) {
    CaseResult copy = c;
    if (!other.suite.empty()) copy.name = other.suite + "." + c.name;
    cases.push_back(copy);
  }
  for (const auto& n : other.notes) notes.push_back(other.suite.empty() ? n : other.suite + ": " + n);
  wall_time += other.wall_time;
}

bool VerificationReport::all_pass() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

const CaseResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : cases)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::ordered_json VerificationReport::to_json(bool include_wall_time) const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["pass"] = all_pass();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : cases) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["max_residual"] = format_residual(c.max_residual);
    e["tolerance"] = format_residual(c.tolerance);
    e["pass"] = c.pass;
    e["samples"] = c.samples;
    arr.push_back(std::move(e));
  }
  j["cases"] = std::move(arr);
  if (!notes.empty()) j["notes"] = notes;
  if (include_wall_time) j["wall_time"] = wall_time;
  return j;
}

}  // namespace loopbundle
