#pragma once

// Seeded verification suites shared by the command-line tool and the
// acceptance runner. Every suite draws sample k from rng_for(seed', k), so a
// report depends only on the configuration.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loopbundle/report.hpp"

namespace loopbundle {

struct SuiteConfig {
  std::string loop = "qc";
  std::string atlas = "s3-over-s1";  // bundle suite
  long samples = 0;                  // 0: per-suite default
  std::uint64_t seed = 1;
  int steps = 256;
  std::map<std::string, double> tol = default_tolerances();

  static std::map<std::string, double> default_tolerances();
  double tolerance(const std::string& name) const;
};

std::vector<std::string> suite_names();

/// "axioms", "tangent", "jacobi", "reconstruct", "bundle", "gauge" or "all".
/// UnknownSuite for anything else, UnknownLoop for a bad loop name.
VerificationReport run_suite(const SuiteConfig& cfg, const std::string& suite);

/// Real-basis C^p_12 converted to the complex basis (Γ₁, Γ₂) of a 2-dim loop.
struct ComplexStructure {
  double c1_re, c1_im;  // C¹₁₂
  double c2_re, c2_im;  // C²₁₂
};
ComplexStructure complex_structure(double cx, double cy);

}  // namespace loopbundle
