#pragma once

#include <stdexcept>
#include <string>

namespace svgene {

// All recoverable failures carry a stable category token so the CLI can emit
// one machine-parsable line: "error: <Category>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& detail)
      : std::runtime_error(category + ": " + detail), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

inline Error dimension_mismatch(const std::string& detail) { return Error("DimensionMismatch", detail); }
inline Error invariant_violation(const std::string& detail) { return Error("InvariantViolation", detail); }
inline Error degenerate_column(const std::string& detail) { return Error("DegenerateColumn", detail); }
inline Error singular_design(const std::string& detail) { return Error("SingularDesign", detail); }
inline Error not_positive_definite(const std::string& detail) { return Error("NotPositiveDefinite", detail); }
inline Error region_coverage(const std::string& detail) { return Error("RegionCoverage", detail); }
inline Error overflow_guard(const std::string& detail) { return Error("OverflowGuard", detail); }
inline Error parse_error(const std::string& detail) { return Error("ParseError", detail); }
inline Error unknown_gene(const std::string& detail) { return Error("UnknownGene", detail); }
inline Error unknown_spot(const std::string& detail) { return Error("UnknownSpot", detail); }
inline Error unknown_scenario(const std::string& detail) { return Error("UnknownScenario", detail); }
inline Error missing_truth(const std::string& detail) { return Error("MissingTruth", detail); }

}  // namespace svgene
