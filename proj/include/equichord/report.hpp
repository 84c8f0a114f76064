#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace equichord {

/// Outcome of one theorem check: residuals, verdicts against the stated
/// tolerances, sample counts and diagnostics.
struct CheckReport {
  std::string check_id;
  double hypothesis_residual = 0.0;
  double conclusion_residual = 0.0;
  double hypothesis_tol = 1e-6;
  double conclusion_tol = 1e-6;
  bool hypothesis_holds = false;
  bool conclusion_holds = false;
  /// Set for checks that only measure a hypothesis (no conclusion verdict).
  bool hypothesis_only = false;
  std::map<std::string, long long> samples;
  std::map<std::string, double> metrics;
  std::map<std::string, bool> flags;
  std::vector<std::string> warnings;
  std::vector<std::string> assumptions;
  nlohmann::json config = nlohmann::json::object();

  /// Fill the verdicts from the residuals and tolerances.
  void decide();
  bool all_verdicts_true() const { return hypothesis_holds && (hypothesis_only || conclusion_holds); }
};

nlohmann::json to_json(const CheckReport& r);

}  // namespace equichord
