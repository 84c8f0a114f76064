#include "equichord/report.hpp"

#include <cmath>

namespace equichord {

void CheckReport::decide() {
  hypothesis_holds = std::isfinite(hypothesis_residual) && hypothesis_residual <= hypothesis_tol;
  conclusion_holds = !hypothesis_only && std::isfinite(conclusion_residual) && conclusion_residual <= conclusion_tol;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

nlohmann::json to_json(const CheckReport& r) {
  using nlohmann::json;
  json verdicts{{"hypothesis_holds", r.hypothesis_holds}};
  json tolerances{{"hypothesis", r.hypothesis_tol}};
  if (r.hypothesis_only) {
    verdicts["conclusion_holds"] = nullptr;
  } else {
    verdicts["conclusion_holds"] = r.conclusion_holds;
    tolerances["conclusion"] = r.conclusion_tol;
  }
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
  json out{{"check_id", r.check_id},
           {"hypothesis_residual", number(r.hypothesis_residual)},
           {"conclusion_residual", r.hypothesis_only ? json(nullptr) : number(r.conclusion_residual)},
           {"verdicts", verdicts},
           {"tolerances", tolerances},
           {"samples", r.samples},
           {"metrics", metrics},
           {"flags", r.flags},
           {"warnings", r.warnings},
           {"assumptions", r.assumptions},
           {"config", r.config}};
  return out;
}

}  // namespace equichord
