#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equichord/body.hpp"
#include "equichord/parallel.hpp"
#include "equichord/report.hpp"

namespace equichord {

/// Two parallel planes {<x,n> = offset1} and {<x,n> = offset2}.
struct Slab {
  Vec3 normal = Vec3::UnitZ();
  double offset1 = -2.0;
  double offset2 = 2.0;
};

struct CheckConfig {
  int directions = 64;       // direction grid size
  int tangents = 128;        // lines per tangent family / chords per equichordal test
  int apexes = 32;           // apex samples on the boundary of M (or the slab)
  int section_planes = 16;   // supporting planes per direction or apex
  int section_samples = 512; // boundary samples per section
  int planes = 64;           // planes through p (suss)
  int fit_samples = 256;     // boundary samples per quadric fit
  int shadow_samples = 128;
  int axis_planes = 16;
  int axis_points = 64;
  double hypothesis_tol = 1e-6;
  double conclusion_tol = 1e-6;
  std::optional<Slab> slab;
  std::optional<Vec3> axis;  // direction v for lemma2 (default e_z)
  bool hypothesis_only = false;
  Exec exec = Exec::Parallel;

  nlohmann::json to_json() const;
};

struct CheckInputs {
  Body K;
  std::optional<Body> L;
  std::optional<Body> M;
  std::optional<Vec3> p;
};

/// Every id accepted by run_check.
const std::vector<std::string>& check_ids();

/// Hypothesis and conclusion residuals for one theorem or conjecture. Ids
/// naming conjectures ("conj-...") measure the hypothesis only.
CheckReport run_check(const std::string& id, const CheckInputs& in, const CheckConfig& cfg = {});

}  // namespace equichord
