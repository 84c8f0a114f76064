#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equichord/body.hpp"
#include "equichord/checks.hpp"

namespace equichord {

enum class FamilyKind { Fourier2D, SH3D, EllipsoidSH };

/// Parametric body family: fourier2d(N) with a0 = 1 and k = 1..N free;
/// sh3d(N) with Y_00 fixed to the unit ball and l = 1..N free;
/// ellipsoid+sh(N) with base diag(1/4,1,1) and l = 2..N free.
struct Family {
  FamilyKind kind = FamilyKind::EllipsoidSH;
  int degree = 4;

  static Family parse(const std::string& text);  // "fourier2d(6)", "sh3d(4)", "ellipsoid+sh(4)"
  std::string to_string() const;
  int dim() const { return kind == FamilyKind::Fourier2D ? 2 : 3; }
  int parameter_count() const;
  Body decode(const std::vector<double>& params) const;  // params.size() == parameter_count()
  Body base() const;                                      // all parameters zero
};

enum class Coupling { Fixed, Homothet, Independent };
Coupling parse_coupling(const std::string& s);
const char* to_string(Coupling c);

struct SearchConfig {
  std::string target = "parallel";
  Family family;
  Coupling coupling = Coupling::Homothet;
  int budget = 500;
  std::uint64_t seed = 1;
  int restarts = 4;
  double initial_scale = 0.02;   // half-width of the random starting perturbation
  double initial_step = 0.01;    // simplex edge at the first start
  double restart_shrink = 0.5;   // simplex edge factor per restart
  std::optional<Body> L;         // fixed inner body (default: the family base scaled by 1/2)
  std::optional<Body> M;         // apex body for concurrent targets
  std::optional<Vec3> p;         // interior point for point targets (default: anchor of K)
  CheckConfig check = default_check();

  static CheckConfig default_check();
  nlohmann::json to_json() const;
};

struct Iterate {
  long long evaluation = 0;
  int restart = 0;
  std::vector<double> parameters;
  double residual = 0.0;
  double structure_distance = 0.0;
  bool penalized = false;
};

struct SearchTrace {
  nlohmann::json config;
  std::vector<Iterate> iterates;  // every new best-so-far, in order
  long long evaluations = 0;
  std::string termination;        // "budget", "converged" or "step-collapse"
  bool alarm = false;             // potential counterexample for a proven theorem
  std::string alarm_reason;

  const Iterate& best() const { return iterates.back(); }
  nlohmann::json to_json() const;
  /// iteration,residual,structure_distance
  std::string to_csv() const;
};

/// Targets accepted by search.
const std::vector<std::string>& search_targets();

/// Hypothesis residual of a target on given bodies (0 iff the sampled
/// hypothesis holds). Invalid or non-nested bodies get 10 + violation.
double residual(const std::string& target, const CheckInputs& in, const CheckConfig& cfg, bool* penalized = nullptr);

/// Distance of (K, L) to the class the target's conclusion names.
double structure_distance(const std::string& target, const Body& K, const std::optional<Body>& L,
                          int fit_samples = 256);

SearchTrace search(const SearchConfig& cfg);

}  // namespace equichord
