#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "equichord/body.hpp"

namespace equichord {

/// Body JSON:
///   {"kind":"ellipsoid","center":[..],"shape":[[..],..]}      (2 or 3 entries)
///   {"kind":"fourier2d","a0":r,"coeffs":[[a1,b1],..]}
///   {"kind":"sh3d","degree":N,"coeffs":[..],"base":{"center":..,"shape":..}}
/// "base" is optional and turns the harmonic part into a perturbation of an
/// ellipsoid's support. Parsing throws GeometryError(Parse) on schema errors;
/// it does not validate convexity.
nlohmann::json body_to_json(const Body& b);
Body body_from_json(const nlohmann::json& j);

std::string body_to_string(const Body& b);
Body body_from_string(const std::string& text);
Body load_body(const std::string& path);

}  // namespace equichord
