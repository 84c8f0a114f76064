#include "equichord/body_json.hpp"

#include <fstream>
#include <sstream>

namespace equichord {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorKind::Parse, "body json: " + what); }

double number(const json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

json ellipsoid_fields(const Ellipsoid& e, json out) {
  const int n = e.dim;
  json center = json::array();
  json shape = json::array();
  for (int i = 0; i < n; ++i) {
    center.push_back(e.center[i]);
    json row = json::array();
    for (int k = 0; k < n; ++k) row.push_back(e.shape(i, k));
    shape.push_back(row);
  }
  out["center"] = center;
  out["shape"] = shape;
  return out;
}

Ellipsoid parse_ellipsoid(const json& j) {
  if (!j.contains("center") || !j.contains("shape")) parse_fail("ellipsoid needs center and shape");
  const json& c = j.at("center");
  const json& s = j.at("shape");
  if (!c.is_array() || (c.size() != 2 && c.size() != 3)) parse_fail("center must have 2 or 3 entries");
  const int n = static_cast<int>(c.size());
  if (!s.is_array() || static_cast<int>(s.size()) != n) parse_fail("shape must be square and match center");
  Ellipsoid e;
  e.dim = n;
  e.shape = Mat3::Identity();
  for (int i = 0; i < n; ++i) {
    e.center[i] = number(c[static_cast<std::size_t>(i)], "center entry");
    const json& row = s[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) parse_fail("shape must be square and match center");
    for (int k = 0; k < n; ++k) e.shape(i, k) = number(row[static_cast<std::size_t>(k)], "shape entry");
  }
  return e;
}

}  // namespace

json body_to_json(const Body& b) {
  return std::visit(
      [](const auto& rep) -> json {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return ellipsoid_fields(rep, json{{"kind", "ellipsoid"}});
        } else if constexpr (std::is_same_v<T, FourierBody2D>) {
          json coeffs = json::array();
          for (const auto& c : rep.coeffs) coeffs.push_back(json::array({c[0], c[1]}));
          return json{{"kind", "fourier2d"}, {"a0", rep.a0}, {"coeffs", coeffs}};
        } else {
          json out{{"kind", "sh3d"}, {"degree", rep.degree}, {"coeffs", rep.coeffs}};
          if (rep.base) out["base"] = ellipsoid_fields(*rep.base, json::object());
          return out;
        }
      },
      b.rep());
}

Body body_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) parse_fail("missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ellipsoid") return Body(parse_ellipsoid(j));
  if (kind == "fourier2d") {
    FourierBody2D f;
    if (!j.contains("a0")) parse_fail("fourier2d needs a0");
    f.a0 = number(j.at("a0"), "a0");
    if (j.contains("coeffs")) {
      const json& c = j.at("coeffs");
      if (!c.is_array()) parse_fail("coeffs must be an array");
      for (const auto& pair : c) {
        if (!pair.is_array() || pair.size() != 2) parse_fail("fourier coefficients are [a_k, b_k] pairs");
        f.coeffs.push_back({number(pair[0], "a_k"), number(pair[1], "b_k")});
      }
    }
    if (f.coeffs.size() > 64) parse_fail("fourier degree above 64");
    return Body(std::move(f));
  }
  if (kind == "sh3d") {
    if (!j.contains("degree") || !j.at("degree").is_number_integer()) parse_fail("sh3d needs an integer degree");
    const int degree = j.at("degree").get<int>();
    if (degree < 0 || degree > 32) parse_fail("sh3d degree must be in [0, 32]");
    HarmonicBody3D s = HarmonicBody3D::zeros(degree);
    const json& c = j.contains("coeffs") ? j.at("coeffs") : json::array();
    if (!c.is_array() || c.size() != s.coeffs.size()) parse_fail("sh3d needs (degree+1)^2 coefficients");
    for (std::size_t i = 0; i < c.size(); ++i) s.coeffs[i] = number(c[i], "coefficient");
    if (j.contains("base")) {
      Ellipsoid base = parse_ellipsoid(j.at("base"));
      if (base.dim != 3) parse_fail("sh3d base must be a 3D ellipsoid");
      s.base = base;
    }
    return Body(std::move(s));
  }
  parse_fail("unknown kind \"" + kind + "\"");
}

std::string body_to_string(const Body& b) { return body_to_json(b).dump(); }

Body body_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
  return body_from_json(j);
}

Body load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return body_from_string(ss.str());
}

}  // namespace equichord
