#pragma once

#include <string>
#include <vector>

#include "equichord/chords.hpp"
#include "equichord/planar.hpp"
#include "equichord/shadow.hpp"

namespace equichord {

/// Shortest round-trip decimal form, '.' separator, independent of the
/// global locale. Non-finite values print as nan, inf, -inf.
std::string format_number(double x);

/// Header line plus one line per row.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// parameter,length for each non-grazing chord.
std::string profile_csv(const ChordProfile& p, const std::string& parameter = "parameter");

/// theta,radial,support,x,y,z: the sampled planar body with world points.
std::string planar_body_csv(const PlanarBody& b);

/// phi,x,y,z
std::string shadow_csv(const ShadowCurve& c);

/// Throws InvalidArgument when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace equichord
