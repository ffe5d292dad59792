#pragma once
#include "catr/errors.hpp"

namespace catr {

// 304 stainless steel, MPa
inline constexpr double kDefaultYoungsModulus = 193000.0;

/// Annular-sector tube cross section: the uncut spine of a slit-patterned tube.
/// Units: radii in mm, uncut_angle in rad, youngs_modulus in MPa.
struct TubeCrossSection {
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    double uncut_angle = 0.0;  // central angle of the uncut area
    double youngs_modulus = kDefaultYoungsModulus;
};

/// Throws InvalidGeometry unless 0 < inner_radius < outer_radius,
/// 0 < uncut_angle <= 2*pi and youngs_modulus > 0.
void validate(const TubeCrossSection& cs);

/// Distance from the tube axis to the centroid of the uncut sector (mm).
/// Zero for a full annulus, strictly decreasing in the uncut angle.
double neutral_offset(const TubeCrossSection& cs);

/// Second moment of the uncut sector about the lateral bending axis through
/// the tube center (mm^4). Strictly increasing in the uncut angle.
double second_moment(const TubeCrossSection& cs);

}  // namespace catr
