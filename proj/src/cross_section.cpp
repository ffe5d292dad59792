#include "catr/cross_section.hpp"

#include <cmath>
#include <numbers>

namespace catr {

void validate(const TubeCrossSection& cs) {
    if (!(cs.inner_radius > 0.0))
        throw InvalidGeometry("cross-section: inner_radius must be > 0");
    if (!(cs.inner_radius < cs.outer_radius))
        throw InvalidGeometry("cross-section: inner_radius must be < outer_radius");
    if (!(cs.uncut_angle > 0.0 && cs.uncut_angle <= 2.0 * std::numbers::pi))
        throw InvalidGeometry("cross-section: uncut_angle must be in (0, 2*pi]");
    if (!(cs.youngs_modulus > 0.0))
        throw InvalidGeometry("cross-section: youngs_modulus must be > 0");
}

double neutral_offset(const TubeCrossSection& cs) {
    validate(cs);
    const double ri = cs.inner_radius, ro = cs.outer_radius, beta = cs.uncut_angle;
    const double num = (4.0 / 3.0) * (ro * ro * ro - ri * ri * ri) * std::sin(beta / 2.0);
    const double den = (ro * ro - ri * ri) * beta;
    return num / den;
}

double second_moment(const TubeCrossSection& cs) {
    validate(cs);
    const double ri = cs.inner_radius, ro = cs.outer_radius, beta = cs.uncut_angle;
    const double r4 = (ro * ro * ro * ro - ri * ri * ri * ri) / 4.0;
    return r4 * (beta - std::sin(beta)) / 2.0;
}

}  // namespace catr
