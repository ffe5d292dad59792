#include "catr/statics.hpp"

#include <cmath>

namespace catr {

double composite_curvature(double s, const LoadCase& lc, const SegmentSpec& seg) {
    const double d_o = seg.outer_offset, d_i = seg.inner_offset;
    const double moment = lc.axial_force * (d_o - d_i) + lc.tip_tangent_force * d_o +
                          lc.tip_radial_force * (lc.active_length - s);
    const double rigidity =
        seg.outer.youngs_modulus * (second_moment(seg.inner) + second_moment(seg.outer));
    return moment / rigidity;
}

DeflectionCurve solve_deflection(const LoadCase& lc, const SegmentSpec& seg, int grid) {
    if (grid < 16) throw GridTooSmall("solve_deflection: grid must be >= 16");
    if (!(lc.active_length > 0.0))
        throw InvalidGeometry("solve_deflection: active_length must be > 0");

    const int n = grid;
    const double h = lc.active_length / (n - 1);
    DeflectionCurve curve;
    curve.samples.resize(n);

    // kappa on the grid, then cumulative trapezoid for phi and (x, z)
    std::vector<double> kappa(n);
    for (int k = 0; k < n; ++k) kappa[k] = composite_curvature(k * h, lc, seg);

    double phi = 0.0, x = 0.0, z = 0.0;
    double sin_prev = 0.0, cos_prev = 1.0;
    curve.samples[0] = {0.0, 0.0, 0.0, 0.0, kappa[0]};
    for (int k = 1; k < n; ++k) {
        phi += 0.5 * h * (kappa[k - 1] + kappa[k]);
        const double sin_cur = std::sin(phi), cos_cur = std::cos(phi);
        x += 0.5 * h * (sin_prev + sin_cur);
        z += 0.5 * h * (cos_prev + cos_cur);
        sin_prev = sin_cur;
        cos_prev = cos_cur;
        curve.samples[k] = {k * h, phi, x, z, kappa[k]};
    }
    return curve;
}

InteractionLoad recover_interaction_load(const DeflectionCurve& curve, const LoadCase& lc,
                                         const SegmentSpec& seg) {
    (void)lc;  // the axial term is constant in s and drops out of the derivative
    const int n = curve.grid_size();
    InteractionLoad load;
    load.samples.resize(n);
    if (n < 2) return load;

    const double stiffness = seg.inner.youngs_modulus * second_moment(seg.inner);
    auto kappa = [&](int k) { return curve.samples[k].curvature; };
    auto s_of = [&](int k) { return curve.samples[k].s; };

    for (int k = 0; k < n; ++k) {
        double dk;
        if (k == 0)
            dk = (kappa(1) - kappa(0)) / (s_of(1) - s_of(0));
        else if (k == n - 1)
            dk = (kappa(n - 1) - kappa(n - 2)) / (s_of(n - 1) - s_of(n - 2));
        else
            dk = (kappa(k + 1) - kappa(k - 1)) / (s_of(k + 1) - s_of(k - 1));
        load.samples[k] = {s_of(k), stiffness * dk};
    }
    return load;
}

Eigen::Vector2d tip_from_deflection(const DeflectionCurve& curve) {
    if (curve.samples.empty())
        throw InvalidGeometry("tip_from_deflection: empty curve");
    const auto& last = curve.samples.back();
    return {last.x, last.z};
}

}  // namespace catr
