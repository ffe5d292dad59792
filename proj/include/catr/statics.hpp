#pragma once
#include <vector>

#include <Eigen/Dense>

#include "catr/segment_kinematics.hpp"

namespace catr {

/// Planar tip load case. Forces in N (axial: + push, - pull), lengths in mm.
struct LoadCase {
    double axial_force = 0.0;        // F_A
    double tip_radial_force = 0.0;   // F_ER
    double tip_tangent_force = 0.0;  // F_ET
    double active_length = 0.0;      // L_s, bending backbone length
};

struct DeflectionSample {
    double s;              // arc length from the clamped base (mm)
    double tangent_angle;  // phi(s) (rad)
    double x;              // lateral position (mm)
    double z;              // axial position (mm)
    double curvature;      // kappa(s) (1/mm)
};

struct DeflectionCurve {
    std::vector<DeflectionSample> samples;
    int grid_size() const { return static_cast<int>(samples.size()); }
};

// Distributed inter-tube load, unit-arm convention (N/mm).
struct InteractionSample {
    double s;
    double rho;
};

struct InteractionLoad {
    std::vector<InteractionSample> samples;
};

/// Curvature of the coupled tube pair at arc length s: the tube moments sum,
/// the inter-tube load cancels as action-reaction, and the shared curve obeys
/// kappa = [F_A (d_o - d_i) + F_ET d_o + F_ER (L_s - s)] / (E (I_i + I_o)).
double composite_curvature(double s, const LoadCase& lc, const SegmentSpec& seg);

/// Integrates the tangent angle and position along arc length on a uniform
/// grid (composite trapezoid), clamped at the base: phi(0) = x(0) = z(0) = 0.
/// The tangent-angle formulation stays valid at large deflections.
/// Throws GridTooSmall for grid < 16.
DeflectionCurve solve_deflection(const LoadCase& lc, const SegmentSpec& seg, int grid = 512);

/// Recovers the inter-tube distributed load from the inner-tube moment
/// E I_i kappa(s): rho(s) = d/ds [E I_i kappa(s)], finite-differenced on the
/// curve's grid. Re-integrating rho reproduces the inner-tube moment.
InteractionLoad recover_interaction_load(const DeflectionCurve& curve, const LoadCase& lc,
                                         const SegmentSpec& seg);

/// Tip (x, z) of a deflection curve.
Eigen::Vector2d tip_from_deflection(const DeflectionCurve& curve);

}  // namespace catr
