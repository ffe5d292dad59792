#pragma once
#include <array>
#include <vector>

#include "catr/cross_section.hpp"
#include "catr/optim.hpp"
#include "catr/segment_kinematics.hpp"

namespace catr {

/// Tenon-mortise slit pattern of one tube. Lengths in mm, angles in rad.
/// slit_count stays a real during search and is rounded on output.
struct SlitDesign {
    double steerable_length = 30.0;  // L, fixed per tube pair
    double uncut_angle = 0.0;        // beta
    double tenon_length = 0.0;       // l_s
    double slit_gap = 0.0;           // d_g
    double slit_count = 0.0;         // N
    int tenon_count = 1;             // n, odd in {1, 3, 5}
    double slit_width = 0.0;         // d_s
    double tenon_height = 0.0;       // d_h
    double tenon_tilt = 0.0;         // theta_s
};

/// Manufacturing box limits for the slit parameters.
struct DesignBounds {
    double tenon_length_min = 0.1, tenon_length_max = 0.7;
    double slit_gap_min = 0.3, slit_gap_max = 0.6;
    double slit_count_min = 1.0, slit_count_max = 1000.0;
    std::vector<int> tenon_counts{1, 3, 5};
    double slit_width_min = 0.03, slit_width_max = 0.06;
    double tenon_height_min = 0.25, tenon_height_max = 0.3;
    double tenon_tilt_min = 25.0 * 3.14159265358979323846 / 180.0;
    double tenon_tilt_max = 60.0 * 3.14159265358979323846 / 180.0;
    double uncut_angle_min = 0.0;
    double uncut_angle_max = 2.0 * 3.14159265358979323846;
};

/// Throws ConfigError naming the offending field when sd violates the bounds.
void validate(const SlitDesign& sd, const DesignBounds& bounds);

/// Slit designs plus tube geometry for a nested pair. The cross sections'
/// uncut angles mirror the slit designs' by construction.
struct SegmentDesign {
    SlitDesign outer_slits, inner_slits;
    TubeCrossSection outer_tube, inner_tube;
};

SegmentDesign make_segment_design(const SlitDesign& outer_slits, const SlitDesign& inner_slits,
                                  double outer_inner_radius, double outer_outer_radius,
                                  double inner_inner_radius, double inner_outer_radius,
                                  double youngs_modulus = kDefaultYoungsModulus);

/// Bend angle at which the outer tube's slits saturate. Pulling buckles the
/// tilted tenon faces, so the pulled angle exceeds the pushed one by
/// 1/cos(theta_s).
double max_bend_angle(const SegmentDesign& sd, BendMode mode);

struct ObjectivePair {
    double f1 = 0.0;  // 1/kappa_max (mm); smaller is more dexterous
    double f2 = 0.0;  // 1/(I_i + I_o) (1/mm^4); smaller is stiffer
};

/// Both objectives, taking the pulled (buckled) bend angle for f1.
ObjectivePair objectives(const SegmentDesign& sd);

/// Per-tube coupling residuals:
///   r1 = (2 l_s - 2 d_h / tan theta_s) n - (2 pi - beta) R_o
///   r2 = N (d_s + d_g) - L
std::array<double, 2> coupling_residuals(const SlitDesign& s, const TubeCrossSection& tube);

/// N_o d_s_o / cos(theta_s_o) - N_i d_s_i; zero when both tubes saturate at
/// the same bend angle.
double inter_tube_residual(const SegmentDesign& sd);

/// Fixed geometry during slit optimization: steerable length and tube radii.
struct FixedGeometry {
    double steerable_length = 30.0;
    double outer_inner_radius = 0.0, outer_outer_radius = 0.0;
    double inner_inner_radius = 0.0, inner_outer_radius = 0.0;
    double youngs_modulus = kDefaultYoungsModulus;
};

struct ParetoPoint {
    SegmentDesign design;
    double f1 = 0.0, f2 = 0.0;
};

struct EpsilonTraceRow {
    double epsilon = 0.0;
    double f1 = 0.0, f2 = 0.0;
    bool feasible = true;
};

enum class DesignStatus { ok, non_converged };

struct ParetoResult {
    std::vector<ParetoPoint> frontier;  // mutually non-dominated
    SegmentDesign chosen;
    ObjectivePair chosen_objectives;
    std::vector<EpsilonTraceRow> epsilon_trace;
    DesignStatus status = DesignStatus::ok;
    double max_constraint_residual = 0.0;
    long evaluations = 0;
};

struct DesignOptions {
    OptimizerOptions optimizer;
    double epsilon0 = 2.0;
    double epsilon_step = 0.01;
    int epsilon_max_iterations = 200;
};

/// Two-stage epsilon-constraint sweep over the slit parameters of a tube
/// pair. The coupling relations are eliminated by substitution, so every
/// emitted design satisfies them to machine precision; the tenon counts are
/// enumerated exhaustively. Throws InfeasibleBounds when no parameter choice
/// satisfies the coupling relations inside the box.
ParetoResult optimize_design(const DesignBounds& bounds, const FixedGeometry& fixed,
                             const DesignOptions& opts);

}  // namespace catr
