#pragma once
#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "catr/cross_section.hpp"

namespace catr {

enum class BendMode { pushed, pulled };

// sign(0) treated as +1: a zero stroke counts as pushed.
inline BendMode bend_mode(double pushpull) {
    return pushpull >= 0.0 ? BendMode::pushed : BendMode::pulled;
}

/// One steerable segment: nested outer/inner tube pair plus actuation limits.
/// Neutral-layer offsets are computed once at construction.
struct SegmentSpec {
    TubeCrossSection outer;
    TubeCrossSection inner;
    double steerable_length = 0.0;  // L (mm)
    double pushpull_min = 0.0;      // mm, < 0
    double pushpull_max = 0.0;      // mm, > 0
    double max_bend_angle = 0.0;    // rad
    double outer_offset = 0.0;      // d_o (mm), cached
    double inner_offset = 0.0;      // d_i (mm), cached

    double offset_sum() const { return outer_offset + inner_offset; }
};

/// Builds a SegmentSpec and caches the neutral offsets. When the push/pull
/// limits are left zero they default to +/- max_bend_angle * (d_o + d_i),
/// the stroke that saturates the bend in either direction.
SegmentSpec make_segment(const TubeCrossSection& outer, const TubeCrossSection& inner,
                         double steerable_length, double max_bend_angle,
                         double pushpull_min = 0.0, double pushpull_max = 0.0);

struct BendableLengths {
    double outer_len = 0.0;  // L_o (mm)
    double inner_len = 0.0;  // L_i (mm)
};

/// Splits the steerable length into per-tube bendable sections. Pulling
/// shortens the inner tube's section, pushing the outer's.
/// Throws OutOfStroke if |pushpull| >= steerable_length.
BendableLengths bendable_lengths(double steerable_length, double pushpull);

/// theta = |pushpull| / (d_o + d_i). Throws DegenerateGeometry if the offset
/// sum is zero.
double bending_angle(double pushpull, double outer_offset, double inner_offset);

/// Arc length of the bent centerline; mode selects which tube's bendable
/// section carries the arc.
double backbone_length(double bend_angle, BendMode mode, double outer_len, double inner_len,
                       double outer_offset, double inner_offset);

/// Bending-plane azimuth: base rotation plus pi when pulled, wrapped to [0, 2*pi).
double direction_angle(double base_rotation, double pushpull);

double wrap_angle_2pi(double a);

struct ArcState {
    double bend_angle = 0.0;       // theta (rad), >= 0
    double direction_angle = 0.0;  // alpha (rad)
    double backbone_length = 0.0;  // L_b (mm)
};

/// Combined arc state of a segment at the given actuation.
ArcState segment_arc(const SegmentSpec& seg, double pushpull, double base_rotation);

/// Tip position of a constant-curvature arc; series limit below theta = 1e-6.
Eigen::Vector3d tip_position(const ArcState& arc);

/// Tz(insertion) * Rz(alpha) * Tx(L/theta) * Ry(theta) * Tx(-L/theta),
/// with the straight-segment limit at theta -> 0.
Eigen::Isometry3d arc_transform(double insertion, double alpha, double backbone_length,
                                double bend_angle);

}  // namespace catr
