#include "catr/segment_kinematics.hpp"

#include <cmath>
#include <numbers>

namespace catr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSmallAngle = 1e-6;

// versine(theta)/theta and sinc(theta), stable through theta = 0
void arc_coefficients(double theta, double& a, double& b) {
    if (std::abs(theta) < kSmallAngle) {
        const double t2 = theta * theta;
        a = theta / 2.0 - theta * t2 / 24.0;
        b = 1.0 - t2 / 6.0;
    } else {
        a = (1.0 - std::cos(theta)) / theta;
        b = std::sin(theta) / theta;
    }
}

}  // namespace

SegmentSpec make_segment(const TubeCrossSection& outer, const TubeCrossSection& inner,
                         double steerable_length, double max_bend_angle,
                         double pushpull_min, double pushpull_max) {
    validate(outer);
    validate(inner);
    if (!(inner.outer_radius < outer.inner_radius))
        throw InvalidGeometry("segment: inner tube must fit inside the outer tube");
    if (!(steerable_length > 0.0))
        throw InvalidGeometry("segment: steerable_length must be > 0");
    if (!(max_bend_angle > 0.0))
        throw InvalidGeometry("segment: max_bend_angle must be > 0");

    SegmentSpec seg;
    seg.outer = outer;
    seg.inner = inner;
    seg.steerable_length = steerable_length;
    seg.max_bend_angle = max_bend_angle;
    seg.outer_offset = neutral_offset(outer);
    seg.inner_offset = neutral_offset(inner);
    const double saturation = max_bend_angle * seg.offset_sum();
    seg.pushpull_min = pushpull_min != 0.0 ? pushpull_min : -saturation;
    seg.pushpull_max = pushpull_max != 0.0 ? pushpull_max : saturation;
    if (!(seg.pushpull_min < 0.0 && seg.pushpull_max > 0.0))
        throw InvalidGeometry("segment: push/pull limits must straddle zero");
    return seg;
}

BendableLengths bendable_lengths(double steerable_length, double pushpull) {
    if (!(std::abs(pushpull) < steerable_length))
        throw OutOfStroke("bendable_lengths: |pushpull| must be < steerable_length");
    BendableLengths out;
    if (pushpull < 0.0) {  // pulled
        out.outer_len = steerable_length;
        out.inner_len = steerable_length - std::abs(pushpull);
    } else {  // pushed (or rest)
        out.inner_len = steerable_length;
        out.outer_len = steerable_length - std::abs(pushpull);
    }
    return out;
}

double bending_angle(double pushpull, double outer_offset, double inner_offset) {
    const double d = outer_offset + inner_offset;
    if (!(d > 0.0))
        throw DegenerateGeometry("bending_angle: offset sum d_o + d_i must be > 0");
    return std::abs(pushpull) / d;
}

double backbone_length(double bend_angle, BendMode mode, double outer_len, double inner_len,
                       double outer_offset, double inner_offset) {
    if (mode == BendMode::pushed) return outer_len + bend_angle * outer_offset;
    return inner_len + bend_angle * inner_offset;
}

double wrap_angle_2pi(double a) {
    double t = std::fmod(a, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

double direction_angle(double base_rotation, double pushpull) {
    const double psi = bend_mode(pushpull) == BendMode::pulled ? std::numbers::pi : 0.0;
    return wrap_angle_2pi(base_rotation + psi);
}

ArcState segment_arc(const SegmentSpec& seg, double pushpull, double base_rotation) {
    const auto lengths = bendable_lengths(seg.steerable_length, pushpull);
    ArcState arc;
    arc.bend_angle = bending_angle(pushpull, seg.outer_offset, seg.inner_offset);
    arc.direction_angle = direction_angle(base_rotation, pushpull);
    arc.backbone_length = backbone_length(arc.bend_angle, bend_mode(pushpull), lengths.outer_len,
                                          lengths.inner_len, seg.outer_offset, seg.inner_offset);
    return arc;
}

Eigen::Vector3d tip_position(const ArcState& arc) {
    double a, b;
    arc_coefficients(arc.bend_angle, a, b);
    const double radial = arc.backbone_length * a;
    return {radial * std::cos(arc.direction_angle), radial * std::sin(arc.direction_angle),
            arc.backbone_length * b};
}

Eigen::Isometry3d arc_transform(double insertion, double alpha, double backbone_length,
                                double bend_angle) {
    double a, b;
    arc_coefficients(bend_angle, a, b);
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    t.linear() = (Eigen::AngleAxisd(alpha, Eigen::Vector3d::UnitZ()) *
                  Eigen::AngleAxisd(bend_angle, Eigen::Vector3d::UnitY()))
                     .toRotationMatrix();
    const double radial = backbone_length * a;
    t.translation() = Eigen::Vector3d(radial * std::cos(alpha), radial * std::sin(alpha),
                                      insertion + backbone_length * b);
    return t;
}

}  // namespace catr
