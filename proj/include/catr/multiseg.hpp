#pragma once
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "catr/optim.hpp"
#include "catr/segment_kinematics.hpp"

namespace catr {

/// Six actuation inputs of the dual-segment arm. Lengths in mm, angles in rad.
struct ActuationState {
    double proximal_insertion = 0.0;  // q_p, >= 0
    double proximal_pushpull = 0.0;   // D_p of the proximal segment
    double proximal_rotation = 0.0;   // theta_M of the proximal segment
    double distal_extension = 0.0;    // q_d, negative = retracted into the proximal
    double distal_pushpull = 0.0;
    double distal_rotation = 0.0;
};

struct ActuationBounds {
    double proximal_insertion_max = 0.0;  // q_p in [0, max]
    double distal_extension_min = 0.0;    // q_d lower bound (typically -L_p)
    double distal_extension_max = 0.0;
};

struct DualSegmentRobot {
    SegmentSpec proximal;
    SegmentSpec distal;
    ActuationBounds bounds;
};

struct Pose {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d pointing() const { return orientation.col(2); }
};

struct TaskTarget {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Vector3d pointing = Eigen::Vector3d::UnitZ();  // unit tip z-axis
};

void validate(const TaskTarget& target);

/// Throws OutOfBounds when A violates the robot's actuation box. Base
/// rotations are 2*pi-periodic and wrapped rather than rejected.
void validate(const ActuationState& a, const DualSegmentRobot& robot);

/// Bending-plane azimuth of the distal segment: locked to the proximal's
/// while retracted (q_d < 0), free otherwise.
double distal_direction_angle(const ActuationState& a, const DualSegmentRobot& robot);

/// Chains the two constant-curvature segment transforms.
Pose forward_kinematics(const ActuationState& a, const DualSegmentRobot& robot);

struct IkWeights {
    double direction = 10.0;        // mm per unit of (1 - cos) pointing error
    double pushpull_change = 0.1;   // per mm of |D_p - D_p(prev)|
    double reach_tolerance = 1.0;   // mm, position residual for reachable=true
};

struct IkResult {
    ActuationState state;
    double position_residual = 0.0;   // mm
    double direction_residual = 0.0;  // 1 - cos(angle)
    bool reachable = false;
    std::vector<double> loss_history;  // best loss per generation, then the polished value
    long evaluations = 0;
};

/// Seeded genetic search over the 6-dim actuation box followed by a
/// pattern-search polish. Always returns the best state found.
IkResult inverse_kinematics(const TaskTarget& target, const DualSegmentRobot& robot,
                            const ActuationState& prev, const OptimizerOptions& opts,
                            const IkWeights& weights = {});

/// Per-DoF sample counts for workspace enumeration; q_p stays inactive.
/// A count of 1 pins the DoF at its range midpoint.
struct WorkspaceGrid {
    int proximal_pushpull = 29;
    int proximal_rotation = 48;
    int distal_extension = 6;
    int distal_pushpull = 21;
    int distal_rotation = 24;
    double distal_extension_min = 0.0;  // sampling range may be narrower than the IK box
    double distal_extension_max = 10.0;
};

struct WorkspaceCloud {
    std::vector<Eigen::Vector3d> points;
    std::vector<Eigen::Vector3d> directions;  // tip pointing per sample
    double voxel_size = 2.0;                  // mm
    double volume_cm3 = 0.0;
    double volume_band_cm3 = 0.0;  // one-voxel-shell uncertainty
    std::unordered_map<std::int64_t, std::vector<std::int32_t>> voxels;  // key -> sample indices

    static std::int64_t voxel_key(const Eigen::Vector3d& p, double voxel);
};

/// Enumerates the actuation grid, records tip positions and pointing
/// directions, and voxelizes. Deterministic; the seed is accepted for
/// interface stability but grid enumeration draws nothing from it.
WorkspaceCloud sample_workspace(const DualSegmentRobot& robot, const WorkspaceGrid& grid,
                                std::uint64_t seed, double voxel_size = 2.0);

/// Normalized spherical-cap area of the recorded pointing directions at the
/// voxel containing `at`: (1 - cos(phi_max)) / 2, phi_max measured about the
/// mean direction. Throws EmptyVoxel when no sample landed there.
double dexterity(const WorkspaceCloud& cloud, const Eigen::Vector3d& at);

}  // namespace catr
