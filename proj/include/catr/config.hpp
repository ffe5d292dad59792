#pragma once
#include <optional>
#include <string>

#include <json.hpp>

#include "catr/multiseg.hpp"
#include "catr/slit_design.hpp"
#include "catr/statics.hpp"

namespace catr {

/// Everything a run needs, resolved from a single JSON document. Lengths are
/// mm, forces N, moduli MPa; angles are rad unless the key carries a _deg
/// suffix.
struct RobotConfig {
    DualSegmentRobot robot;
    std::uint64_t seed = 1;

    // workspace sampling
    WorkspaceGrid workspace_grid;
    double voxel_size = 2.0;

    // inverse kinematics
    IkWeights ik_weights;
    std::optional<TaskTarget> ik_target;
    ActuationState ik_prev;

    // forward kinematics
    ActuationState fk_actuation;

    // statics: which segment and what loads
    bool statics_on_proximal = true;
    LoadCase statics_load;  // active_length filled from the segment when 0
    int statics_grid = 512;

    // slit design optimization
    DesignBounds design_bounds;
    FixedGeometry design_proximal, design_distal;
    DesignOptions design_options;

    // dexterity query point
    Eigen::Vector3d dexterity_at = Eigen::Vector3d::Zero();

    nlohmann::json resolved;  // defaults filled in, echoed into every output
};

/// Parses and validates a config document. Validation errors name the
/// offending field and bound (ConfigError).
RobotConfig load_config(const nlohmann::json& doc);
RobotConfig load_config_file(const std::string& path);

}  // namespace catr
