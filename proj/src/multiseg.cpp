#include "catr/multiseg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace catr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> grid_values(int count, double lo, double hi) {
    if (count <= 1) return {0.5 * (lo + hi)};
    std::vector<double> v(count);
    for (int k = 0; k < count; ++k) v[k] = lo + (hi - lo) * k / (count - 1);
    return v;
}

// base rotations are periodic: [0, 2*pi) without the duplicate endpoint
std::vector<double> rotation_values(int count) {
    std::vector<double> v(std::max(count, 1));
    for (int k = 0; k < static_cast<int>(v.size()); ++k) v[k] = kTwoPi * k / v.size();
    return v;
}

}  // namespace

void validate(const TaskTarget& target) {
    if (std::abs(target.pointing.norm() - 1.0) > 1e-9)
        throw InvalidGeometry("task target: pointing must be a unit vector");
}

void validate(const ActuationState& a, const DualSegmentRobot& robot) {
    auto fail = [](const char* field, double v, double lo, double hi) {
        std::ostringstream msg;
        msg << "actuation: " << field << " = " << v << " outside [" << lo << ", " << hi << "]";
        throw OutOfBounds(msg.str());
    };
    if (a.proximal_insertion < 0.0 || a.proximal_insertion > robot.bounds.proximal_insertion_max)
        fail("proximal_insertion", a.proximal_insertion, 0.0, robot.bounds.proximal_insertion_max);
    if (a.distal_extension < robot.bounds.distal_extension_min ||
        a.distal_extension > robot.bounds.distal_extension_max)
        fail("distal_extension", a.distal_extension, robot.bounds.distal_extension_min,
             robot.bounds.distal_extension_max);
    if (a.proximal_pushpull < robot.proximal.pushpull_min ||
        a.proximal_pushpull > robot.proximal.pushpull_max)
        fail("proximal_pushpull", a.proximal_pushpull, robot.proximal.pushpull_min,
             robot.proximal.pushpull_max);
    if (a.distal_pushpull < robot.distal.pushpull_min ||
        a.distal_pushpull > robot.distal.pushpull_max)
        fail("distal_pushpull", a.distal_pushpull, robot.distal.pushpull_min,
             robot.distal.pushpull_max);
}

double distal_direction_angle(const ActuationState& a, const DualSegmentRobot& robot) {
    (void)robot;
    if (a.distal_extension < 0.0)
        return direction_angle(a.proximal_rotation, a.proximal_pushpull);
    return direction_angle(a.distal_rotation, a.distal_pushpull);
}

Pose forward_kinematics(const ActuationState& a, const DualSegmentRobot& robot) {
    validate(a, robot);

    const ArcState proximal = segment_arc(robot.proximal, a.proximal_pushpull, a.proximal_rotation);
    ArcState distal = segment_arc(robot.distal, a.distal_pushpull, a.distal_rotation);
    distal.direction_angle = distal_direction_angle(a, robot);

    const Eigen::Isometry3d chain =
        arc_transform(a.proximal_insertion, proximal.direction_angle, proximal.backbone_length,
                      proximal.bend_angle) *
        arc_transform(a.distal_extension, distal.direction_angle, distal.backbone_length,
                      distal.bend_angle);

    Pose pose;
    pose.position = chain.translation();
    pose.orientation = chain.linear();
    return pose;
}

IkResult inverse_kinematics(const TaskTarget& target, const DualSegmentRobot& robot,
                            const ActuationState& prev, const OptimizerOptions& opts,
                            const IkWeights& weights) {
    validate(target);
    validate(prev, robot);

    Box box;
    box.lo = {0.0, robot.proximal.pushpull_min, 0.0, robot.bounds.distal_extension_min,
              robot.distal.pushpull_min, 0.0};
    box.hi = {robot.bounds.proximal_insertion_max, robot.proximal.pushpull_max, kTwoPi,
              robot.bounds.distal_extension_max, robot.distal.pushpull_max, kTwoPi};

    auto to_state = [](const std::vector<double>& x) {
        return ActuationState{x[0], x[1], x[2], x[3], x[4], x[5]};
    };
    const Objective loss = [&](const std::vector<double>& x) {
        const Pose pose = forward_kinematics(to_state(x), robot);
        const double pos = (pose.position - target.position).norm();
        const double dir = 1.0 - pose.pointing().dot(target.pointing);
        const double snap = std::abs(x[1] - prev.proximal_pushpull) +
                            std::abs(x[4] - prev.distal_pushpull);
        return pos + weights.direction * dir + weights.pushpull_change * snap;
    };

    auto ga = ga_minimize(loss, box, {}, opts);
    // warm start: keep the previous actuation in contention with the GA's best
    std::vector<double> prev_x{prev.proximal_insertion, prev.proximal_pushpull,
                               prev.proximal_rotation,  prev.distal_extension,
                               prev.distal_pushpull,    prev.distal_rotation};
    const double prev_loss = loss(prev_x);
    std::vector<double> start = ga.best_point;
    double start_val = ga.best_value;
    if (prev_loss < start_val) {
        start = prev_x;
        start_val = prev_loss;
    }
    auto polished = pattern_search(loss, box, start, 1200, 0.02);

    IkResult out;
    out.state = to_state(polished.best_point);
    const Pose pose = forward_kinematics(out.state, robot);
    out.position_residual = (pose.position - target.position).norm();
    out.direction_residual = 1.0 - pose.pointing().dot(target.pointing);
    out.reachable = out.position_residual <= weights.reach_tolerance;
    out.loss_history = ga.history;
    out.loss_history.push_back(polished.best_value);
    out.evaluations = ga.evaluations + polished.evaluations + 1;
    return out;
}

std::int64_t WorkspaceCloud::voxel_key(const Eigen::Vector3d& p, double voxel) {
    const auto ix = static_cast<std::int64_t>(std::floor(p.x() / voxel));
    const auto iy = static_cast<std::int64_t>(std::floor(p.y() / voxel));
    const auto iz = static_cast<std::int64_t>(std::floor(p.z() / voxel));
    constexpr std::int64_t offset = 1 << 20;
    return ((ix + offset) << 42) | ((iy + offset) << 21) | (iz + offset);
}

WorkspaceCloud sample_workspace(const DualSegmentRobot& robot, const WorkspaceGrid& grid,
                                std::uint64_t seed, double voxel_size) {
    (void)seed;
    for (int c : {grid.proximal_pushpull, grid.proximal_rotation, grid.distal_extension,
                  grid.distal_pushpull, grid.distal_rotation})
        if (c < 1) throw GridTooSmall("sample_workspace: grid counts must be >= 1");

    const auto dp_p = grid_values(grid.proximal_pushpull, robot.proximal.pushpull_min,
                                  robot.proximal.pushpull_max);
    const auto rot_p = rotation_values(grid.proximal_rotation);
    const auto ext_d =
        grid_values(grid.distal_extension, grid.distal_extension_min, grid.distal_extension_max);
    const auto dp_d = grid_values(grid.distal_pushpull, robot.distal.pushpull_min,
                                  robot.distal.pushpull_max);
    const auto rot_d = rotation_values(grid.distal_rotation);

    WorkspaceCloud cloud;
    cloud.voxel_size = voxel_size;
    const std::size_t total = dp_p.size() * rot_p.size() * ext_d.size() * dp_d.size() * rot_d.size();
    cloud.points.reserve(total);
    cloud.directions.reserve(total);

    // distal tips in the proximal tip frame, reused across the proximal sweep
    struct LocalTip {
        Eigen::Vector3d p;
        Eigen::Vector3d dir;
    };
    std::vector<LocalTip> distal_free, distal_locked;  // locked: alpha_d = alpha_p (q_d < 0)
    std::vector<bool> ext_locked(ext_d.size());
    for (std::size_t ie = 0; ie < ext_d.size(); ++ie) ext_locked[ie] = ext_d[ie] < 0.0;

    for (double qd : ext_d) {
        for (double dpd : dp_d) {
            if (qd < 0.0) {
                // direction locked to alpha_p: store the planar arc, rotate later
                const ArcState arc = segment_arc(robot.distal, dpd, 0.0);
                const Eigen::Isometry3d t = arc_transform(qd, 0.0, arc.backbone_length, arc.bend_angle);
                distal_locked.push_back({t.translation(), t.linear().col(2)});
            } else {
                for (double rd : rot_d) {
                    const ArcState arc = segment_arc(robot.distal, dpd, rd);
                    const Eigen::Isometry3d t =
                        arc_transform(qd, arc.direction_angle, arc.backbone_length, arc.bend_angle);
                    distal_free.push_back({t.translation(), t.linear().col(2)});
                }
            }
        }
    }
    // re-walk the extension grid so free and locked tips stay grouped per q_d
    std::size_t free_cursor = 0, locked_cursor = 0;

    for (double dpp : dp_p) {
        for (double rp : rot_p) {
            const ArcState arc_p = segment_arc(robot.proximal, dpp, rp);
            const Eigen::Isometry3d proximal =
                arc_transform(0.0, arc_p.direction_angle, arc_p.backbone_length, arc_p.bend_angle);
            const Eigen::Matrix3d rz =
                Eigen::AngleAxisd(arc_p.direction_angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
            free_cursor = locked_cursor = 0;
            for (std::size_t ie = 0; ie < ext_d.size(); ++ie) {
                if (ext_locked[ie]) {
                    for (std::size_t k = 0; k < dp_d.size(); ++k) {
                        const auto& lt = distal_locked[locked_cursor + k];
                        cloud.points.push_back(proximal * (rz * lt.p));
                        cloud.directions.push_back(proximal.linear() * (rz * lt.dir));
                    }
                    locked_cursor += dp_d.size();
                } else {
                    for (std::size_t k = 0; k < dp_d.size() * rot_d.size(); ++k) {
                        const auto& lt = distal_free[free_cursor + k];
                        cloud.points.push_back(proximal * lt.p);
                        cloud.directions.push_back(proximal.linear() * lt.dir);
                    }
                    free_cursor += dp_d.size() * rot_d.size();
                }
            }
        }
    }

    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        cloud.voxels[WorkspaceCloud::voxel_key(cloud.points[i], voxel_size)].push_back(
            static_cast<std::int32_t>(i));

    const double voxel_cm3 = voxel_size * voxel_size * voxel_size / 1000.0;
    cloud.volume_cm3 = static_cast<double>(cloud.voxels.size()) * voxel_cm3;

    // one-voxel-shell band: occupied voxels with at least one empty face neighbor
    std::size_t shell = 0;
    constexpr std::int64_t dx = (std::int64_t{1} << 42), dy = (std::int64_t{1} << 21), dz = 1;
    for (const auto& [key, idx] : cloud.voxels) {
        for (std::int64_t nb : {key + dx, key - dx, key + dy, key - dy, key + dz, key - dz}) {
            if (!cloud.voxels.count(nb)) {
                ++shell;
                break;
            }
        }
    }
    cloud.volume_band_cm3 = static_cast<double>(shell) * voxel_cm3;
    return cloud;
}

double dexterity(const WorkspaceCloud& cloud, const Eigen::Vector3d& at) {
    const auto it = cloud.voxels.find(WorkspaceCloud::voxel_key(at, cloud.voxel_size));
    if (it == cloud.voxels.end() || it->second.empty())
        throw EmptyVoxel("dexterity: no recorded direction at the queried voxel");

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (std::int32_t i : it->second) mean += cloud.directions[i];
    const double norm = mean.norm();
    if (norm == 0.0) return 1.0;  // directions cancel: the cap closes into the full sphere
    mean /= norm;

    double min_cos = 1.0;
    for (std::int32_t i : it->second)
        min_cos = std::min(min_cos, mean.dot(cloud.directions[i].normalized()));
    return (1.0 - min_cos) / 2.0;
}

}  // namespace catr
