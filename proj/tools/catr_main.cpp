#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "catr/config.hpp"
#include "catr/io.hpp"
#include "catr/multiseg.hpp"
#include "catr/slit_design.hpp"
#include "catr/statics.hpp"

namespace {

using catr::format_number;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNotConverged = 2;

struct CliArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> grid;
    std::optional<double> voxel;
};

json vec3_json(const Eigen::Vector3d& v) { return json{v.x(), v.y(), v.z()}; }

void apply_overrides(catr::RobotConfig& cfg, const CliArgs& args) {
    if (args.seed) {
        cfg.seed = *args.seed;
        cfg.design_options.optimizer.seed = *args.seed;
        cfg.resolved["seed"] = *args.seed;
    }
    if (args.voxel) {
        cfg.voxel_size = *args.voxel;
        cfg.resolved["workspace"]["voxel_size"] = *args.voxel;
    }
    if (args.grid) {
        std::vector<int> counts;
        std::string token;
        std::string norm = *args.grid;
        for (auto& c : norm)
            if (c == 'x' || c == 'X') c = ',';
        std::istringstream in(norm);
        while (std::getline(in, token, ','))
            if (!token.empty()) counts.push_back(std::stoi(token));
        if (counts.size() != 5)
            throw catr::ConfigError("--grid expects 5 counts, e.g. 29,48,6,21,24");
        cfg.workspace_grid.proximal_pushpull = counts[0];
        cfg.workspace_grid.proximal_rotation = counts[1];
        cfg.workspace_grid.distal_extension = counts[2];
        cfg.workspace_grid.distal_pushpull = counts[3];
        cfg.workspace_grid.distal_rotation = counts[4];
        cfg.resolved["workspace"]["grid"] = counts;
    }
}

json base_output(const char* command, const catr::RobotConfig& cfg, const char* status) {
    json out;
    out["command"] = command;
    out["status"] = status;
    out["number_format"] = catr::kNumberFormat;
    out["config"] = cfg.resolved;
    return out;
}

void write_json(const std::string& path, const json& doc) {
    catr::write_text_file(path, doc.dump(2) + "\n");
}

std::string out_path(const CliArgs& args, const std::string& name) {
    std::filesystem::create_directories(args.out_dir);
    return (std::filesystem::path(args.out_dir) / name).string();
}

json slit_json(const catr::SlitDesign& s) {
    return json{{"steerable_length", s.steerable_length},
                {"uncut_angle", s.uncut_angle},
                {"tenon_length", s.tenon_length},
                {"slit_gap", s.slit_gap},
                {"slit_count", s.slit_count},
                {"slit_count_rounded", std::llround(s.slit_count)},
                {"tenon_count", s.tenon_count},
                {"slit_width", s.slit_width},
                {"tenon_height", s.tenon_height},
                {"tenon_tilt", s.tenon_tilt}};
}

json residuals_json(const catr::SegmentDesign& d) {
    const auto ro = catr::coupling_residuals(d.outer_slits, d.outer_tube);
    const auto ri = catr::coupling_residuals(d.inner_slits, d.inner_tube);
    return json{{"outer_circumferential", ro[0]},
                {"outer_axial", ro[1]},
                {"inner_circumferential", ri[0]},
                {"inner_axial", ri[1]},
                {"inter_tube", catr::inter_tube_residual(d)}};
}

int run_design(const catr::RobotConfig& cfg, const CliArgs& args) {
    json out;
    bool converged = true;
    const struct {
        const char* name;
        const catr::FixedGeometry* fixed;
        std::uint64_t seed_salt;
    } segments[] = {{"proximal", &cfg.design_proximal, 0}, {"distal", &cfg.design_distal, 1}};

    for (const auto& seg : segments) {
        catr::DesignOptions opts = cfg.design_options;
        opts.optimizer.seed = cfg.seed + seg.seed_salt;
        const auto result = catr::optimize_design(cfg.design_bounds, *seg.fixed, opts);
        converged = converged && result.status == catr::DesignStatus::ok;

        json seg_json;
        seg_json["outer_tube"] = slit_json(result.chosen.outer_slits);
        seg_json["inner_tube"] = slit_json(result.chosen.inner_slits);
        seg_json["f1"] = result.chosen_objectives.f1;
        seg_json["f2"] = result.chosen_objectives.f2;
        seg_json["max_bend_angle_pulled"] = catr::max_bend_angle(result.chosen, catr::BendMode::pulled);
        seg_json["max_bend_angle_pushed"] = catr::max_bend_angle(result.chosen, catr::BendMode::pushed);
        seg_json["residuals"] = residuals_json(result.chosen);

        catr::SegmentDesign rounded = result.chosen;
        rounded.outer_slits.slit_count = std::llround(rounded.outer_slits.slit_count);
        rounded.inner_slits.slit_count = std::llround(rounded.inner_slits.slit_count);
        seg_json["residuals_with_rounded_counts"] = residuals_json(rounded);

        json frontier = json::array();
        for (const auto& p : result.frontier) frontier.push_back(json{{"f1", p.f1}, {"f2", p.f2}});
        seg_json["frontier"] = frontier;
        seg_json["status"] = result.status == catr::DesignStatus::ok ? "ok" : "non_converged";
        seg_json["evaluations"] = result.evaluations;
        out[seg.name] = seg_json;

        catr::CsvWriter trace(out_path(args, std::string("design_trace_") + seg.name + ".csv"),
                              {"epsilon", "f1", "f2", "feasible"});
        for (const auto& row : result.epsilon_trace)
            trace.row({row.epsilon, row.f1, row.f2, row.feasible ? 1.0 : 0.0});
    }

    json doc = base_output("design", cfg, converged ? "ok" : "non_converged");
    doc.update(out);
    write_json(out_path(args, "design.json"), doc);
    return converged ? kExitOk : kExitNotConverged;
}

int run_fk(const catr::RobotConfig& cfg, const CliArgs& args) {
    const catr::Pose pose = catr::forward_kinematics(cfg.fk_actuation, cfg.robot);
    json doc = base_output("fk", cfg, "ok");
    doc["pose"]["position"] = vec3_json(pose.position);
    doc["pose"]["pointing"] = vec3_json(pose.pointing());
    json rows = json::array();
    for (int r = 0; r < 3; ++r)
        rows.push_back(json{pose.orientation(r, 0), pose.orientation(r, 1), pose.orientation(r, 2)});
    doc["pose"]["orientation"] = rows;
    const Eigen::Vector3d euler = pose.orientation.eulerAngles(2, 1, 0);
    doc["pose"]["euler_zyx"] = vec3_json(euler);
    write_json(out_path(args, "fk.json"), doc);
    return kExitOk;
}

int run_ik(const catr::RobotConfig& cfg, const CliArgs& args) {
    if (!cfg.ik_target) throw catr::ConfigError("config: ik.target_position is required for ik");
    catr::OptimizerOptions opts;
    opts.seed = cfg.seed;
    const auto result =
        catr::inverse_kinematics(*cfg.ik_target, cfg.robot, cfg.ik_prev, opts, cfg.ik_weights);

    json doc = base_output("ik", cfg, result.reachable ? "ok" : "non_converged");
    doc["actuation"] = {{"proximal_insertion", result.state.proximal_insertion},
                        {"proximal_pushpull", result.state.proximal_pushpull},
                        {"proximal_rotation", result.state.proximal_rotation},
                        {"distal_extension", result.state.distal_extension},
                        {"distal_pushpull", result.state.distal_pushpull},
                        {"distal_rotation", result.state.distal_rotation}};
    doc["position_residual"] = result.position_residual;
    doc["direction_residual"] = result.direction_residual;
    doc["reachable"] = result.reachable;
    doc["evaluations"] = result.evaluations;
    write_json(out_path(args, "ik.json"), doc);

    catr::CsvWriter trace(out_path(args, "ik_trace.csv"), {"generation", "best_loss"});
    for (std::size_t g = 0; g < result.loss_history.size(); ++g)
        trace.row({static_cast<double>(g), result.loss_history[g]});
    return result.reachable ? kExitOk : kExitNotConverged;
}

int run_workspace(const catr::RobotConfig& cfg, const CliArgs& args) {
    const auto cloud =
        catr::sample_workspace(cfg.robot, cfg.workspace_grid, cfg.seed, cfg.voxel_size);

    catr::CsvWriter csv(out_path(args, "workspace_cloud.csv"),
                        {"x", "y", "z", "dir_x", "dir_y", "dir_z"});
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        csv.row({cloud.points[i].x(), cloud.points[i].y(), cloud.points[i].z(),
                 cloud.directions[i].x(), cloud.directions[i].y(), cloud.directions[i].z()});

    json doc = base_output("workspace", cfg, "ok");
    doc["voxel_size"] = cloud.voxel_size;
    doc["occupied_voxels"] = cloud.voxels.size();
    doc["samples"] = cloud.points.size();
    doc["volume_cm3"] = cloud.volume_cm3;
    doc["volume_band_cm3"] = cloud.volume_band_cm3;
    write_json(out_path(args, "workspace.json"), doc);
    return kExitOk;
}

int run_statics(const catr::RobotConfig& cfg, const CliArgs& args) {
    const auto& seg = cfg.statics_on_proximal ? cfg.robot.proximal : cfg.robot.distal;
    const auto curve = catr::solve_deflection(cfg.statics_load, seg, cfg.statics_grid);
    const auto rho = catr::recover_interaction_load(curve, cfg.statics_load, seg);

    catr::CsvWriter csv(out_path(args, "statics_deflection.csv"), {"s", "phi", "x", "z", "kappa"});
    for (const auto& s : curve.samples) csv.row({s.s, s.tangent_angle, s.x, s.z, s.curvature});
    catr::CsvWriter rho_csv(out_path(args, "statics_interaction.csv"), {"s", "rho"});
    for (const auto& s : rho.samples) rho_csv.row({s.s, s.rho});

    const auto tip = catr::tip_from_deflection(curve);
    json doc = base_output("statics", cfg, "ok");
    doc["tip"] = {tip.x(), tip.y()};
    doc["grid"] = curve.grid_size();
    write_json(out_path(args, "statics.json"), doc);
    return kExitOk;
}

int run_dexterity(const catr::RobotConfig& cfg, const CliArgs& args) {
    const auto cloud =
        catr::sample_workspace(cfg.robot, cfg.workspace_grid, cfg.seed, cfg.voxel_size);
    json doc = base_output("dexterity", cfg, "ok");
    doc["at"] = vec3_json(cfg.dexterity_at);
    const double dex = catr::dexterity(cloud, cfg.dexterity_at);
    doc["dexterity"] = dex;
    const auto it = cloud.voxels.find(
        catr::WorkspaceCloud::voxel_key(cfg.dexterity_at, cloud.voxel_size));
    doc["samples_in_voxel"] = it == cloud.voxels.end() ? 0 : it->second.size();
    write_json(out_path(args, "dexterity.json"), doc);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coaxial antagonistic tubular robot toolkit"};
    app.require_subcommand(1);

    CliArgs args;
    app.add_option("--config", args.config_path, "robot configuration JSON")->required();
    app.add_option("--out", args.out_dir, "output directory (default .)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override the config seed");
    std::string grid_value;
    auto* grid_opt = app.add_option("--grid", grid_value, "workspace grid counts, e.g. 29,48,6,21,24");
    double voxel_value = 0.0;
    auto* voxel_opt = app.add_option("--voxel", voxel_value, "voxel size in mm");

    auto* design = app.add_subcommand("design", "optimize the slit patterns");
    auto* fk = app.add_subcommand("fk", "forward kinematics of one actuation state");
    auto* ik = app.add_subcommand("ik", "inverse kinematics toward a task target");
    auto* workspace = app.add_subcommand("workspace", "sample the reachable tip cloud");
    auto* statics = app.add_subcommand("statics", "tip-load deflection curve");
    auto* dexterity = app.add_subcommand("dexterity", "pointing dexterity at a workspace point");

    CLI11_PARSE(app, argc, argv);

    try {
        catr::RobotConfig cfg = catr::load_config_file(args.config_path);
        if (*seed_opt) args.seed = seed_value;
        if (*grid_opt) args.grid = grid_value;
        if (*voxel_opt) args.voxel = voxel_value;
        apply_overrides(cfg, args);

        if (design->parsed()) return run_design(cfg, args);
        if (fk->parsed()) return run_fk(cfg, args);
        if (ik->parsed()) return run_ik(cfg, args);
        if (workspace->parsed()) return run_workspace(cfg, args);
        if (statics->parsed()) return run_statics(cfg, args);
        if (dexterity->parsed()) return run_dexterity(cfg, args);
        std::cerr << "unknown command\n";
        return kExitValidation;
    } catch (const catr::InfeasibleBounds& e) {
        std::cerr << e.what() << "\n";
        return kExitNotConverged;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }
}
