#include "catr/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace catr {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config: " + field + ": " + why);
}

const json& require(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key)) fail(ctx + "." + key, "missing required field");
    return j.at(key);
}

double number(const json& j, const std::string& ctx) {
    if (!j.is_number()) fail(ctx, "expected a number");
    return j.get<double>();
}

double get_number(const json& j, const std::string& key, double def, const std::string& ctx) {
    if (!j.contains(key)) return def;
    return number(j.at(key), ctx + "." + key);
}

// angles are rad by default; an explicit _deg suffix converts
double get_angle(const json& j, const std::string& key, double def, const std::string& ctx) {
    const std::string deg_key = key + "_deg";
    if (j.contains(key) && j.contains(deg_key))
        fail(ctx + "." + key, "give either the rad field or the _deg field, not both");
    if (j.contains(deg_key))
        return number(j.at(deg_key), ctx + "." + deg_key) * std::numbers::pi / 180.0;
    if (j.contains(key)) return number(j.at(key), ctx + "." + key);
    return def;
}

TubeCrossSection parse_tube(const json& j, double youngs_modulus, const std::string& ctx) {
    TubeCrossSection cs;
    cs.inner_radius = number(require(j, "inner_radius", ctx), ctx + ".inner_radius");
    cs.outer_radius = number(require(j, "outer_radius", ctx), ctx + ".outer_radius");
    cs.uncut_angle = get_angle(j, "uncut_angle", 0.0, ctx);
    cs.youngs_modulus = get_number(j, "youngs_modulus", youngs_modulus, ctx);
    return cs;
}

SlitDesign parse_slits(const json& j, double steerable_length, const std::string& ctx) {
    SlitDesign sd;
    sd.steerable_length = steerable_length;
    sd.uncut_angle = get_angle(j, "uncut_angle", 0.0, ctx);
    sd.tenon_length = number(require(j, "tenon_length", ctx), ctx + ".tenon_length");
    sd.slit_gap = number(require(j, "slit_gap", ctx), ctx + ".slit_gap");
    sd.slit_count = number(require(j, "slit_count", ctx), ctx + ".slit_count");
    sd.tenon_count = require(j, "tenon_count", ctx).get<int>();
    sd.slit_width = number(require(j, "slit_width", ctx), ctx + ".slit_width");
    sd.tenon_height = number(require(j, "tenon_height", ctx), ctx + ".tenon_height");
    sd.tenon_tilt = get_angle(j, "tenon_tilt", 0.0, ctx);
    return sd;
}

ActuationState parse_actuation(const json& j, const std::string& ctx) {
    ActuationState a;
    a.proximal_insertion = get_number(j, "proximal_insertion", 0.0, ctx);
    a.proximal_pushpull = get_number(j, "proximal_pushpull", 0.0, ctx);
    a.proximal_rotation = get_angle(j, "proximal_rotation", 0.0, ctx);
    a.distal_extension = get_number(j, "distal_extension", 0.0, ctx);
    a.distal_pushpull = get_number(j, "distal_pushpull", 0.0, ctx);
    a.distal_rotation = get_angle(j, "distal_rotation", 0.0, ctx);
    return a;
}

json actuation_json(const ActuationState& a) {
    return json{{"proximal_insertion", a.proximal_insertion},
                {"proximal_pushpull", a.proximal_pushpull},
                {"proximal_rotation", a.proximal_rotation},
                {"distal_extension", a.distal_extension},
                {"distal_pushpull", a.distal_pushpull},
                {"distal_rotation", a.distal_rotation}};
}

struct ParsedSegment {
    SegmentSpec spec;
    std::optional<SegmentDesign> design;
    double steerable_length = 0.0;
};

ParsedSegment parse_segment(const json& j, double youngs_modulus, const std::string& ctx) {
    ParsedSegment out;
    out.steerable_length = number(require(j, "steerable_length", ctx), ctx + ".steerable_length");

    TubeCrossSection outer = parse_tube(require(j, "outer_tube", ctx), youngs_modulus, ctx + ".outer_tube");
    TubeCrossSection inner = parse_tube(require(j, "inner_tube", ctx), youngs_modulus, ctx + ".inner_tube");

    if (j.contains("outer_slits") != j.contains("inner_slits"))
        fail(ctx, "give slit designs for both tubes or neither");
    if (j.contains("outer_slits")) {
        SlitDesign so = parse_slits(j.at("outer_slits"), out.steerable_length, ctx + ".outer_slits");
        SlitDesign si = parse_slits(j.at("inner_slits"), out.steerable_length, ctx + ".inner_slits");
        outer.uncut_angle = so.uncut_angle;
        inner.uncut_angle = si.uncut_angle;
        out.design = make_segment_design(so, si, outer.inner_radius, outer.outer_radius,
                                         inner.inner_radius, inner.outer_radius, youngs_modulus);
    }

    double theta_max = get_angle(j, "max_bend_angle", 0.0, ctx);
    if (theta_max == 0.0) {
        if (!out.design) fail(ctx + ".max_bend_angle", "required unless slit designs are given");
        theta_max = max_bend_angle(*out.design, BendMode::pushed);
    }
    const double pp_min = get_number(j, "pushpull_min", 0.0, ctx);
    const double pp_max = get_number(j, "pushpull_max", 0.0, ctx);

    try {
        out.spec = make_segment(outer, inner, out.steerable_length, theta_max, pp_min, pp_max);
    } catch (const InvalidGeometry& e) {
        fail(ctx, e.what());
    }
    return out;
}

json tube_json(const TubeCrossSection& cs) {
    return json{{"inner_radius", cs.inner_radius},
                {"outer_radius", cs.outer_radius},
                {"uncut_angle", cs.uncut_angle},
                {"youngs_modulus", cs.youngs_modulus}};
}

}  // namespace

RobotConfig load_config(const nlohmann::json& doc) {
    RobotConfig cfg;
    cfg.seed = doc.contains("seed") ? doc.at("seed").get<std::uint64_t>() : 1;
    const double youngs_modulus =
        doc.contains("material")
            ? get_number(doc.at("material"), "youngs_modulus", kDefaultYoungsModulus, "material")
            : kDefaultYoungsModulus;

    const auto proximal = parse_segment(require(doc, "proximal", "config"), youngs_modulus, "proximal");
    const auto distal = parse_segment(require(doc, "distal", "config"), youngs_modulus, "distal");
    cfg.robot.proximal = proximal.spec;
    cfg.robot.distal = distal.spec;
    if (!(distal.spec.outer.outer_radius < proximal.spec.inner.inner_radius))
        fail("distal.outer_tube.outer_radius",
             "distal segment must pass through the proximal inner tube");

    const json actuation = doc.value("actuation", json::object());
    cfg.robot.bounds.proximal_insertion_max =
        get_number(actuation, "proximal_insertion_max", 0.0, "actuation");
    cfg.robot.bounds.distal_extension_min =
        get_number(actuation, "distal_extension_min", -proximal.steerable_length, "actuation");
    cfg.robot.bounds.distal_extension_max =
        get_number(actuation, "distal_extension_max", 10.0, "actuation");
    if (cfg.robot.bounds.proximal_insertion_max < 0.0)
        fail("actuation.proximal_insertion_max", "must be >= 0");
    if (cfg.robot.bounds.distal_extension_min > cfg.robot.bounds.distal_extension_max)
        fail("actuation.distal_extension_min", "must be <= distal_extension_max");

    const json ws = doc.value("workspace", json::object());
    cfg.voxel_size = get_number(ws, "voxel_size", 2.0, "workspace");
    if (!(cfg.voxel_size > 0.0)) fail("workspace.voxel_size", "must be > 0");
    if (ws.contains("grid")) {
        const auto& g = ws.at("grid");
        if (!g.is_array() || g.size() != 5)
            fail("workspace.grid", "expected 5 per-DoF counts "
                 "[proximal_pushpull, proximal_rotation, distal_extension, distal_pushpull, distal_rotation]");
        cfg.workspace_grid.proximal_pushpull = g[0].get<int>();
        cfg.workspace_grid.proximal_rotation = g[1].get<int>();
        cfg.workspace_grid.distal_extension = g[2].get<int>();
        cfg.workspace_grid.distal_pushpull = g[3].get<int>();
        cfg.workspace_grid.distal_rotation = g[4].get<int>();
    }
    cfg.workspace_grid.distal_extension_min = get_number(ws, "distal_extension_min", 0.0, "workspace");
    cfg.workspace_grid.distal_extension_max =
        get_number(ws, "distal_extension_max", cfg.robot.bounds.distal_extension_max, "workspace");

    const json ik = doc.value("ik", json::object());
    cfg.ik_weights.direction = get_number(ik, "direction_weight", 10.0, "ik");
    cfg.ik_weights.pushpull_change = get_number(ik, "pushpull_change_weight", 0.1, "ik");
    cfg.ik_weights.reach_tolerance = get_number(ik, "reach_tolerance", 1.0, "ik");
    if (ik.contains("target_position")) {
        TaskTarget target;
        const auto& tp = ik.at("target_position");
        if (!tp.is_array() || tp.size() != 3) fail("ik.target_position", "expected [x, y, z]");
        target.position = {tp[0].get<double>(), tp[1].get<double>(), tp[2].get<double>()};
        if (ik.contains("target_pointing")) {
            const auto& tz = ik.at("target_pointing");
            if (!tz.is_array() || tz.size() != 3) fail("ik.target_pointing", "expected [x, y, z]");
            target.pointing = Eigen::Vector3d(tz[0].get<double>(), tz[1].get<double>(), tz[2].get<double>());
            const double n = target.pointing.norm();
            if (n == 0.0) fail("ik.target_pointing", "must be nonzero");
            target.pointing /= n;
        }
        cfg.ik_target = target;
    }
    if (ik.contains("prev")) cfg.ik_prev = parse_actuation(ik.at("prev"), "ik.prev");

    if (doc.contains("fk"))
        cfg.fk_actuation = parse_actuation(require(doc.at("fk"), "actuation", "fk"), "fk.actuation");

    const json st = doc.value("statics", json::object());
    const std::string seg_name = st.value("segment", std::string("proximal"));
    if (seg_name != "proximal" && seg_name != "distal")
        fail("statics.segment", "expected \"proximal\" or \"distal\"");
    cfg.statics_on_proximal = seg_name == "proximal";
    cfg.statics_load.axial_force = get_number(st, "axial_force", 0.0, "statics");
    cfg.statics_load.tip_radial_force = get_number(st, "tip_radial_force", 0.0, "statics");
    cfg.statics_load.tip_tangent_force = get_number(st, "tip_tangent_force", 0.0, "statics");
    cfg.statics_load.active_length = get_number(st, "active_length", 0.0, "statics");
    cfg.statics_grid = st.value("grid", 512);
    if (cfg.statics_load.active_length == 0.0)
        cfg.statics_load.active_length =
            cfg.statics_on_proximal ? proximal.steerable_length : distal.steerable_length;

    const json ds = doc.value("design", json::object());
    cfg.design_options.epsilon0 = get_number(ds, "epsilon0", 2.0, "design");
    cfg.design_options.epsilon_step = get_number(ds, "epsilon_step", 0.01, "design");
    cfg.design_options.epsilon_max_iterations = ds.value("epsilon_max_iterations", 200);
    cfg.design_options.optimizer.population = ds.value("population", 20);
    cfg.design_options.optimizer.elite = ds.value("elite", 10);
    cfg.design_options.optimizer.max_iterations = ds.value("max_iterations", 20);
    cfg.design_options.optimizer.seed = cfg.seed;
    if (ds.contains("bounds")) {
        const auto& b = ds.at("bounds");
        auto pair = [&](const char* key, double& lo, double& hi) {
            if (!b.contains(key)) return;
            const auto& v = b.at(key);
            if (!v.is_array() || v.size() != 2) fail(std::string("design.bounds.") + key, "expected [min, max]");
            lo = v[0].get<double>();
            hi = v[1].get<double>();
        };
        pair("tenon_length", cfg.design_bounds.tenon_length_min, cfg.design_bounds.tenon_length_max);
        pair("slit_gap", cfg.design_bounds.slit_gap_min, cfg.design_bounds.slit_gap_max);
        pair("slit_count", cfg.design_bounds.slit_count_min, cfg.design_bounds.slit_count_max);
        pair("slit_width", cfg.design_bounds.slit_width_min, cfg.design_bounds.slit_width_max);
        pair("tenon_height", cfg.design_bounds.tenon_height_min, cfg.design_bounds.tenon_height_max);
        pair("uncut_angle", cfg.design_bounds.uncut_angle_min, cfg.design_bounds.uncut_angle_max);
        double tilt_lo = cfg.design_bounds.tenon_tilt_min, tilt_hi = cfg.design_bounds.tenon_tilt_max;
        pair("tenon_tilt", tilt_lo, tilt_hi);
        if (b.contains("tenon_tilt_deg")) {
            const auto& v = b.at("tenon_tilt_deg");
            tilt_lo = v[0].get<double>() * std::numbers::pi / 180.0;
            tilt_hi = v[1].get<double>() * std::numbers::pi / 180.0;
        }
        cfg.design_bounds.tenon_tilt_min = tilt_lo;
        cfg.design_bounds.tenon_tilt_max = tilt_hi;
        if (b.contains("tenon_counts"))
            cfg.design_bounds.tenon_counts = b.at("tenon_counts").get<std::vector<int>>();
    }
    auto fixed_of = [&](const ParsedSegment& s) {
        FixedGeometry g;
        g.steerable_length = s.steerable_length;
        g.outer_inner_radius = s.spec.outer.inner_radius;
        g.outer_outer_radius = s.spec.outer.outer_radius;
        g.inner_inner_radius = s.spec.inner.inner_radius;
        g.inner_outer_radius = s.spec.inner.outer_radius;
        g.youngs_modulus = youngs_modulus;
        return g;
    };
    cfg.design_proximal = fixed_of(proximal);
    cfg.design_distal = fixed_of(distal);

    if (doc.contains("dexterity")) {
        const auto& at = require(doc.at("dexterity"), "at", "dexterity");
        if (!at.is_array() || at.size() != 3) fail("dexterity.at", "expected [x, y, z]");
        cfg.dexterity_at = {at[0].get<double>(), at[1].get<double>(), at[2].get<double>()};
    }

    // echo the fully-resolved configuration
    json resolved;
    resolved["seed"] = cfg.seed;
    resolved["material"] = {{"youngs_modulus", youngs_modulus}};
    auto segment_json = [&](const SegmentSpec& s) {
        return json{{"outer_tube", tube_json(s.outer)},
                    {"inner_tube", tube_json(s.inner)},
                    {"steerable_length", s.steerable_length},
                    {"max_bend_angle", s.max_bend_angle},
                    {"pushpull_min", s.pushpull_min},
                    {"pushpull_max", s.pushpull_max},
                    {"neutral_offset_outer", s.outer_offset},
                    {"neutral_offset_inner", s.inner_offset}};
    };
    resolved["proximal"] = segment_json(cfg.robot.proximal);
    resolved["distal"] = segment_json(cfg.robot.distal);
    resolved["actuation"] = {{"proximal_insertion_max", cfg.robot.bounds.proximal_insertion_max},
                             {"distal_extension_min", cfg.robot.bounds.distal_extension_min},
                             {"distal_extension_max", cfg.robot.bounds.distal_extension_max}};
    resolved["workspace"] = {
        {"voxel_size", cfg.voxel_size},
        {"grid",
         {cfg.workspace_grid.proximal_pushpull, cfg.workspace_grid.proximal_rotation,
          cfg.workspace_grid.distal_extension, cfg.workspace_grid.distal_pushpull,
          cfg.workspace_grid.distal_rotation}},
        {"distal_extension_min", cfg.workspace_grid.distal_extension_min},
        {"distal_extension_max", cfg.workspace_grid.distal_extension_max}};
    resolved["ik"] = {{"direction_weight", cfg.ik_weights.direction},
                      {"pushpull_change_weight", cfg.ik_weights.pushpull_change},
                      {"reach_tolerance", cfg.ik_weights.reach_tolerance},
                      {"prev", actuation_json(cfg.ik_prev)}};
    if (cfg.ik_target) {
        resolved["ik"]["target_position"] = {cfg.ik_target->position.x(), cfg.ik_target->position.y(),
                                             cfg.ik_target->position.z()};
        resolved["ik"]["target_pointing"] = {cfg.ik_target->pointing.x(), cfg.ik_target->pointing.y(),
                                             cfg.ik_target->pointing.z()};
    }
    resolved["fk"] = {{"actuation", actuation_json(cfg.fk_actuation)}};
    resolved["statics"] = {{"segment", seg_name},
                           {"axial_force", cfg.statics_load.axial_force},
                           {"tip_radial_force", cfg.statics_load.tip_radial_force},
                           {"tip_tangent_force", cfg.statics_load.tip_tangent_force},
                           {"active_length", cfg.statics_load.active_length},
                           {"grid", cfg.statics_grid}};
    resolved["design"] = {
        {"epsilon0", cfg.design_options.epsilon0},
        {"epsilon_step", cfg.design_options.epsilon_step},
        {"epsilon_max_iterations", cfg.design_options.epsilon_max_iterations},
        {"population", cfg.design_options.optimizer.population},
        {"elite", cfg.design_options.optimizer.elite},
        {"max_iterations", cfg.design_options.optimizer.max_iterations},
        {"bounds",
         {{"tenon_length", {cfg.design_bounds.tenon_length_min, cfg.design_bounds.tenon_length_max}},
          {"slit_gap", {cfg.design_bounds.slit_gap_min, cfg.design_bounds.slit_gap_max}},
          {"slit_count", {cfg.design_bounds.slit_count_min, cfg.design_bounds.slit_count_max}},
          {"tenon_counts", cfg.design_bounds.tenon_counts},
          {"slit_width", {cfg.design_bounds.slit_width_min, cfg.design_bounds.slit_width_max}},
          {"tenon_height", {cfg.design_bounds.tenon_height_min, cfg.design_bounds.tenon_height_max}},
          {"tenon_tilt", {cfg.design_bounds.tenon_tilt_min, cfg.design_bounds.tenon_tilt_max}},
          {"uncut_angle", {cfg.design_bounds.uncut_angle_min, cfg.design_bounds.uncut_angle_max}}}}};
    resolved["dexterity"] = {{"at", {cfg.dexterity_at.x(), cfg.dexterity_at.y(), cfg.dexterity_at.z()}}};
    cfg.resolved = std::move(resolved);
    return cfg;
}

RobotConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
    }
    return load_config(doc);
}

}  // namespace catr
