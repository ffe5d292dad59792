#include "catr/slit_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace catr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_range(const char* field, double v, double lo, double hi) {
    if (v < lo || v > hi) {
        std::ostringstream msg;
        msg << "slit design: " << field << " = " << v << " outside [" << lo << ", " << hi << "]";
        throw ConfigError(msg.str());
    }
}

}  // namespace

void validate(const SlitDesign& sd, const DesignBounds& b) {
    if (!(sd.steerable_length > 0.0)) throw ConfigError("slit design: steerable_length must be > 0");
    check_range("uncut_angle", sd.uncut_angle, b.uncut_angle_min, b.uncut_angle_max);
    check_range("tenon_length", sd.tenon_length, b.tenon_length_min, b.tenon_length_max);
    check_range("slit_gap", sd.slit_gap, b.slit_gap_min, b.slit_gap_max);
    check_range("slit_count", sd.slit_count, b.slit_count_min, b.slit_count_max);
    check_range("slit_width", sd.slit_width, b.slit_width_min, b.slit_width_max);
    check_range("tenon_height", sd.tenon_height, b.tenon_height_min, b.tenon_height_max);
    check_range("tenon_tilt", sd.tenon_tilt, b.tenon_tilt_min, b.tenon_tilt_max);
    if (std::find(b.tenon_counts.begin(), b.tenon_counts.end(), sd.tenon_count) ==
        b.tenon_counts.end())
        throw ConfigError("slit design: tenon_count must be one of the allowed odd counts");
}

SegmentDesign make_segment_design(const SlitDesign& outer_slits, const SlitDesign& inner_slits,
                                  double outer_inner_radius, double outer_outer_radius,
                                  double inner_inner_radius, double inner_outer_radius,
                                  double youngs_modulus) {
    SegmentDesign sd;
    sd.outer_slits = outer_slits;
    sd.inner_slits = inner_slits;
    sd.outer_tube = {outer_inner_radius, outer_outer_radius, outer_slits.uncut_angle,
                     youngs_modulus};
    sd.inner_tube = {inner_inner_radius, inner_outer_radius, inner_slits.uncut_angle,
                     youngs_modulus};
    validate(sd.outer_tube);
    validate(sd.inner_tube);
    return sd;
}

double max_bend_angle(const SegmentDesign& sd, BendMode mode) {
    const double d_sum = neutral_offset(sd.outer_tube) + neutral_offset(sd.inner_tube);
    if (!(d_sum > 0.0))
        throw DegenerateGeometry("max_bend_angle: offset sum d_o + d_i must be > 0");
    const double opening = sd.outer_slits.slit_count * sd.outer_slits.slit_width;
    if (mode == BendMode::pulled) return opening / (d_sum * std::cos(sd.outer_slits.tenon_tilt));
    return opening / d_sum;
}

ObjectivePair objectives(const SegmentDesign& sd) {
    ObjectivePair out;
    const double theta_max = max_bend_angle(sd, BendMode::pulled);
    out.f1 = sd.outer_slits.steerable_length / theta_max;  // 1/kappa_max
    out.f2 = 1.0 / (second_moment(sd.inner_tube) + second_moment(sd.outer_tube));
    return out;
}

std::array<double, 2> coupling_residuals(const SlitDesign& s, const TubeCrossSection& tube) {
    const double unit = 2.0 * s.tenon_length - 2.0 * s.tenon_height / std::tan(s.tenon_tilt);
    const double r1 = unit * s.tenon_count - (kTwoPi - s.uncut_angle) * tube.outer_radius;
    const double r2 = s.slit_count * (s.slit_width + s.slit_gap) - s.steerable_length;
    return {r1, r2};
}

double inter_tube_residual(const SegmentDesign& sd) {
    const auto& o = sd.outer_slits;
    const auto& i = sd.inner_slits;
    return o.slit_count * o.slit_width / std::cos(o.tenon_tilt) - i.slit_count * i.slit_width;
}

// ---- optimization over the reduced parameter space ----
//
// The equality couplings are eliminated by substitution: N follows from the
// axial packing relation, beta from the circumferential one, and the inner
// slit width from the simultaneous-saturation relation. Free variables per
// tube pair (outer first): l_s, d_g, d_s, d_h, theta_s and l_s, d_g, d_h,
// theta_s. Derived values outside their boxes are charged as penalties.
namespace {

constexpr int kFree = 9;

struct DerivedDesign {
    SegmentDesign design;
    double violation2 = 0.0;  // sum of squared normalized box violations
};

double box_violation(double v, double lo, double hi) {
    if (v < lo) return (lo - v) / std::max(hi - lo, 1e-12);
    if (v > hi) return (v - hi) / std::max(hi - lo, 1e-12);
    return 0.0;
}

DerivedDesign derive(const std::vector<double>& x, int n_o, int n_i, const DesignBounds& b,
                     const FixedGeometry& g) {
    const double ls_o = x[0], dg_o = x[1], ds_o = x[2], dh_o = x[3], ths_o = x[4];
    const double ls_i = x[5], dg_i = x[6], dh_i = x[7], ths_i = x[8];
    const double L = g.steerable_length;

    DerivedDesign out;
    double& v2 = out.violation2;

    const double count_o = L / (ds_o + dg_o);
    const double beta_o_raw =
        kTwoPi - n_o * (2.0 * ls_o - 2.0 * dh_o / std::tan(ths_o)) / g.outer_outer_radius;

    const double saturation = count_o * ds_o / std::cos(ths_o);
    double ds_i_raw;
    if (saturation >= L - 1e-3) {
        ds_i_raw = b.slit_width_max;
        v2 += 1.0 + (saturation - L) * (saturation - L);
    } else {
        ds_i_raw = saturation * dg_i / (L - saturation);
    }
    const double ds_i = std::clamp(ds_i_raw, b.slit_width_min, b.slit_width_max);
    const double count_i = L / (ds_i + dg_i);
    const double beta_i_raw =
        kTwoPi - n_i * (2.0 * ls_i - 2.0 * dh_i / std::tan(ths_i)) / g.inner_outer_radius;

    const double beta_lo = std::max(b.uncut_angle_min, 1e-9);
    const double beta_o = std::clamp(beta_o_raw, beta_lo, std::min(b.uncut_angle_max, kTwoPi));
    const double beta_i = std::clamp(beta_i_raw, beta_lo, std::min(b.uncut_angle_max, kTwoPi));

    for (double v : {box_violation(beta_o_raw, b.uncut_angle_min, b.uncut_angle_max),
                     box_violation(beta_i_raw, b.uncut_angle_min, b.uncut_angle_max),
                     box_violation(ds_i_raw, b.slit_width_min, b.slit_width_max),
                     box_violation(count_o, b.slit_count_min, b.slit_count_max),
                     box_violation(count_i, b.slit_count_min, b.slit_count_max)})
        v2 += v * v;

    SlitDesign outer{L, beta_o, ls_o, dg_o, count_o, n_o, ds_o, dh_o, ths_o};
    SlitDesign inner{L, beta_i, ls_i, dg_i, count_i, n_i, ds_i, dh_i, ths_i};
    out.design = make_segment_design(outer, inner, g.outer_inner_radius, g.outer_outer_radius,
                                     g.inner_inner_radius, g.inner_outer_radius, g.youngs_modulus);

    // an uncut pair cannot bend at all; keep the exact-degenerate corner out
    const double d_sum =
        neutral_offset(out.design.outer_tube) + neutral_offset(out.design.inner_tube);
    if (!(d_sum > 1e-12)) v2 += 1.0;
    return out;
}

Box free_box(const DesignBounds& b) {
    Box box;
    box.lo = {b.tenon_length_min, b.slit_gap_min, b.slit_width_min, b.tenon_height_min,
              b.tenon_tilt_min,   b.tenon_length_min, b.slit_gap_min, b.tenon_height_min,
              b.tenon_tilt_min};
    box.hi = {b.tenon_length_max, b.slit_gap_max, b.slit_width_max, b.tenon_height_max,
              b.tenon_tilt_max,   b.tenon_length_max, b.slit_gap_max, b.tenon_height_max,
              b.tenon_tilt_max};
    return box;
}

}  // namespace

ParetoResult optimize_design(const DesignBounds& bounds, const FixedGeometry& fixed,
                             const DesignOptions& opts) {
    if (bounds.tenon_counts.empty())
        throw InfeasibleBounds("optimize_design: no tenon counts to enumerate");

    const Box box = free_box(bounds);
    long evaluations = 0;

    // design-space point layout: 9 free parameters then the two tenon counts
    auto eval_point = [&](const std::vector<double>& p) {
        return derive(std::vector<double>(p.begin(), p.begin() + kFree),
                      static_cast<int>(p[kFree]), static_cast<int>(p[kFree + 1]), bounds, fixed);
    };
    Objective f1 = [&](const std::vector<double>& p) {
        ++evaluations;
        const auto d = eval_point(p);
        return objectives(d.design).f1;
    };
    Objective f2 = [&](const std::vector<double>& p) {
        ++evaluations;
        const auto d = eval_point(p);
        return objectives(d.design).f2;
    };

    // Subproblem solver: exhaustive tenon-count enumeration, each combo seeded
    // genetic search plus a pattern-search polish on the penalized objective.
    ScalarSolver solve = [&](const Objective& target, std::uint64_t seed) {
        SearchResult best;
        best.best_value = std::numeric_limits<double>::infinity();
        int combo = 0;
        for (int n_o : bounds.tenon_counts) {
            for (int n_i : bounds.tenon_counts) {
                Objective penalized = [&, n_o, n_i](const std::vector<double>& x) {
                    std::vector<double> p(x);
                    p.push_back(n_o);
                    p.push_back(n_i);
                    const auto d = eval_point(p);
                    return target(p) + 1e6 * d.violation2;
                };
                OptimizerOptions ga_opts = opts.optimizer;
                ga_opts.seed = seed * 1315423911ull + static_cast<std::uint64_t>(combo);
                auto ga = ga_minimize(penalized, box, {}, ga_opts);
                auto polished = pattern_search(penalized, box, ga.best_point, 4000, 0.1);
                if (polished.best_value < best.best_value) {
                    best = polished;
                    best.best_point.push_back(n_o);
                    best.best_point.push_back(n_i);
                }
                ++combo;
            }
        }
        return best;
    };

    auto eps = epsilon_constraint_minimize(f1, f2, solve, opts.epsilon0, opts.epsilon_step,
                                           opts.epsilon_max_iterations, opts.optimizer.convergence_tol,
                                           opts.optimizer.seed);

    // Finishing the sweep by f1-convergence or by exhausting the epsilon
    // iterations are both normal terminations; status tracks feasibility.
    ParetoResult result;
    result.evaluations = evaluations;
    result.status = DesignStatus::ok;

    const double tol = opts.optimizer.feasibility_tol;
    auto feasible_design = [&](const std::vector<double>& p, DerivedDesign& dd) {
        dd = eval_point(p);
        return std::sqrt(dd.violation2) <= tol;
    };

    DerivedDesign chosen_dd;
    if (!feasible_design(eps.chosen, chosen_dd)) {
        // fall back to the stiffest corner, which is feasible whenever anything is
        DerivedDesign alt;
        if (!feasible_design(eps.f2_min_point, alt))
            throw InfeasibleBounds(
                "optimize_design: no parameter choice satisfies the coupling relations "
                "inside the given bounds");
        chosen_dd = alt;
        result.status = DesignStatus::non_converged;
        eps.chosen = eps.f2_min_point;
    }
    result.chosen = chosen_dd.design;
    result.chosen_objectives = objectives(chosen_dd.design);
    result.max_constraint_residual = std::sqrt(chosen_dd.violation2);

    for (const auto& tp : eps.trace)
        result.epsilon_trace.push_back({tp.epsilon, tp.f1, tp.f2, tp.feasible});

    // frontier: non-dominated feasible points among stage-1 anchors and the trace
    std::vector<ParetoPoint> candidates;
    auto add_candidate = [&](const std::vector<double>& p) {
        DerivedDesign dd;
        if (!feasible_design(p, dd)) return;
        const auto obj = objectives(dd.design);
        candidates.push_back({dd.design, obj.f1, obj.f2});
    };
    add_candidate(eps.f1_min_point);
    add_candidate(eps.f2_min_point);
    for (const auto& tp : eps.trace)
        if (tp.feasible) add_candidate(tp.point);

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        bool dominated = false, duplicate = false;
        for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
            if (i == j) continue;
            const bool le1 = candidates[j].f1 <= candidates[i].f1;
            const bool le2 = candidates[j].f2 <= candidates[i].f2;
            const bool lt = candidates[j].f1 < candidates[i].f1 || candidates[j].f2 < candidates[i].f2;
            if (le1 && le2 && lt) dominated = true;
        }
        for (const auto& kept : result.frontier)
            if (std::abs(kept.f1 - candidates[i].f1) < 1e-12 &&
                std::abs(kept.f2 - candidates[i].f2) < 1e-12)
                duplicate = true;
        if (!dominated && !duplicate) result.frontier.push_back(candidates[i]);
    }
    result.evaluations = evaluations;
    return result;
}

}  // namespace catr
